#include "eigenrisk/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace eigenrisk::kernels {

void kernel_row_scalar(const double* x, const double* ys, std::size_t n,
                       std::size_t d, double c, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    const double* y = ys + j * d;
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += x[i] * y[i];
    out[j] = std::exp(c * (dot - 1.0));
  }
}

namespace {

bool force_scalar() {
  const char* env = std::getenv("EIGENRISK_FORCE_SCALAR");
  return env && env[0] == '1';
}

struct Selection {
  KernelRowFn fn;
  const char* name;
};

Selection select_impl() {
  if (!force_scalar()) {
#if EIGENRISK_HAVE_AVX2
#if defined(__GNUC__) || defined(__clang__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
      return {kernel_row_avx2, "avx2"};
#endif
#endif
#if EIGENRISK_HAVE_NEON
    return {kernel_row_neon, "neon"};
#endif
  }
  return {kernel_row_scalar, "scalar"};
}

const Selection& selection() {
  static const Selection sel = select_impl();
  return sel;
}

}  // namespace

KernelRowFn select_kernel_row() { return selection().fn; }

std::string active_kernel_name() { return selection().name; }

void gram(const double* xs, std::size_t m, std::size_t d, double c,
          double* out) {
  KernelRowFn row = select_kernel_row();
  for (std::size_t i = 0; i < m; ++i)
    row(xs + i * d, xs, m, d, c, out + i * m);
  // Exact symmetry for the Cholesky path: average the two triangles (they
  // can differ in the last ulp when SIMD and remainder lanes split
  // differently across the diagonal).
  for (std::size_t i = 0; i < m; ++i) {
    out[i * m + i] = 1.0;  // dot(x, x) = 1 on the sphere
    for (std::size_t j = i + 1; j < m; ++j) {
      double v = 0.5 * (out[i * m + j] + out[j * m + i]);
      out[i * m + j] = v;
      out[j * m + i] = v;
    }
  }
}

void cross_kernel(const double* xa, std::size_t na, const double* xb,
                  std::size_t nb, std::size_t d, double c, double* out) {
  KernelRowFn row = select_kernel_row();
  for (std::size_t i = 0; i < na; ++i)
    row(xa + i * d, xb, nb, d, c, out + i * nb);
}

}  // namespace eigenrisk::kernels
