#pragma once

#include <cstddef>
#include <string>

namespace eigenrisk::kernels {

// Gaussian kernel values on the sphere: out[j] = exp(c * (dot(x, ys_j) - 1))
// with c = 2 / tau^2, for one query point x against n points stored row-major
// in ys (n x d).  Equivalent to exp(-|x - y|^2 / tau^2) for unit vectors.
using KernelRowFn = void (*)(const double* x, const double* ys, std::size_t n,
                             std::size_t d, double c, double* out);

void kernel_row_scalar(const double* x, const double* ys, std::size_t n,
                       std::size_t d, double c, double* out);
#if EIGENRISK_HAVE_AVX2
void kernel_row_avx2(const double* x, const double* ys, std::size_t n,
                     std::size_t d, double c, double* out);
#endif
#if EIGENRISK_HAVE_NEON
void kernel_row_neon(const double* x, const double* ys, std::size_t n,
                     std::size_t d, double c, double* out);
#endif

// Runtime selection: AVX2+FMA or NEON when compiled in and supported by the
// host, otherwise scalar.  EIGENRISK_FORCE_SCALAR=1 overrides.
KernelRowFn select_kernel_row();
std::string active_kernel_name();

// Symmetric Gram matrix (row-major m x m) and rectangular cross-kernel block
// (row-major rows_a x rows_b), both through the selected row kernel.
void gram(const double* xs, std::size_t m, std::size_t d, double c,
          double* out);
void cross_kernel(const double* xa, std::size_t na, const double* xb,
                  std::size_t nb, std::size_t d, double c, double* out);

}  // namespace eigenrisk::kernels
