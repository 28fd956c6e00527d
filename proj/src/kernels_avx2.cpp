#if EIGENRISK_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "eigenrisk/kernels.hpp"

namespace eigenrisk::kernels {

namespace {

// exp for 4 doubles: Cody-Waite reduction x = n ln2 + r, degree-13 Taylor on
// |r| <= ln2/2 (remainder < 6e-16), then 2^n applied in two halves so the
// denormal range underflows gradually instead of wrapping the exponent bias.
inline __m256d exp4(__m256d x) {
  const __m256d inv_ln2 = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

  x = _mm256_max_pd(x, _mm256_set1_pd(-746.0));
  x = _mm256_min_pd(x, _mm256_set1_pd(709.0));

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, inv_ln2),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  const double coef[] = {
      1.0 / 6227020800.0,  // 1/13!
      1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0, 1.0 / 5040.0, 1.0 / 720.0, 1.0 / 120.0, 1.0 / 24.0,
      1.0 / 6.0, 1.0 / 2.0, 1.0, 1.0};
  __m256d p = _mm256_set1_pd(coef[0]);
  for (int i = 1; i < 14; ++i)
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(coef[i]));

  // 2^n = 2^a * 2^b with a = floor(n/2), b = n - a; each half stays within
  // the normal exponent range for n >= -2044.
  alignas(32) double n_arr[4];
  _mm256_store_pd(n_arr, n);
  alignas(32) double scale_a[4], scale_b[4];
  for (int lane = 0; lane < 4; ++lane) {
    long long ni = static_cast<long long>(n_arr[lane]);
    long long a = ni / 2;
    long long b = ni - a;
    std::uint64_t bits_a = static_cast<std::uint64_t>(1023 + a) << 52;
    std::uint64_t bits_b = static_cast<std::uint64_t>(1023 + b) << 52;
    __builtin_memcpy(&scale_a[lane], &bits_a, 8);
    __builtin_memcpy(&scale_b[lane], &bits_b, 8);
  }
  p = _mm256_mul_pd(p, _mm256_load_pd(scale_b));
  return _mm256_mul_pd(p, _mm256_load_pd(scale_a));
}

}  // namespace

void kernel_row_avx2(const double* x, const double* ys, std::size_t n,
                     std::size_t d, double c, double* out) {
  const __m256d cc = _mm256_set1_pd(c);
  const __m256d minus_one = _mm256_set1_pd(-1.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const double* y0 = ys + (j + 0) * d;
    const double* y1 = ys + (j + 1) * d;
    const double* y2 = ys + (j + 2) * d;
    const double* y3 = ys + (j + 3) * d;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < d; ++i) {
      __m256d xi = _mm256_set1_pd(x[i]);
      __m256d yi = _mm256_set_pd(y3[i], y2[i], y1[i], y0[i]);
      acc = _mm256_fmadd_pd(xi, yi, acc);
    }
    __m256d arg = _mm256_mul_pd(cc, _mm256_add_pd(acc, minus_one));
    _mm256_storeu_pd(out + j, exp4(arg));
  }
  for (; j < n; ++j) {
    const double* y = ys + j * d;
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += x[i] * y[i];
    out[j] = std::exp(c * (dot - 1.0));
  }
}

}  // namespace eigenrisk::kernels

#endif  // EIGENRISK_HAVE_AVX2
