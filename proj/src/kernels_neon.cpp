#if EIGENRISK_HAVE_NEON

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "eigenrisk/kernels.hpp"

namespace eigenrisk::kernels {

// NEON variant: two-lane FMA dot products; the exp stays on libm, which is
// already the dominant cost and keeps results identical to the scalar path.
void kernel_row_neon(const double* x, const double* ys, std::size_t n,
                     std::size_t d, double c, double* out) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double* y0 = ys + (j + 0) * d;
    const double* y1 = ys + (j + 1) * d;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < d; ++i) {
      float64x2_t xi = vdupq_n_f64(x[i]);
      double lanes[2] = {y0[i], y1[i]};
      acc = vfmaq_f64(acc, xi, vld1q_f64(lanes));
    }
    out[j + 0] = std::exp(c * (vgetq_lane_f64(acc, 0) - 1.0));
    out[j + 1] = std::exp(c * (vgetq_lane_f64(acc, 1) - 1.0));
  }
  for (; j < n; ++j) {
    const double* y = ys + j * d;
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += x[i] * y[i];
    out[j] = std::exp(c * (dot - 1.0));
  }
}

}  // namespace eigenrisk::kernels

#endif  // EIGENRISK_HAVE_NEON
