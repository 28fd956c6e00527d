#include "eigenrisk/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigenrisk/errors.hpp"

namespace eigenrisk::bessel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_vx(double v, double x) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw usage_error("Bessel order must be finite and >= 0");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw usage_error("Bessel argument must be finite and >= 0");
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double segura_mid(double v, double x) {
  double lo = x / (v + 1.0 + std::sqrt((v + 1.0) * (v + 1.0) + x * x));
  double hi = x / (v + 0.5 + std::sqrt((v + 0.5) * (v + 0.5) + x * x));
  return 0.5 * (lo + hi);
}

// Single downward pass of rho_{u-1} = x / (2u + x rho_u) from order
// v + n + steps to v, returning rho_v and adding log rho_{v+i}, i = 0..n-1,
// into *log_chain when requested.
double ratio_descend(double v, int n, double x, double* log_chain) {
  int steps = 30 + static_cast<int>(std::ceil(x));
  double rho = segura_mid(v + n + steps, x);
  for (int j = n + steps; j >= 1; --j) {
    double u = v + j;
    rho = x / (2.0 * u + x * rho);
    if (log_chain && j <= n) *log_chain += std::log(rho);
  }
  return rho;
}

}  // namespace

double log_bessel_i_series(double v, double x) {
  require_vx(v, x);
  if (x == 0.0) return v == 0.0 ? 0.0 : kNegInf;
  double log_half_x = std::log(0.5 * x);
  double acc = kNegInf;
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 20000; ++j) {
    double lt = (v + 2.0 * j) * log_half_x - std::lgamma(j + 1.0) -
                std::lgamma(v + j + 1.0);
    acc = log_add(acc, lt);
    // Terms rise to a single peak then fall; stop once 60 nats below the sum.
    if (lt < prev && lt < acc - 60.0) return acc;
    prev = lt;
  }
  throw numeric_error("Bessel series did not converge");
}

double bessel_ratio(double v, double x) {
  require_vx(v, x);
  if (x == 0.0) return 0.0;
  return ratio_descend(v, 0, x, nullptr);
}

double log_bessel_i(double v, double x) {
  require_vx(v, x);
  if (x == 0.0) return v == 0.0 ? 0.0 : kNegInf;
  int n = static_cast<int>(std::floor(v));
  if (n <= 0) return log_bessel_i_series(v, x);
  double base = v - n;
  double log_base = log_bessel_i_series(base, x);
  double chain = 0.0;
  ratio_descend(base, n, x, &chain);
  return log_base + chain;
}

RatioBracket bessel_ratio_bracket(double v, double x) {
  require_vx(v, x);
  RatioBracket out;
  out.lo = x / (v + 1.0 + std::sqrt((v + 1.0) * (v + 1.0) + x * x));
  out.hi = x / (v + 0.5 + std::sqrt((v + 0.5) * (v + 0.5) + x * x));
  return out;
}

}  // namespace eigenrisk::bessel
