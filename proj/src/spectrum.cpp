#include "eigenrisk/spectrum.hpp"

#include <cmath>
#include <limits>

#include "eigenrisk/bessel.hpp"
#include "eigenrisk/errors.hpp"
#include "eigenrisk/harmonics.hpp"

namespace eigenrisk::spectrum {

namespace {

// Common log factor of every eigenvalue: -T + (d-2) log tau + log Gamma(d/2).
double log_prefactor(const SpectrumSpec& spec) {
  return -spec.T + (spec.d - 2.0) * std::log(spec.tau) +
         std::lgamma(spec.d / 2.0);
}

// Multiplicity growth N(d,k+1)/N(d,k); decreasing in k, limit 1.
double count_growth(int d, int k) {
  if (d == 2) return k == 0 ? 2.0 : 1.0;
  return ((2.0 * k + d) / (2.0 * k + d - 2.0)) *
         ((k + d - 2.0) / (k + 1.0));
}

}  // namespace

SpectrumSpec make_spec(int d, double tau) {
  if (d < 2)
    throw usage_error("spectrum requires d >= 2 (points live on S^{d-1})");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw usage_error("bandwidth tau must be finite and positive");
  SpectrumSpec spec;
  spec.d = d;
  spec.tau = tau;
  spec.T = 2.0 / (tau * tau);
  return spec;
}

double eigenvalue_log(const SpectrumSpec& spec, int k) {
  if (k < 0) throw usage_error("degree k must be >= 0");
  return log_prefactor(spec) +
         bessel::log_bessel_i(k + spec.d / 2.0 - 1.0, spec.T);
}

EigenSystem build_spectrum(const SpectrumSpec& spec, long long m,
                           double tail_tol, double margin) {
  if (m < 1) throw usage_error("sample size m must be >= 1");
  EigenSystem sys;
  sys.spec = spec;

  const double flat_need = margin * static_cast<double>(m);
  double log_lambda = eigenvalue_log(spec, 0);
  for (int k = 0;; ++k) {
    if (k > 100000) throw numeric_error("spectrum truncation did not converge");
    auto count = harmonics::multiplicity(spec.d, k);
    DegreeEigen deg;
    deg.k = k;
    deg.log_lambda = log_lambda;
    deg.log_count = count.value_log;
    deg.count_exact = count.value_exact;
    sys.degrees.push_back(deg);
    sys.trace_partial += std::exp(count.value_log + log_lambda);
    sys.flattened_total += std::exp(count.value_log);

    // Certified geometric tail: for j >= k the flattened-step ratio is at most
    //   q g = [T / (2(k+d/2))] * [N(d,k+1)/N(d,k)]
    // since both factors decrease in degree.  Once q g <= 1/2 the omitted
    // trace is below N_k lambda_k * qg/(1-qg).
    double q = spec.T / (2.0 * (k + spec.d / 2.0));
    double qg = q * count_growth(spec.d, k);
    if (qg <= 0.5 && sys.flattened_total >= flat_need) {
      double tail = std::exp(count.value_log + log_lambda) * qg / (1.0 - qg);
      if (tail <= tail_tol * sys.trace_partial) {
        sys.tail_bound = tail;
        break;
      }
    }
    // Advance the eigenvalue one degree through the Bessel ratio; one
    // downward-recurrence call per degree keeps the build O(K (T + 30)).
    log_lambda += std::log(bessel::bessel_ratio(k + spec.d / 2.0 - 1.0, spec.T));
  }
  return sys;
}

Interval eigen_ratio_bracket(const SpectrumSpec& spec, int k) {
  if (k < 0) throw usage_error("degree k must be >= 0");
  Interval out;
  double a = k + spec.d / 2.0;
  out.lo = spec.T / (2.0 * a + spec.T);
  out.hi = spec.T / ((a - 0.5) + spec.T);
  return out;
}

RatioReport check_ratio_bounds(const EigenSystem& sys) {
  RatioReport report;
  if (sys.degrees.size() >= 2) report.max_violation = -HUGE_VAL;
  for (std::size_t i = 0; i + 1 < sys.degrees.size(); ++i) {
    double ratio =
        std::exp(sys.degrees[i + 1].log_lambda - sys.degrees[i].log_lambda);
    Interval bracket = eigen_ratio_bracket(sys.spec, sys.degrees[i].k);
    double violation =
        std::max(bracket.lo - ratio, ratio - bracket.hi);
    report.max_violation = std::max(report.max_violation, violation);
    ++report.n_checked;
  }
  return report;
}

Interval first_eigenvalue_log_bracket(int d, double tau) {
  SpectrumSpec spec = make_spec(d, tau);
  const double T = spec.T;
  double lo, hi;
  int steps;  // Segura ratio steps from the base order up to d/2 - 1
  if (d % 2 == 0) {
    // Yang-Chu: e^T/(1+2T) < I_0(T) < e^T/sqrt(1+2T).
    lo = T - std::log1p(2.0 * T);
    hi = T - 0.5 * std::log1p(2.0 * T);
    steps = d / 2 - 1;
  } else {
    // Exact I_{1/2}(T) = sqrt(2/(pi T)) sinh(T).
    double exact = 0.5 * std::log(2.0 / (M_PI * T)) + T +
                   std::log1p(-std::exp(-2.0 * T)) - std::log(2.0);
    lo = hi = exact;
    steps = (d - 3) / 2;
  }
  double u = (d % 2 == 0) ? 0.0 : 0.5;
  for (int i = 0; i < steps; ++i, u += 1.0) {
    bessel::RatioBracket rb = bessel::bessel_ratio_bracket(u, T);
    lo += std::log(rb.lo);
    hi += std::log(rb.hi);
  }
  double common = log_prefactor(spec);
  return Interval{lo + common, hi + common};
}

}  // namespace eigenrisk::spectrum
