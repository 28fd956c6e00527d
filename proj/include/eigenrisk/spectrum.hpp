#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace eigenrisk::spectrum {

// Gaussian kernel K(x,y) = exp(-|x-y|^2 / tau^2) restricted to S^{d-1}.
// T = 2/tau^2 is the Bessel argument of the eigenvalue closed form.
struct SpectrumSpec {
  int d = 0;
  double tau = 0.0;
  double T = 0.0;
};

SpectrumSpec make_spec(int d, double tau);

struct DegreeEigen {
  int k = 0;
  double log_lambda = 0.0;  // log of the distinct eigenvalue of degree k
  double log_count = 0.0;   // log N(d,k)
  std::optional<std::uint64_t> count_exact;
};

// Truncated spectrum with a certified bound on the omitted trace mass.
struct EigenSystem {
  SpectrumSpec spec;
  std::vector<DegreeEigen> degrees;
  double trace_partial = 0.0;    // sum over included degrees of N * lambda
  double tail_bound = 0.0;       // certified upper bound on the omitted mass
  double flattened_total = 0.0;  // cumulative multiplicity of included degrees
};

// log lambda_k = -T + (d-2) log tau + log Gamma(d/2) + log I_{k+d/2-1}(T).
double eigenvalue_log(const SpectrumSpec& spec, int k);

// Includes degrees until the flattened count reaches margin*m and the
// certified geometric tail bound drops below tail_tol * trace_partial.
// The tail bound combines the per-step eigenvalue ratio bound
// lambda_{k+1}/lambda_k < 1/(tau^2 (k + d/2)) with the multiplicity growth
// factor; degrees keep being added until that geometric ratio is <= 1/2.
EigenSystem build_spectrum(const SpectrumSpec& spec, long long m,
                           double tail_tol = 1e-10, double margin = 10.0);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Bracket for the consecutive eigenvalue ratio lambda_{k+1}/lambda_k:
//   T/(2(k+d/2)+T) < ratio < T/((k+d/2-1/2)+T).
Interval eigen_ratio_bracket(const SpectrumSpec& spec, int k);

struct RatioReport {
  int n_checked = 0;
  double max_violation = 0.0;  // positive means a bracket was violated
};

RatioReport check_ratio_bounds(const EigenSystem& sys);

// Two-sided bracket for log lambda_0.  Base case: for even d the Yang-Chu
// bounds e^T/(1+2T) < I_0(T) < e^T/sqrt(1+2T); for odd d the exact
// I_{1/2}(T) = sqrt(2/(pi T)) sinh T.  The chain up to order d/2-1 then uses
// the per-step ratio bracket.  For d = 3 the bracket is a single point.
Interval first_eigenvalue_log_bracket(int d, double tau);

}  // namespace eigenrisk::spectrum
