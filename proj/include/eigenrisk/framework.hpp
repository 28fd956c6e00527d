#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eigenrisk/spectrum.hpp"

namespace eigenrisk::framework {

// One eigenvalue level: a value (stored in log space for dynamic range) with
// a multiplicity (log space as well; counts can exceed 2^64 in high degree).
struct Mode {
  double log_lambda;
  double log_count;
  int degree;    // label carried from the spectrum; sorted index for synthetic
  double count;  // linear-domain multiplicity, exact below 2^53 (cumulative
                 // index sums must not pick up exp/log round-off)
};

// A finite spectrum plus a certified bound on the omitted trace mass.
// Modes are sorted by decreasing eigenvalue.
struct SpectrumView {
  std::vector<Mode> modes;
  double tail_bound = 0.0;

  double trace() const;            // sum of count * lambda over kept modes
  double flattened_count() const;  // sum of counts
};

SpectrumView view_of(const spectrum::EigenSystem& system);
// Synthetic spectrum from (lambda, count) pairs; any order, values > 0.
SpectrumView synthetic_view(const std::vector<std::pair<double, double>>& modes);

// Self-consistent regularizer: sum_i count_i * lambda_i / (lambda_i + kappa)
// + delta / kappa = m, solved by bisection on log kappa.  The omitted tail is
// absorbed as an extra tail_bound / kappa term; `tail_shift` reports the
// relative movement of kappa caused by that term so callers can certify it.
// All internal arithmetic stays in log space: for deep spectra (d = 2 at
// large m) kappa itself underflows doubles, so log_kappa is authoritative
// and `kappa` may read 0.
struct KappaResult {
  double kappa;
  double log_kappa;
  double residual;    // fixed-point equation residual at the returned kappa
  double tail_shift;  // |kappa_with_tail - kappa_without| / kappa
};
KappaResult solve_kappa(const SpectrumView& view, double m, double delta);

// Learnability of each mode: L_i = lambda_i / (lambda_i + kappa), evaluated
// as a sigmoid of log_lambda - log_kappa.
std::vector<double> learnabilities(const SpectrumView& view, double log_kappa);

// Overfitting coefficient E = m / (m - sum_i count_i * L_i^2), including the
// tail's contribution bounded by tail_bound / kappa.
double overfitting_coefficient(const SpectrumView& view, double log_kappa,
                               double m);

// Target function described by its squared-coefficient mass per degree.
struct TargetSpec {
  std::vector<std::pair<int, double>> mass_by_degree;  // (degree, mass)
  double norm_sq = 0.0;  // total mass; may exceed the listed entries' sum
  std::optional<double> coef_bound;  // per-coefficient bound B when known

  static TargetSpec constant(double value);  // mass value^2 at degree 0
  static TargetSpec zero();
};

struct RiskPrediction {
  double kappa = 0.0;
  double e_factor = 0.0;
  double bias = 0.0;      // E * sum_k mass_k * (1 - L_k)^2
  double variance = 0.0;  // E * sigma^2
  double total = 0.0;
  double residual = 0.0;  // kappa fixed-point residual
};

// Closed-form risk under the Gaussian-design ansatz; delta = 0 gives the
// minimum-norm interpolant.  Mass at degrees outside the view is treated as
// fully unlearnable (factor 1).
RiskPrediction predicted_risk(const SpectrumView& view, const TargetSpec& target,
                              double sigma_sq, double m, double delta = 0.0);

// Effective ranks at flattened (0-based) index k over the tail strictly
// beyond k: r_k = sum_{i>k} lambda_i / lambda_{k+1},
// R_k = (sum_{i>k} lambda_i)^2 / sum_{i>k} lambda_i^2.
// The certified tail mass is folded in as a virtual level so that
// r_k <= R_k <= r_k^2 holds for the genuine (infinite) spectrum.
struct EffectiveRanks {
  double r;
  double R;
};
EffectiveRanks effective_ranks(const SpectrumView& view, double k_flat);

// Cumulative index summary of a view at sample size m (Definition-3 style,
// applied to whatever multiset the view holds): k_m is the last level whose
// cumulative flattened count stays below m; L_m that cumulative count; U_m
// adds the next level's count.
struct ViewIndexSummary {
  int level_index;    // index into modes of the k_m level; -1 if none fits
  int degree;         // degree label of that level (or -1)
  double L_m;
  double U_m;
  double lambda_min_head;  // min eigenvalue among levels 0..level_index
};
ViewIndexSummary view_index_summary(const SpectrumView& view, double m);

// Two-sided bracket for the overfitting coefficient E_0 from effective ranks,
// plus the coarse lower bound via L_m.  Each side records whether its
// precondition held; value is NaN when it did not.
struct E0Side {
  bool ok = false;
  double value = 0.0;
  double k_used = 0.0;
  std::string note;
};
struct E0Bracket {
  E0Side upper;       // (1 - k/m)^{-1} (1 - m/(k + r_k))^{-1} at k = L_m
  E0Side lower;       // 1 / (1 - (m/k) (k-m)/(k-m+r_k)) at k = ceil(5m/4)
  E0Side zhou_lower;  // (1 - (b/(b+1))^2 L_m/m)^{-1} with measured b
};
E0Bracket e0_bracket(const SpectrumView& view, double m);

// Benign-overfitting necessary-condition probe: the smallest k with
// m < k + r_k, reported with the ratios the condition compares.
struct BenignCheck {
  double k_n;        // smallest k with m < k + r_k
  double k_n_over_m;
  double m_over_R;   // m / R_{k_n}
};
BenignCheck benign_condition_check(const SpectrumView& view, double m);

// Catastrophic-overfitting probe: r_k / k at k = ceil((1+eps) m).
double catastrophic_condition_check(const SpectrumView& view, double m,
                                    double eps);

}  // namespace eigenrisk::framework
