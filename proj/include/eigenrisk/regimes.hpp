#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigenrisk/framework.hpp"

namespace eigenrisk::regimes {

// Bandwidth as a function of sample size and dimension, described by an
// asymptotic form against the pivot rate m^{-1/(d-1)} plus a modifier.
struct BandwidthSchedule {
  enum class Form { little_o, big_omega, theta };
  enum class Modifier { inverse_log, log, power, constant };

  Form form = Form::theta;
  Modifier modifier = Modifier::constant;
  double scale = 1.0;  // multiplicative constant c

  double realize(long long m, int d) const;

  // The three canonical schedules.
  static BandwidthSchedule narrowing_fast(double c = 10.0);   // o: c*pivot/ln m
  static BandwidthSchedule fixed(double tau);                 // Omega: tau
  static BandwidthSchedule critical(double c = 2.0);          // Theta: c*pivot
};

// Which of the three bandwidth regimes a schedule falls into.
enum class BandwidthCase { narrowing = 1, wide = 2, critical = 3 };
BandwidthCase classify_bandwidth_regime(const BandwidthSchedule& schedule);

// Sequence of (d, m) pairs for dimension scalings.
struct DimensionSchedule {
  std::vector<std::pair<int, long long>> grid;

  static DimensionSchedule fixed(int d, const std::vector<long long>& ms);
  // m = round(d^alpha) over the given dimensions.
  static DimensionSchedule polynomial(double alpha, const std::vector<int>& ds);
  // d = log2(m): pairs (d, 2^d) for d in [d_lo, d_hi].
  static DimensionSchedule logarithmic(int d_lo, int d_hi);
  // d = 2^(2^l), m = 2^(2^(2l)) for l = 1..l_max.
  static DimensionSchedule subpolynomial(int l_max);
};

// Measured constants of the boundedness/decay assumptions at a scan point,
// with pass flags against their configured thresholds.
struct AssumptionReport {
  double A = 0.0;    // kept trace + certified tail
  double b = 0.0;    // (m - L_m) * min head eigenvalue, capped at 1
  double c = 0.0;    // 1 / (min head eigenvalue * N(d, k_m))
  int k_m = 0;
  double L_m = 0.0;
  double U_m = 0.0;
  double tail_bound = 0.0;
  bool a_unit_ok = false;  // |A - 1| <= tail_bound + 1e-8 (unit-trace kernels)
  bool b_positive = false;
  bool c_finite = false;
};

struct ScanPoint {
  long long m = 0;
  int d = 0;
  double tau = 0.0;
  double kappa = 0.0;
  double e0 = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double total = 0.0;
  double upper_sq = 0.0;   // NaN when its precondition fails
  double upper_lin = 0.0;  // NaN when its precondition fails
  double lower = 0.0;      // NaN when its precondition fails
  AssumptionReport assumptions;
  std::string flags;  // semicolon-joined precondition notes; empty when clean
};

// classification takes one of {benign, tempered, catastrophic,
// inconsistent_nonbenign, indeterminate}; thresholds are documented at
// classify_risk_curve.
struct RegimeReport {
  std::string classification;
  std::vector<ScanPoint> points;
  double excess_slope = 0.0;  // log-log slope of (total - sigma^2) vs m
  double total_slope = 0.0;   // log-log slope of total vs m, upper half
};

struct GridPoint {
  int d;
  long long m;
  double tau;
};

AssumptionReport verify_assumptions(const framework::SpectrumView& view, int d,
                                    double m);

// Distribution-free upper bounds on the risk at sample size m.  The squared
// variant charges the head bias with sum N_i / lambda_i^2 * (B A / m)^2, the
// linear variant with sum N_i / lambda_i * B^2 A / m^2; both share the
// prefactor (1 - L_m/m)^{-1} (1 - m/U_m)^{-1} multiplying head-tail mass and
// noise.  Returns NaN with a note when L_m >= m or U_m <= m.
enum class UpperVariant { squared, linear };
struct BoundResult {
  bool ok = false;
  double value = 0.0;
  std::string note;
};
BoundResult master_upper_bound(const framework::SpectrumView& view,
                               const framework::TargetSpec& target,
                               double sigma_sq, double m, UpperVariant variant);

// Noise-floor lower bound (1 - (b/(b+1))^2 L_m/m)^{-1} sigma^2.
BoundResult risk_lower_bound(const framework::SpectrumView& view,
                             double sigma_sq, double m);

// Full scan: spectrum, kappa, prediction, bounds and assumption constants at
// every grid point, plus a regime classification of the excess-risk curve.
RegimeReport scan(const std::vector<GridPoint>& grid, double target_mass0,
                  double sigma_sq);

std::vector<GridPoint> make_grid(const DimensionSchedule& dims,
                                 const BandwidthSchedule& bandwidth);

// Multiplicity scaling diagnostics for dimension schedules: ratios of N(d, k)
// around k_m against m, and the index-vs-dimension window.
struct MultiplicityScalingPoint {
  int d = 0;
  long long m = 0;
  int k_m = 0;
  double L_m_over_m = 0.0;
  double m_over_U_m = 0.0;
  double n_below_over_m = 0.0;  // N(d, k_m - 1) / m
  double n_at_over_m = 0.0;     // N(d, k_m) / m
  double n_above_over_m = 0.0;  // N(d, k_m + 1) / m
  bool index_window_ok = false;     // d/5 <= k_m <= d/2
  bool count_brackets_ok = false;   // the three ratios inside (1/54,1/3)x(1/9,1)x(2/3,6)
};
std::vector<MultiplicityScalingPoint> multiplicity_scaling_report(
    const DimensionSchedule& dims);

// Classify a sequence of (m, total) points given the noise level.
// Thresholds: benign when (total - sigma^2)/sigma^2 < 0.05 at the largest
// point and the excess log-log slope is <= -0.1; catastrophic when total is
// strictly increasing with slope >= +0.2 over the last half; tempered when
// the excess sits within +-20% of a horizontal fit; with `dimension_varies`
// set, a series whose excess never drops below 0.05 sigma^2 and fits none of
// the above reads inconsistent_nonbenign; otherwise indeterminate.
std::string classify_risk_curve(const std::vector<std::pair<long long, double>>& totals,
                                double sigma_sq, bool dimension_varies = false,
                                double* excess_slope_out = nullptr,
                                double* total_slope_out = nullptr);

}  // namespace eigenrisk::regimes
