#include "eigenrisk/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigenrisk/errors.hpp"
#include "eigenrisk/harmonics.hpp"
#include "eigenrisk/spectrum.hpp"

namespace eigenrisk::regimes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double modifier_factor(BandwidthSchedule::Modifier modifier, long long m) {
  double lm = std::log(static_cast<double>(std::max<long long>(m, 3)));
  switch (modifier) {
    case BandwidthSchedule::Modifier::inverse_log: return 1.0 / lm;
    case BandwidthSchedule::Modifier::log: return lm;
    case BandwidthSchedule::Modifier::power: return std::pow(m, -0.1);
    case BandwidthSchedule::Modifier::constant: return 1.0;
  }
  throw usage_error("unknown bandwidth modifier");
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

double BandwidthSchedule::realize(long long m, int d) const {
  if (m < 1) throw usage_error("bandwidth schedule needs m >= 1");
  if (d < 2) throw usage_error("bandwidth schedule needs d >= 2");
  double pivot = std::pow(static_cast<double>(m), -1.0 / (d - 1.0));
  double base = (form == Form::big_omega) ? 1.0 : pivot;
  return scale * base * modifier_factor(modifier, m);
}

BandwidthSchedule BandwidthSchedule::narrowing_fast(double c) {
  return BandwidthSchedule{Form::little_o, Modifier::inverse_log, c};
}

BandwidthSchedule BandwidthSchedule::fixed(double tau) {
  return BandwidthSchedule{Form::big_omega, Modifier::constant, tau};
}

BandwidthSchedule BandwidthSchedule::critical(double c) {
  return BandwidthSchedule{Form::theta, Modifier::constant, c};
}

BandwidthCase classify_bandwidth_regime(const BandwidthSchedule& schedule) {
  using Form = BandwidthSchedule::Form;
  using Modifier = BandwidthSchedule::Modifier;
  switch (schedule.form) {
    case Form::little_o:
      if (schedule.modifier == Modifier::inverse_log ||
          schedule.modifier == Modifier::power)
        return BandwidthCase::narrowing;
      throw usage_error(
          "little-o schedule needs a decaying modifier (inverse_log or power)");
    case Form::big_omega:
      if (schedule.modifier == Modifier::constant ||
          schedule.modifier == Modifier::log)
        return BandwidthCase::wide;
      throw usage_error(
          "big-omega schedule needs a non-decaying modifier (constant or log)");
    case Form::theta:
      if (schedule.modifier == Modifier::constant)
        return BandwidthCase::critical;
      throw usage_error("theta schedule admits only the constant modifier");
  }
  throw usage_error("unknown bandwidth form");
}

DimensionSchedule DimensionSchedule::fixed(int d,
                                           const std::vector<long long>& ms) {
  DimensionSchedule out;
  for (long long m : ms) out.grid.emplace_back(d, m);
  return out;
}

DimensionSchedule DimensionSchedule::polynomial(double alpha,
                                                const std::vector<int>& ds) {
  if (!(alpha > 0.0)) throw usage_error("polynomial schedule needs alpha > 0");
  DimensionSchedule out;
  for (int d : ds) {
    double m = std::pow(static_cast<double>(d), alpha);
    if (m > 9e15) throw usage_error("polynomial schedule overflows m");
    out.grid.emplace_back(d, std::llround(m));
  }
  return out;
}

DimensionSchedule DimensionSchedule::logarithmic(int d_lo, int d_hi) {
  if (d_lo < 2 || d_hi < d_lo || d_hi > 40)
    throw usage_error("logarithmic schedule needs 2 <= d_lo <= d_hi <= 40");
  DimensionSchedule out;
  for (int d = d_lo; d <= d_hi; ++d)
    out.grid.emplace_back(d, static_cast<long long>(1) << d);
  return out;
}

DimensionSchedule DimensionSchedule::subpolynomial(int l_max) {
  if (l_max < 1 || l_max > 2)
    throw usage_error("subpolynomial schedule supports l in {1, 2}");
  DimensionSchedule out;
  for (int l = 1; l <= l_max; ++l) {
    int d = 1 << (1 << l);                                  // 2^(2^l)
    long long m = static_cast<long long>(1) << (1 << (2 * l));  // 2^(2^(2l))
    out.grid.emplace_back(d, m);
  }
  return out;
}

AssumptionReport verify_assumptions(const framework::SpectrumView& view, int d,
                                    double m) {
  framework::ViewIndexSummary summary =
      framework::view_index_summary(view, m);
  AssumptionReport out;
  out.A = view.trace() + view.tail_bound;
  out.tail_bound = view.tail_bound;
  out.k_m = summary.degree;
  out.L_m = summary.L_m;
  out.U_m = summary.U_m;
  // When even the first level's count reaches m (L_m = 0) the head minimum
  // degenerates; the largest eigenvalue still witnesses both constants.
  double lambda_head = summary.level_index >= 0
                           ? summary.lambda_min_head
                           : std::exp(view.modes.front().log_lambda);
  int degree_head = summary.level_index >= 0 ? summary.degree
                                             : view.modes.front().degree;
  out.b = std::min(1.0, (m - summary.L_m) * lambda_head);
  out.c = 1.0 /
          (lambda_head * std::exp(harmonics::log_multiplicity(d, degree_head)));
  out.a_unit_ok = std::abs(out.A - 1.0) <= view.tail_bound + 1e-8;
  out.b_positive = out.b > 0.0;
  out.c_finite = std::isfinite(out.c);
  return out;
}

BoundResult master_upper_bound(const framework::SpectrumView& view,
                               const framework::TargetSpec& target,
                               double sigma_sq, double m, UpperVariant variant) {
  BoundResult out;
  if (!target.coef_bound) {
    out.value = kNaN;
    out.note = "no per-coefficient bound for the target";
    return out;
  }
  framework::ViewIndexSummary summary =
      framework::view_index_summary(view, m);
  if (!(summary.L_m < m) || !(summary.U_m > m)) {
    out.value = kNaN;
    out.note = "needs L_m < m < U_m";
    return out;
  }

  // Max degree carrying target mass; the bound requires full head support.
  int l = -1;
  double listed = 0.0;
  for (const auto& [degree, mass] : target.mass_by_degree) {
    if (mass > 0.0) l = std::max(l, degree);
    listed += mass;
  }
  if (target.norm_sq - listed > 1e-9 * std::max(1.0, target.norm_sq)) {
    out.value = kNaN;
    out.note = "target mass outside listed degrees";
    return out;
  }

  double prefactor =
      1.0 / ((1.0 - summary.L_m / m) * (1.0 - m / summary.U_m));
  double a = view.trace() + view.tail_bound;
  double b_coef = *target.coef_bound;

  double head = 0.0;
  for (const framework::Mode& mode : view.modes) {
    if (mode.degree > l) break;
    double lam = std::exp(mode.log_lambda);
    double cnt = mode.count;
    head += variant == UpperVariant::squared ? cnt / (lam * lam) : cnt / lam;
  }
  double head_term =
      variant == UpperVariant::squared
          ? prefactor * b_coef * b_coef * (a * a) / (m * m) * head
          : prefactor * b_coef * b_coef * a / (m * m) * head;

  out.ok = true;
  out.value = prefactor * sigma_sq + head_term;
  return out;
}

BoundResult risk_lower_bound(const framework::SpectrumView& view,
                             double sigma_sq, double m) {
  framework::ViewIndexSummary summary =
      framework::view_index_summary(view, m);
  BoundResult out;
  out.ok = true;
  if (summary.level_index < 0) {
    out.value = sigma_sq;  // L_m = 0 degenerates to the trivial noise floor
    out.note = "first level already holds m samples";
    return out;
  }
  double b = std::min(1.0, (m - summary.L_m) * summary.lambda_min_head);
  double frac = (b / (b + 1.0)) * (b / (b + 1.0)) * summary.L_m / m;
  out.value = sigma_sq / (1.0 - frac);
  return out;
}

std::vector<GridPoint> make_grid(const DimensionSchedule& dims,
                                 const BandwidthSchedule& bandwidth) {
  std::vector<GridPoint> out;
  out.reserve(dims.grid.size());
  for (const auto& [d, m] : dims.grid)
    out.push_back(GridPoint{d, m, bandwidth.realize(m, d)});
  return out;
}

std::string classify_risk_curve(
    const std::vector<std::pair<long long, double>>& totals, double sigma_sq,
    bool dimension_varies, double* excess_slope_out, double* total_slope_out) {
  if (totals.empty()) throw usage_error("classification needs at least one point");
  std::vector<double> log_m, log_excess, log_total, excess;
  bool increasing = true;
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const auto& [m, total] = totals[i];
    double ex = total - sigma_sq;
    excess.push_back(ex);
    log_m.push_back(std::log(static_cast<double>(m)));
    log_excess.push_back(std::log(std::max(ex, 1e-15 * std::max(sigma_sq, 1e-300))));
    log_total.push_back(std::log(total));
    if (i > 0 && !(total > totals[i - 1].second)) increasing = false;
  }
  double excess_slope = slope(log_m, log_excess);
  std::size_t half = totals.size() / 2;
  std::vector<double> lm_hi(log_m.begin() + half, log_m.end());
  std::vector<double> lt_hi(log_total.begin() + half, log_total.end());
  double total_slope = slope(lm_hi, lt_hi);
  if (excess_slope_out) *excess_slope_out = excess_slope;
  if (total_slope_out) *total_slope_out = total_slope;

  if (sigma_sq > 0.0 && excess.back() / sigma_sq < 0.05 &&
      excess_slope <= -0.1)
    return "benign";
  if (increasing && total_slope >= 0.2) return "catastrophic";
  double mean = 0.0;
  for (double ex : excess) mean += ex;
  mean /= excess.size();
  if (mean > 0.0) {
    double dev = 0.0;
    for (double ex : excess) dev = std::max(dev, std::abs(ex - mean));
    if (dev <= 0.2 * mean) return "tempered";
  }
  if (dimension_varies && sigma_sq > 0.0) {
    bool nonbenign_everywhere = true;
    for (double ex : excess)
      if (ex / sigma_sq < 0.05) nonbenign_everywhere = false;
    if (nonbenign_everywhere) return "inconsistent_nonbenign";
  }
  return "indeterminate";
}

RegimeReport scan(const std::vector<GridPoint>& grid, double target_mass0,
                  double sigma_sq) {
  if (grid.empty()) throw usage_error("scan needs a non-empty grid");
  RegimeReport report;
  std::vector<std::pair<long long, double>> totals;
  bool dimension_varies = false;
  for (const GridPoint& gp : grid)
    if (gp.d != grid.front().d) dimension_varies = true;

  for (const GridPoint& gp : grid) {
    ScanPoint point;
    point.m = gp.m;
    point.d = gp.d;
    point.tau = gp.tau;
    std::string flags;
    auto note = [&flags](const std::string& tag, const std::string& msg) {
      if (!flags.empty()) flags += ";";
      flags += tag + ":" + msg;
    };
    try {
      spectrum::SpectrumSpec spec = spectrum::make_spec(gp.d, gp.tau);
      spectrum::EigenSystem sys = spectrum::build_spectrum(spec, gp.m);
      framework::SpectrumView view = framework::view_of(sys);

      framework::TargetSpec target =
          target_mass0 > 0.0
              ? framework::TargetSpec::constant(std::sqrt(target_mass0))
              : framework::TargetSpec::zero();
      framework::RiskPrediction prediction =
          framework::predicted_risk(view, target, sigma_sq, gp.m);

      point.kappa = prediction.kappa;
      point.e0 = prediction.e_factor;
      point.bias = prediction.bias;
      point.variance = prediction.variance;
      point.total = prediction.total;
      point.assumptions = verify_assumptions(view, gp.d, gp.m);

      BoundResult up_sq = master_upper_bound(view, target, sigma_sq, gp.m,
                                             UpperVariant::squared);
      BoundResult up_lin = master_upper_bound(view, target, sigma_sq, gp.m,
                                              UpperVariant::linear);
      BoundResult low = risk_lower_bound(view, sigma_sq, gp.m);
      point.upper_sq = up_sq.value;
      point.upper_lin = up_lin.value;
      point.lower = low.value;
      if (!up_sq.ok) note("upper_sq", up_sq.note);
      if (!up_lin.ok) note("upper_lin", up_lin.note);
      if (!low.note.empty()) note("lower", low.note);
      totals.emplace_back(gp.m, prediction.total);
    } catch (const std::exception& e) {
      // Per-point failures are recorded, not fatal to the scan.
      point.kappa = point.e0 = point.bias = point.variance = point.total = kNaN;
      point.upper_sq = point.upper_lin = point.lower = kNaN;
      note("error", e.what());
    }
    point.flags = flags;
    report.points.push_back(point);
  }
  if (totals.empty()) throw numeric_error("every scan point failed");
  report.classification =
      classify_risk_curve(totals, sigma_sq, dimension_varies,
                          &report.excess_slope, &report.total_slope);
  return report;
}

std::vector<MultiplicityScalingPoint> multiplicity_scaling_report(
    const DimensionSchedule& dims) {
  std::vector<MultiplicityScalingPoint> out;
  for (const auto& [d, m] : dims.grid) {
    harmonics::IndexSummary summary = harmonics::index_summary(d, m);
    MultiplicityScalingPoint point;
    point.d = d;
    point.m = m;
    point.k_m = summary.k_m;
    double md = static_cast<double>(m);
    point.L_m_over_m = summary.L_m / md;
    point.m_over_U_m = md / summary.U_m;
    point.n_below_over_m =
        summary.k_m >= 1
            ? std::exp(harmonics::log_multiplicity(d, summary.k_m - 1)) / md
            : 1.0 / md;
    point.n_at_over_m =
        std::exp(harmonics::log_multiplicity(d, summary.k_m)) / md;
    point.n_above_over_m =
        std::exp(harmonics::log_multiplicity(d, summary.k_m + 1)) / md;
    point.index_window_ok =
        summary.k_m >= d / 5.0 && summary.k_m <= d / 2.0;
    point.count_brackets_ok = point.n_below_over_m > 1.0 / 54.0 &&
                              point.n_below_over_m < 1.0 / 3.0 &&
                              point.n_at_over_m > 1.0 / 9.0 &&
                              point.n_at_over_m < 1.0 &&
                              point.n_above_over_m > 2.0 / 3.0 &&
                              point.n_above_over_m < 6.0;
    out.push_back(point);
  }
  return out;
}

}  // namespace eigenrisk::regimes
