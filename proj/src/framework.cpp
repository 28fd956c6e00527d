#include "eigenrisk/framework.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigenrisk/errors.hpp"

namespace eigenrisk::framework {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier-compensated accumulator; the kappa residual tolerance (1e-10 m)
// sits close to the plain-double roundoff floor of 1e5-term sums.
struct Accum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Flattened cumulative sums over levels sorted by decreasing eigenvalue,
// with the certified tail folded in as one virtual level so that rank
// statistics refer to the genuine (untruncated) multiset.
struct Flattener {
  std::vector<double> lambda;   // level eigenvalues, decreasing
  std::vector<double> cum_c;    // cumulative counts
  std::vector<double> cum_cl;   // cumulative count * lambda
  std::vector<double> cum_cl2;  // cumulative count * lambda^2

  explicit Flattener(const SpectrumView& view) {
    std::size_t n = view.modes.size();
    lambda.reserve(n + 1);
    cum_c.reserve(n + 1);
    cum_cl.reserve(n + 1);
    cum_cl2.reserve(n + 1);
    Accum c, cl, cl2;
    for (const Mode& mode : view.modes) {
      double lam = std::exp(mode.log_lambda);
      double cnt = mode.count;
      c.add(cnt);
      cl.add(cnt * lam);
      cl2.add(cnt * lam * lam);
      lambda.push_back(lam);
      cum_c.push_back(c.value());
      cum_cl.push_back(cl.value());
      cum_cl2.push_back(cl2.value());
    }
    if (view.tail_bound > 0.0 && !view.modes.empty()) {
      // Virtual level at the last observed decay step (ratio 1/2 fallback
      // for single-level views); carrying the tail as lambda_v * count_v
      // preserves the trace bound and keeps r <= R <= r^2 valid for the
      // underlying infinite spectrum.
      double q = 0.5;
      if (n >= 2)
        q = std::exp(view.modes[n - 1].log_lambda -
                     view.modes[n - 2].log_lambda);
      double lam_v = lambda.back() * q;
      double cnt_v = view.tail_bound / lam_v;
      c.add(cnt_v);
      cl.add(view.tail_bound);
      cl2.add(cnt_v * lam_v * lam_v);
      lambda.push_back(lam_v);
      cum_c.push_back(c.value());
      cum_cl.push_back(cl.value());
      cum_cl2.push_back(cl2.value());
    }
  }

  double total_count() const { return cum_c.empty() ? 0.0 : cum_c.back(); }
  double total_cl() const { return cum_cl.empty() ? 0.0 : cum_cl.back(); }
  double total_cl2() const { return cum_cl2.empty() ? 0.0 : cum_cl2.back(); }

  // Level holding flattened 0-based position p (first index with cum_c > p).
  std::size_t level_of(double p) const {
    return static_cast<std::size_t>(
        std::upper_bound(cum_c.begin(), cum_c.end(), p) - cum_c.begin());
  }

  EffectiveRanks ranks_at(double k_flat) const {
    if (!(k_flat >= 0.0))
      throw usage_error("effective ranks need flattened index k >= 0");
    // The tail runs over whole modes with index strictly beyond k, so the
    // first tail mode sits at integer position floor(k) + 1.  Splitting a
    // mode's mass instead would let R exceed r^2 on fast-decaying spectra.
    double p = std::floor(k_flat) + 1.0;
    if (p >= total_count())
      throw numeric_error("flattened index beyond the truncated spectrum");
    std::size_t j = level_of(p);
    double head_c = j == 0 ? 0.0 : cum_c[j - 1];
    double head_cl = j == 0 ? 0.0 : cum_cl[j - 1];
    double head_cl2 = j == 0 ? 0.0 : cum_cl2[j - 1];
    double lam = lambda[j];
    double s1 = total_cl() - (head_cl + (p - head_c) * lam);
    double s2 = total_cl2() - (head_cl2 + (p - head_c) * lam * lam);
    EffectiveRanks out;
    out.r = s1 / lam;
    out.R = s1 * s1 / s2;
    return out;
  }
};

// lambda / (lambda + kappa) = 1 / (1 + e^{log kappa - log lambda}); staying
// in log differences keeps the fixed point exact even where kappa or lambda
// underflow doubles (deep d = 2 spectra).
double learnability_ll(double log_lambda, double log_kappa) {
  double x = log_kappa - log_lambda;
  if (x >= 0.0) {
    double t = std::exp(-x);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double kappa_equation(const SpectrumView& view, double m, double delta,
                      double tail, double log_kappa) {
  Accum acc;
  for (const Mode& mode : view.modes)
    acc.add(mode.count * learnability_ll(mode.log_lambda, log_kappa));
  if (tail > 0.0) acc.add(std::exp(std::log(tail) - log_kappa));
  if (delta > 0.0) acc.add(std::exp(std::log(delta) - log_kappa));
  return acc.value() - m;
}

double bisect_kappa(const SpectrumView& view, double m, double delta,
                    double tail) {
  double log_min = std::numeric_limits<double>::infinity();
  double log_max = -std::numeric_limits<double>::infinity();
  for (const Mode& mode : view.modes) {
    log_min = std::min(log_min, mode.log_lambda);
    log_max = std::max(log_max, mode.log_lambda);
  }
  double lo = log_min - 30.0;
  double hi = log_max + 30.0;
  if (delta > 0.0) hi = std::max(hi, std::log(delta) + 30.0);
  auto f = [&](double log_kappa) {
    return kappa_equation(view, m, delta, tail, log_kappa);
  };
  for (int i = 0; i < 120 && f(lo) <= 0.0; ++i) lo -= 20.0;
  for (int i = 0; i < 120 && f(hi) >= 0.0; ++i) hi += 20.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0))
    throw numeric_error("kappa fixed point could not be bracketed");
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
       ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double SpectrumView::trace() const {
  Accum acc;
  for (const Mode& mode : modes) acc.add(mode.count * std::exp(mode.log_lambda));
  return acc.value();
}

double SpectrumView::flattened_count() const {
  Accum acc;
  for (const Mode& mode : modes) acc.add(mode.count);
  return acc.value();
}

SpectrumView view_of(const spectrum::EigenSystem& system) {
  SpectrumView view;
  view.modes.reserve(system.degrees.size());
  for (const auto& deg : system.degrees)
    view.modes.push_back(Mode{deg.log_lambda, deg.log_count, deg.k,
                              deg.count_exact
                                  ? static_cast<double>(*deg.count_exact)
                                  : std::exp(deg.log_count)});
  view.tail_bound = system.tail_bound;
  return view;
}

SpectrumView synthetic_view(
    const std::vector<std::pair<double, double>>& modes) {
  std::vector<std::pair<double, double>> sorted = modes;
  for (const auto& [lam, cnt] : sorted)
    if (!(lam > 0.0) || !(cnt > 0.0))
      throw usage_error("synthetic spectrum needs lambda > 0 and count > 0");
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  SpectrumView view;
  view.modes.reserve(sorted.size());
  int index = 0;
  for (const auto& [lam, cnt] : sorted)
    view.modes.push_back(Mode{std::log(lam), std::log(cnt), index++, cnt});
  return view;
}

KappaResult solve_kappa(const SpectrumView& view, double m, double delta) {
  if (view.modes.empty()) throw usage_error("empty spectrum");
  if (!(m > 0.0)) throw usage_error("sample size m must be positive");
  if (delta < 0.0) throw usage_error("ridge delta must be >= 0");
  if (delta == 0.0 && !(view.flattened_count() + 0.5 > m) &&
      view.tail_bound == 0.0)
    throw numeric_error("ridgeless fixed point needs more modes than samples");

  double log_plain = bisect_kappa(view, m, delta, 0.0);
  double log_kappa = log_plain;
  if (view.tail_bound > 0.0)
    log_kappa = bisect_kappa(view, m, delta, view.tail_bound);

  KappaResult out;
  out.log_kappa = log_kappa;
  out.kappa = std::exp(log_kappa);
  out.residual =
      std::abs(kappa_equation(view, m, delta, view.tail_bound, log_kappa));
  out.tail_shift = std::abs(-std::expm1(log_plain - log_kappa));
  return out;
}

std::vector<double> learnabilities(const SpectrumView& view, double log_kappa) {
  std::vector<double> out;
  out.reserve(view.modes.size());
  for (const Mode& mode : view.modes)
    out.push_back(learnability_ll(mode.log_lambda, log_kappa));
  return out;
}

double overfitting_coefficient(const SpectrumView& view, double log_kappa,
                               double m) {
  Accum acc;
  for (const Mode& mode : view.modes) {
    double l = learnability_ll(mode.log_lambda, log_kappa);
    acc.add(mode.count * l * l);
  }
  // The omitted levels contribute at most sum count*L <= tail_bound / kappa.
  if (view.tail_bound > 0.0)
    acc.add(std::exp(std::log(view.tail_bound) - log_kappa));
  double s2 = acc.value();
  if (!(s2 < m))
    throw numeric_error("overfitting coefficient diverged (sum L^2 >= m)");
  return m / (m - s2);
}

TargetSpec TargetSpec::constant(double value) {
  TargetSpec out;
  out.mass_by_degree = {{0, value * value}};
  out.norm_sq = value * value;
  out.coef_bound = std::abs(value);
  return out;
}

TargetSpec TargetSpec::zero() {
  TargetSpec out;
  out.norm_sq = 0.0;
  out.coef_bound = 0.0;
  return out;
}

RiskPrediction predicted_risk(const SpectrumView& view, const TargetSpec& target,
                              double sigma_sq, double m, double delta) {
  if (sigma_sq < 0.0) throw usage_error("noise variance must be >= 0");
  KappaResult kr = solve_kappa(view, m, delta);
  double e0 = overfitting_coefficient(view, kr.log_kappa, m);

  double listed = 0.0;
  Accum bias;
  for (const auto& [degree, mass] : target.mass_by_degree) {
    if (mass < 0.0) throw usage_error("target mass must be >= 0");
    listed += mass;
    double one_minus_l = 1.0;
    for (const Mode& mode : view.modes) {
      if (mode.degree == degree) {
        // 1 - L = kappa / (lambda + kappa), the mirrored sigmoid
        one_minus_l = learnability_ll(kr.log_kappa, mode.log_lambda);
        break;
      }
    }
    bias.add(mass * one_minus_l * one_minus_l);
  }
  double unlisted = target.norm_sq - listed;
  if (unlisted < -1e-9 * std::max(1.0, target.norm_sq))
    throw usage_error("target norm_sq smaller than listed degree mass");
  if (unlisted > 0.0) bias.add(unlisted);  // fully unlearnable remainder

  RiskPrediction out;
  out.kappa = kr.kappa;
  out.residual = kr.residual;
  out.e_factor = e0;
  out.bias = e0 * bias.value();
  out.variance = e0 * sigma_sq;
  out.total = out.bias + out.variance;
  return out;
}

EffectiveRanks effective_ranks(const SpectrumView& view, double k_flat) {
  return Flattener(view).ranks_at(k_flat);
}

ViewIndexSummary view_index_summary(const SpectrumView& view, double m) {
  if (!(m > 0.0)) throw usage_error("sample size m must be positive");
  ViewIndexSummary out;
  out.level_index = -1;
  out.degree = -1;
  out.L_m = 0.0;
  out.U_m = 0.0;
  out.lambda_min_head = kNaN;
  double cum = 0.0;
  double lam_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < view.modes.size(); ++j) {
    double next = cum + view.modes[j].count;
    if (next < m) {
      cum = next;
      lam_min = std::min(lam_min, std::exp(view.modes[j].log_lambda));
      out.level_index = static_cast<int>(j);
      out.degree = view.modes[j].degree;
      out.L_m = cum;
      out.lambda_min_head = lam_min;
    } else {
      out.U_m = cum + view.modes[j].count;
      return out;
    }
  }
  throw numeric_error("spectrum too short to place U_m above m");
}

E0Bracket e0_bracket(const SpectrumView& view, double m) {
  Flattener flat(view);
  ViewIndexSummary summary = view_index_summary(view, m);
  E0Bracket out;

  {  // Upper side at k = L_m: needs k + r_k > m.
    double k = summary.L_m;
    out.upper.k_used = k;
    if (k + 1.0 < flat.total_count()) {
      EffectiveRanks ranks = flat.ranks_at(k);
      if (k + ranks.r > m && k < m) {
        out.upper.ok = true;
        out.upper.value = 1.0 / ((1.0 - k / m) * (1.0 - m / (k + ranks.r)));
      } else {
        out.upper.value = kNaN;
        out.upper.note = "needs k + r_k > m at k = L_m";
      }
    } else {
      out.upper.value = kNaN;
      out.upper.note = "truncated spectrum shorter than L_m + 1 modes";
    }
  }

  {  // Lower side at k = ceil(5m/4) >= m.
    double k = std::ceil(1.25 * m);
    out.lower.k_used = k;
    if (k + 1.0 < flat.total_count()) {
      EffectiveRanks ranks = flat.ranks_at(k);
      out.lower.ok = true;
      out.lower.value =
          1.0 / (1.0 - (m / k) * ((k - m) / (k - m + ranks.r)));
    } else {
      out.lower.value = kNaN;
      out.lower.note = "truncated spectrum shorter than 5m/4 modes";
    }
  }

  {  // Noise-floor side with measured decay constant b, capped at 1.
    out.zhou_lower.k_used = summary.L_m;
    if (summary.level_index >= 0) {
      double b = std::min(1.0, (m - summary.L_m) * summary.lambda_min_head);
      double frac = (b / (b + 1.0)) * (b / (b + 1.0)) * summary.L_m / m;
      out.zhou_lower.ok = true;
      out.zhou_lower.value = 1.0 / (1.0 - frac);
    } else {
      // No level fits below m; the bound degenerates to the trivial 1.
      out.zhou_lower.ok = true;
      out.zhou_lower.value = 1.0;
      out.zhou_lower.note = "first level already holds m samples";
    }
  }
  return out;
}

BenignCheck benign_condition_check(const SpectrumView& view, double m) {
  Flattener flat(view);
  if (!(m + 2.0 < flat.total_count()))
    throw numeric_error("benign-condition scan needs a spectrum longer than m");
  double k = 0.0;
  while (k <= m + 1.0) {
    EffectiveRanks ranks = flat.ranks_at(k);
    if (m < k + ranks.r) {
      BenignCheck out;
      out.k_n = k;
      out.k_n_over_m = k / m;
      out.m_over_R = m / ranks.R;
      return out;
    }
    k += 1.0;
  }
  throw numeric_error("benign-condition index not found below m + 1");
}

double catastrophic_condition_check(const SpectrumView& view, double m,
                                    double eps) {
  if (!(eps > 0.0)) throw usage_error("catastrophic probe needs eps > 0");
  double k = std::ceil((1.0 + eps) * m);
  return effective_ranks(view, k).r / k;
}

}  // namespace eigenrisk::framework
