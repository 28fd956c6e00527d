#include "eigenrisk/sim.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "eigenrisk/errors.hpp"
#include "eigenrisk/kernels.hpp"
#include "eigenrisk/rng.hpp"
#include "eigenrisk/spectrum.hpp"

namespace eigenrisk::sim {

namespace {

void validate(const SimConfig& config) {
  if (config.d < 2) throw usage_error("simulation needs d >= 2");
  if (!(config.tau > 0.0)) throw usage_error("simulation needs tau > 0");
  if (config.m < 1 || config.m > 4096)
    throw usage_error("simulation supports 1 <= m <= 4096");
  if (config.n_test < 100) throw usage_error("simulation needs n_test >= 100");
  if (config.trials < 1) throw usage_error("simulation needs trials >= 1");
  if (config.sigma_sq < 0.0) throw usage_error("noise variance must be >= 0");
}

}  // namespace

double Target::eval(const double* x, int d) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::linear:
      // sqrt(d) x_1 is a unit-norm degree-1 harmonic: E[d x_1^2] = 1.
      return value * std::sqrt(static_cast<double>(d)) * x[0];
  }
  throw usage_error("unknown target kind");
}

double Target::norm_sq(int) const { return value * value; }

framework::TargetSpec Target::to_spec(int) const {
  if (kind == Kind::constant) return framework::TargetSpec::constant(value);
  framework::TargetSpec out;
  out.mass_by_degree = {{1, value * value}};
  out.norm_sq = value * value;
  out.coef_bound = std::abs(value);  // single unit-norm coefficient
  return out;
}

SolveOutcome solve_interpolant(const std::vector<double>& gram, long long m,
                               const std::vector<double>& y) {
  if (gram.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m) ||
      y.size() != static_cast<std::size_t>(m))
    throw usage_error("gram/label dimensions disagree");
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  Eigen::Map<const MatrixXd> k_map(gram.data(), m, m);
  Eigen::Map<const VectorXd> y_map(y.data(), m);
  SolveOutcome out;
  // Escalate only when the factorization itself fails; the first rung that
  // factorizes wins (extra jitter can only move K*alpha further from y).
  // The residual against the unjittered Gram is reported, not gated on.
  const double ladder[] = {0.0, 1e-12, 1e-10, 1e-8};
  for (double eps : ladder) {
    MatrixXd work = k_map;  // gram() pins the diagonal at exactly 1
    if (eps > 0.0) work.diagonal().array() += eps;
    Eigen::LLT<Eigen::Ref<MatrixXd>> llt(work);  // in-place factorization
    if (llt.info() != Eigen::Success) continue;
    VectorXd alpha = llt.solve(y_map);
    out.jitter = eps;
    out.residual_inf = (k_map.selfadjointView<Eigen::Lower>() * alpha - y_map)
                           .cwiseAbs()
                           .maxCoeff();
    out.ok = true;
    out.alpha.assign(alpha.data(), alpha.data() + m);
    return out;
  }
  return out;  // no ladder rung factorized
}

TrialResult run_trial(const SimConfig& config, std::uint64_t stream_id) {
  validate(config);
  const int d = config.d;
  const long long m = config.m;
  const double c = 2.0 / (config.tau * config.tau);
  rng::Stream stream(config.seed, stream_id);

  std::vector<double> xs(static_cast<std::size_t>(m) * d);
  for (long long i = 0; i < m; ++i) stream.sphere_point(d, xs.data() + i * d);

  const double sigma = std::sqrt(config.sigma_sq);
  std::vector<double> y(m);
  for (long long i = 0; i < m; ++i)
    y[i] = config.target.eval(xs.data() + i * d, d) + sigma * stream.normal();

  std::vector<double> gram_mat(static_cast<std::size_t>(m) * m);
  kernels::gram(xs.data(), m, d, c, gram_mat.data());

  TrialResult result;
  SolveOutcome solved = solve_interpolant(gram_mat, m, y);
  result.jitter = solved.jitter;
  result.residual_inf = solved.residual_inf;
  if (!solved.ok) {
    result.note = "no jitter ladder rung factorized";
    return result;
  }

  std::vector<double> x_test(d), k_row(m);
  double sq_sum = 0.0;
  for (int t = 0; t < config.n_test; ++t) {
    stream.sphere_point(d, x_test.data());
    kernels::cross_kernel(x_test.data(), 1, xs.data(), m, d, c, k_row.data());
    double fhat = 0.0;
    for (long long i = 0; i < m; ++i) fhat += k_row[i] * solved.alpha[i];
    double err = fhat - config.target.eval(x_test.data(), d);
    if (!config.analytic_noise) err += sigma * stream.normal();
    sq_sum += err * err;
  }
  result.ok = true;
  result.risk = sq_sum / config.n_test +
                (config.analytic_noise ? config.sigma_sq : 0.0);
  return result;
}

SimResult run_experiment(const SimConfig& config) {
  validate(config);
  SimResult out;
  out.config = config;
  out.null_risk = config.sigma_sq + config.target.norm_sq(config.d);
  out.bayes_risk = config.sigma_sq;

  spectrum::SpectrumSpec spec = spectrum::make_spec(config.d, config.tau);
  spectrum::EigenSystem sys = spectrum::build_spectrum(spec, config.m);
  framework::SpectrumView view = framework::view_of(sys);
  out.predicted_total =
      framework::predicted_risk(view, config.target.to_spec(config.d),
                                config.sigma_sq, config.m)
          .total;

  double sum = 0.0;
  for (int t = 0; t < config.trials; ++t) {
    TrialResult trial = run_trial(config, static_cast<std::uint64_t>(t));
    if (trial.ok) {
      ++out.n_ok;
      sum += trial.risk;
      out.jitter_max = std::max(out.jitter_max, trial.jitter);
    }
    out.trials.push_back(std::move(trial));
  }

  out.failed = out.n_ok < config.trials - config.trials / 5;  // > 20% rejected
  if (out.n_ok > 0) {
    out.empirical_mean = sum / out.n_ok;
    if (out.n_ok > 1) {
      double ss = 0.0;
      for (const TrialResult& trial : out.trials)
        if (trial.ok) {
          double dev = trial.risk - out.empirical_mean;
          ss += dev * dev;
        }
      out.empirical_stderr = std::sqrt(ss / (out.n_ok - 1.0) / out.n_ok);
    }
  } else {
    out.empirical_mean = std::numeric_limits<double>::quiet_NaN();
    out.empirical_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace eigenrisk::sim
