#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eigenrisk/framework.hpp"

namespace eigenrisk::sim {

// Ground-truth functions the simulator can fit: f*(x) = value (constant) or
// f*(x) = scale * sqrt(d) * x[0] (a degree-1 harmonic, unit norm at scale 1).
struct Target {
  enum class Kind { constant, linear };
  Kind kind = Kind::constant;
  double value = 1.0;

  double eval(const double* x, int d) const;
  double norm_sq(int d) const;
  framework::TargetSpec to_spec(int d) const;
};

struct SimConfig {
  int d = 4;
  double tau = 1.0;
  long long m = 64;        // capped at 4096
  int n_test = 2048;
  int trials = 32;
  double sigma_sq = 1.0;
  Target target;
  std::uint64_t seed = 20240614;
  bool analytic_noise = true;  // risk = mean (fhat - f*)^2 + sigma^2
};

struct TrialResult {
  bool ok = false;
  double risk = 0.0;
  double jitter = 0.0;       // epsilon actually used on the Gram diagonal
  double residual_inf = 0.0; // ||K alpha - y||_inf against the unjittered K
  std::string note;
};

struct SimResult {
  SimConfig config;
  std::vector<TrialResult> trials;
  int n_ok = 0;
  double empirical_mean = 0.0;
  double empirical_stderr = 0.0;
  double predicted_total = 0.0;  // eigenframework prediction for this config
  double null_risk = 0.0;        // sigma^2 + ||f*||^2
  double bayes_risk = 0.0;       // sigma^2
  double jitter_max = 0.0;
  bool failed = false;           // > 20% of trials rejected
};

// Monte Carlo estimate of the minimum-norm interpolant's risk, with the
// matching eigenframework prediction computed from the same (d, tau, m).
SimResult run_experiment(const SimConfig& config);

// Single trial with an explicit stream id (trials are independently seeded).
TrialResult run_trial(const SimConfig& config, std::uint64_t stream_id);

// Exposed for tests: solve K alpha = y by Cholesky with a jitter ladder
// (0, 1e-12, 1e-10, 1e-8 relative to the mean diagonal); the returned jitter
// is the first ladder step whose factorization succeeds and whose
// interpolation residual against the *unjittered* K passes the residual rule
// ||K alpha - y||_inf <= 1e-6 * max|y|.
struct SolveOutcome {
  bool ok = false;
  std::vector<double> alpha;
  double jitter = 0.0;
  double residual_inf = 0.0;
};
SolveOutcome solve_interpolant(const std::vector<double>& gram, long long m,
                               const std::vector<double>& y);

}  // namespace eigenrisk::sim
