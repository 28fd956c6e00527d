#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "eigenrisk/errors.hpp"
#include "eigenrisk/framework.hpp"
#include "eigenrisk/rng.hpp"
#include "eigenrisk/spectrum.hpp"

namespace fw = eigenrisk::framework;
namespace sp = eigenrisk::spectrum;
using eigenrisk::numeric_error;
using eigenrisk::usage_error;

namespace {

fw::SpectrumView geometric_view(int levels = 400) {
  std::vector<std::pair<double, double>> modes;
  for (int i = 1; i <= levels; ++i) modes.push_back({std::pow(2.0, -i), 1.0});
  return fw::synthetic_view(modes);
}

}  // namespace

TEST_SUITE("framework") {

TEST_CASE("flat spectrum: closed-form kappa, learnabilities and risk") {
  fw::SpectrumView view = fw::synthetic_view({{1.0, 10.0}});
  fw::KappaResult kr = fw::solve_kappa(view, 5.0, 0.0);
  CHECK(kr.kappa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(kr.residual) <= 1e-10 * 5.0);

  std::vector<double> ls = fw::learnabilities(view, kr.log_kappa);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fw::overfitting_coefficient(view, kr.log_kappa, 5.0) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // mass 4 at the single level, sigma^2 = 1: bias = variance = 2, total 4.
  fw::RiskPrediction pred =
      fw::predicted_risk(view, fw::TargetSpec::constant(2.0), 1.0, 5.0);
  CHECK(pred.kappa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pred.e_factor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pred.bias == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pred.variance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pred.total == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("geometric spectrum: frozen kappa and effective ranks") {
  fw::SpectrumView view = geometric_view();
  fw::KappaResult kr = fw::solve_kappa(view, 2.0, 0.0);
  CHECK(kr.kappa ==
        doctest::Approx(0.23452733995528938244).epsilon(1e-10));

  fw::EffectiveRanks ranks = fw::effective_ranks(view, 0.0);
  CHECK(ranks.r == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(ranks.R == doctest::Approx(3.0).epsilon(1e-9));
  for (double k : {0.0, 1.0, 5.0, 17.5}) {
    fw::EffectiveRanks rk = fw::effective_ranks(view, k);
    CHECK(rk.r <= rk.R * (1 + 1e-12));
    CHECK(rk.R <= rk.r * rk.r * (1 + 1e-12));
  }
}

TEST_CASE("negligible spectrum with ridge: kappa = delta / m") {
  fw::SpectrumView view = fw::synthetic_view({{1e-30, 3.0}});
  fw::KappaResult kr = fw::solve_kappa(view, 4.0, 2.0);
  CHECK(kr.kappa == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("kappa decreases strictly with sample size") {
  fw::SpectrumView view = geometric_view();
  double prev = fw::solve_kappa(view, 2.0, 0.0).log_kappa;
  for (double m : {3.0, 5.0, 9.0, 17.0, 33.0}) {
    double cur = fw::solve_kappa(view, m, 0.0).log_kappa;
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("deep spectrum solves entirely in log space") {
  // d = 2 with wide bandwidth: eigenvalues at the working depth underflow
  // doubles, so kappa is only representable through its logarithm.
  sp::EigenSystem sys = sp::build_spectrum(sp::make_spec(2, 2.0), 256);
  fw::SpectrumView view = fw::view_of(sys);
  fw::KappaResult kr = fw::solve_kappa(view, 256.0, 0.0);
  CHECK(kr.log_kappa < -600.0);
  // kappa in linear domain is either consistent with log_kappa or flushed
  // to zero once the logarithm drops past the subnormal range.
  if (kr.kappa != 0.0)
    CHECK(kr.kappa == doctest::Approx(std::exp(kr.log_kappa)).epsilon(1e-12));
  CHECK(std::abs(kr.residual) <= 1e-10 * 256.0);

  fw::RiskPrediction pred =
      fw::predicted_risk(view, fw::TargetSpec::constant(1.0), 1.0, 256.0);
  CHECK(std::isfinite(pred.total));
  CHECK(pred.total >= 1.0);
  CHECK(pred.e_factor >= 1.0);
}

TEST_CASE("aggregated and flattened encodings agree to 1e-12") {
  std::vector<std::pair<double, double>> aggregated = {
      {1.0, 3.0}, {0.5, 2.0}, {0.25, 5.0}, {0.03125, 7.0}};
  std::vector<std::pair<double, double>> flattened;
  for (const auto& [lam, cnt] : aggregated)
    for (int i = 0; i < static_cast<int>(cnt); ++i)
      flattened.push_back({lam, 1.0});
  fw::SpectrumView va = fw::synthetic_view(aggregated);
  fw::SpectrumView vf = fw::synthetic_view(flattened);

  for (double m : {2.0, 7.0, 11.0}) {
    fw::KappaResult ka = fw::solve_kappa(va, m, 0.0);
    fw::KappaResult kf = fw::solve_kappa(vf, m, 0.0);
    CHECK(ka.log_kappa == doctest::Approx(kf.log_kappa).epsilon(1e-12));
    CHECK(fw::overfitting_coefficient(va, ka.log_kappa, m) ==
          doctest::Approx(fw::overfitting_coefficient(vf, kf.log_kappa, m))
              .epsilon(1e-12));
    // Mass on the top level (degree labels differ between encodings, but
    // degree 0 is the largest eigenvalue in both).
    fw::RiskPrediction pa =
        fw::predicted_risk(va, fw::TargetSpec::constant(1.0), 1.0, m);
    fw::RiskPrediction pf =
        fw::predicted_risk(vf, fw::TargetSpec::constant(1.0), 1.0, m);
    CHECK(pa.total == doctest::Approx(pf.total).epsilon(1e-12));
    CHECK(pa.bias == doctest::Approx(pf.bias).epsilon(1e-12));
  }
}

TEST_CASE("fixed-point residual stays at solver precision on random spectra") {
  eigenrisk::rng::Stream stream(20240614, 99);
  for (int rep = 0; rep < 25; ++rep) {
    int levels = 2 + static_cast<int>(stream.uniform01() * 40);
    std::vector<std::pair<double, double>> modes;
    double flattened = 0.0;
    for (int i = 0; i < levels; ++i) {
      double lam = std::exp(-40.0 * stream.uniform01());
      double cnt = 1.0 + std::floor(stream.uniform01() * 20.0);
      flattened += cnt;
      modes.push_back({lam, cnt});
    }
    double m = 2.0 + stream.uniform01() * (0.8 * flattened - 2.0);
    fw::KappaResult kr = fw::solve_kappa(fw::synthetic_view(modes), m, 0.0);
    CHECK(std::abs(kr.residual) <= 1e-10 * m);
  }
}

TEST_CASE("ridgeless solve requires enough retained modes") {
  fw::SpectrumView view = fw::synthetic_view({{1.0, 4.0}});
  CHECK_THROWS_AS(fw::solve_kappa(view, 5.0, 0.0), numeric_error);
  CHECK_THROWS_AS(fw::solve_kappa(view, 2.0, -1.0), usage_error);
  CHECK_THROWS_AS(fw::solve_kappa(fw::SpectrumView{}, 2.0, 0.0), usage_error);
}

TEST_CASE("flat spectrum effective ranks follow the counting rule") {
  fw::SpectrumView view = fw::synthetic_view({{1.0, 10.0}});
  fw::EffectiveRanks r0 = fw::effective_ranks(view, 0.0);
  CHECK(r0.r == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(r0.R == doctest::Approx(9.0).epsilon(1e-12));
  // Fractional indices keep whole-mode tails: k = 2.5 excludes modes 0..2.
  fw::EffectiveRanks rhalf = fw::effective_ranks(view, 2.5);
  CHECK(rhalf.r == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(rhalf.R == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("effective-rank inequalities on a harmonic spectrum") {
  sp::EigenSystem sys = sp::build_spectrum(sp::make_spec(4, 1.0), 64);
  fw::SpectrumView view = fw::view_of(sys);
  for (double k : {0.0, 1.0, 5.0, 10.5, 63.0}) {
    fw::EffectiveRanks ranks = fw::effective_ranks(view, k);
    CHECK(ranks.r <= ranks.R * (1 + 1e-12));
    CHECK(ranks.R <= ranks.r * ranks.r * (1 + 1e-12));
  }
}

TEST_CASE("view index summary splits head and tail") {
  fw::SpectrumView view = fw::synthetic_view({{1.0, 3.0}, {0.5, 7.0}});
  fw::ViewIndexSummary s = fw::view_index_summary(view, 5.0);
  CHECK(s.level_index == 0);
  CHECK(s.L_m == 3.0);
  CHECK(s.U_m == 10.0);
  CHECK(s.lambda_min_head == doctest::Approx(1.0));

  fw::SpectrumView flat = fw::synthetic_view({{1.0, 10.0}});
  s = fw::view_index_summary(flat, 5.0);
  CHECK(s.level_index == -1);
  CHECK(s.L_m == 0.0);
  CHECK(s.U_m == 10.0);
}

TEST_CASE("overfitting-coefficient bracket on the flat spectrum") {
  fw::SpectrumView view = fw::synthetic_view({{1.0, 10.0}});
  fw::E0Bracket bracket = fw::e0_bracket(view, 5.0);
  REQUIRE(bracket.upper.ok);
  CHECK(bracket.upper.value == doctest::Approx(2.25).epsilon(1e-12));
  REQUIRE(bracket.lower.ok);
  CHECK(bracket.lower.value == doctest::Approx(14.0 / 9.0).epsilon(1e-12));
  // L_m = 0 degenerates the coarse lower bound to 1.
  CHECK(bracket.zhou_lower.value == doctest::Approx(1.0));

  double e0 = fw::overfitting_coefficient(
      view, fw::solve_kappa(view, 5.0, 0.0).log_kappa, 5.0);
  CHECK(bracket.lower.value <= e0 * (1 + 1e-12));
  CHECK(e0 <= bracket.upper.value * (1 + 1e-12));
}

TEST_CASE("bracket sides report unusable preconditions") {
  fw::SpectrumView tiny = fw::synthetic_view({{1.0, 2.0}, {0.5, 1.0}});
  fw::E0Bracket bracket = fw::e0_bracket(tiny, 2.5);
  // ceil(1.25 m) + 1 overruns the three retained modes.
  CHECK(!bracket.lower.ok);
  CHECK(std::isnan(bracket.lower.value));
  CHECK(!bracket.lower.note.empty());
  // The upper side also runs out of modes: L_m + 1 hits the spectrum edge.
  CHECK(!bracket.upper.ok);
  CHECK(!bracket.upper.note.empty());
}

TEST_CASE("unlisted target mass is charged as fully unlearnable") {
  fw::SpectrumView view = fw::synthetic_view({{1.0, 10.0}});
  fw::TargetSpec target;
  target.mass_by_degree = {{0, 1.0}};
  target.norm_sq = 3.0;  // 2.0 of mass lives beyond the retained modes
  fw::RiskPrediction pred = fw::predicted_risk(view, target, 0.0, 5.0);
  // bias = E * (1 * (1-L)^2 + 2.0), L = 1/2, E = 2.
  CHECK(pred.bias == doctest::Approx(2.0 * (0.25 + 2.0)).epsilon(1e-12));
}

TEST_CASE("benign probe at narrowing bandwidth keeps the index small") {
  double m = 500.0;
  double tau = std::pow(m, -1.0 / 3.0) / std::log(m);
  sp::EigenSystem sys = sp::build_spectrum(sp::make_spec(4, tau), 500);
  fw::SpectrumView view = fw::view_of(sys);
  fw::BenignCheck check = fw::benign_condition_check(view, m);
  CHECK(check.k_n_over_m <= 0.05);
  CHECK(check.k_n >= 0.0);
  CHECK(check.m_over_R > 0.0);
}

TEST_CASE("catastrophic probe reports the tail-to-index ratio") {
  fw::SpectrumView view = geometric_view();
  double probe = fw::catastrophic_condition_check(view, 10.0, 0.5);
  CHECK(probe == doctest::Approx(2.0 / 15.0).epsilon(1e-6));
}

TEST_CASE("tail term shifts kappa by a certifiable amount") {
  sp::EigenSystem sys = sp::build_spectrum(sp::make_spec(6, 1.0), 64);
  fw::SpectrumView view = fw::view_of(sys);
  fw::KappaResult kr = fw::solve_kappa(view, 64.0, 0.0);
  CHECK(kr.tail_shift >= 0.0);
  CHECK(kr.tail_shift <= 1e-5);
}

}  // TEST_SUITE
