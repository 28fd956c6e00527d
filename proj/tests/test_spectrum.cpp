#include <doctest.h>

#include <cmath>

#include "eigenrisk/errors.hpp"
#include "eigenrisk/spectrum.hpp"

namespace sp = eigenrisk::spectrum;
using eigenrisk::usage_error;

TEST_SUITE("spectrum") {

TEST_CASE("distinct eigenvalues at frozen points") {
  struct Row {
    int d, k;
    double tau, lambda;
  };
  const Row rows[] = {
      {2, 0, 1.0, 0.3085083225536710395334},
      {3, 0, 1.0, 0.2454210902778164549266},
      {6, 0, 1.0, 0.1864780666094667607498},
      {4, 3, 0.5, 0.01262508700357013617609},
  };
  for (const Row& r : rows) {
    sp::SpectrumSpec spec = sp::make_spec(r.d, r.tau);
    CHECK(std::exp(sp::eigenvalue_log(spec, r.k)) ==
          doctest::Approx(r.lambda).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues decrease with degree") {
  sp::SpectrumSpec spec = sp::make_spec(4, 1.0);
  for (int k = 0; k < 20; ++k)
    CHECK(sp::eigenvalue_log(spec, k) > sp::eigenvalue_log(spec, k + 1));
}

TEST_CASE("kept trace plus certified tail reproduces the unit trace") {
  for (int d : {2, 4, 16}) {
    for (double tau : {0.25, 2.0}) {
      sp::EigenSystem sys =
          sp::build_spectrum(sp::make_spec(d, tau), 64);
      CHECK(std::abs(sys.trace_partial - 1.0) <= sys.tail_bound + 1e-8);
      CHECK(sys.trace_partial <= 1.0 + 1e-8);
      CHECK(sys.tail_bound <= 1e-10 * sys.trace_partial);
    }
  }
}

TEST_CASE("flattened margin policy") {
  sp::EigenSystem sys = sp::build_spectrum(sp::make_spec(2, 1.0), 4);
  CHECK(sys.flattened_total >= 40.0);
}

TEST_CASE("consecutive ratios respect the two-sided bracket") {
  for (int d : {2, 3, 5, 8}) {
    for (double tau : {0.4, 0.8, 1.7}) {
      sp::EigenSystem sys = sp::build_spectrum(sp::make_spec(d, tau), 64);
      sp::RatioReport report = sp::check_ratio_bounds(sys);
      CHECK(report.n_checked ==
            static_cast<int>(sys.degrees.size()) - 1);
      CHECK(report.max_violation <= 1e-12);
    }
  }
}

TEST_CASE("first-eigenvalue bracket contains the computed value") {
  for (int d : {2, 3, 4, 6, 8, 16}) {
    for (double tau : {0.25, 0.5, 1.0, 2.0}) {
      sp::SpectrumSpec spec = sp::make_spec(d, tau);
      sp::Interval bracket = sp::first_eigenvalue_log_bracket(d, tau);
      double log_lambda0 = sp::eigenvalue_log(spec, 0);
      // Odd d uses an exact point bracket; allow rounding slack.
      CHECK(log_lambda0 >= bracket.lo - 1e-12);
      CHECK(log_lambda0 <= bracket.hi + 1e-12);
    }
  }
}

TEST_CASE("tail bound certifies the omitted mass") {
  sp::SpectrumSpec spec = sp::make_spec(3, 1.0);
  sp::EigenSystem shallow = sp::build_spectrum(spec, 16, 1e-10, 10.0);
  sp::EigenSystem deep = sp::build_spectrum(spec, 16, 1e-16, 40.0);
  REQUIRE(deep.degrees.size() > shallow.degrees.size());
  double omitted = 0.0;
  for (std::size_t i = shallow.degrees.size(); i < deep.degrees.size(); ++i)
    omitted +=
        std::exp(deep.degrees[i].log_count + deep.degrees[i].log_lambda);
  CHECK(omitted <= shallow.tail_bound);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(sp::make_spec(1, 1.0), usage_error);
  CHECK_THROWS_AS(sp::make_spec(2, 0.0), usage_error);
  CHECK_THROWS_AS(sp::make_spec(2, -1.0), usage_error);
  CHECK_THROWS_AS(sp::build_spectrum(sp::make_spec(2, 1.0), 0), usage_error);
}

}  // TEST_SUITE
