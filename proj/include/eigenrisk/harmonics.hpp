#pragma once

#include <cstdint>
#include <optional>

namespace eigenrisk::harmonics {

// Dimension of the space of spherical harmonics of degree k on S^{d-1}:
//   N(d,k) = (2k+d-2) (k+d-3)! / (k! (d-2)!),   N(d,0) = 1.
// Equivalently N(d,k) = C(k+d-2, d-2) + C(k+d-3, d-2), which is what the
// exact integer path evaluates.
struct DegreeCount {
  int d = 0;
  int k = 0;
  double value_log = 0.0;                      // log N(d,k), always finite
  std::optional<std::uint64_t> value_exact;    // present when it fits 64 bits
};

// log N(d,k) via log-gamma; exact for d = 2 (N = 2 for k >= 1) and k = 0.
double log_multiplicity(int d, int k);

DegreeCount multiplicity(int d, int k);

// Sum of multiplicities over degrees 0..k inclusive (the constant harmonic
// counts).  Exact value when it fits 64 bits.
std::optional<std::uint64_t> cumulative_multiplicity_exact(int d, int k);
double cumulative_multiplicity(int d, int k);  // double precision sum

// Index machinery: k_m is the largest degree whose cumulative multiplicity is
// strictly below m; L_m and U_m are the cumulative counts through k_m and
// k_m + 1.  Requires m >= 2 so that k_m >= 0 exists.
struct IndexSummary {
  long long m = 0;
  int k_m = 0;
  double L_m = 0.0;
  double U_m = 0.0;
};

IndexSummary index_summary(int d, long long m);

// Degree of the j-th largest eigenvalue counted with multiplicity (1-based
// flattened index).
int invert_index(int d, double j);

}  // namespace eigenrisk::harmonics
