#include "eigenrisk/harmonics.hpp"

#include <cmath>
#include <limits>

#include "eigenrisk/errors.hpp"

namespace eigenrisk::harmonics {

namespace {

void require_dk(int d, int k) {
  if (d < 2) throw usage_error("dimension parameter d must be >= 2");
  if (k < 0) throw usage_error("degree k must be >= 0");
}

// C(n, r) as exact 64-bit integer; nullopt on overflow, 0 when r < 0 or
// r > n.  Multiplication before division stays exact because the running
// product after i factors is C(n-r+i, i) * i! / i! ... i.e. each partial
// quotient is itself a binomial, so the division below is exact.
std::optional<std::uint64_t> binom_exact(long long n, long long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (long long i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - r + i);
    acc /= static_cast<unsigned __int128>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

double binom_log(double n, double r) {
  if (r < 0 || n < 0 || r > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(r + 1) - std::lgamma(n - r + 1);
}

// log(e^a + e^b) without overflow.
double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

double log_multiplicity(int d, int k) {
  require_dk(d, k);
  if (k == 0) return 0.0;
  // log[(2k+d-2) (k+d-3)! / (k! (d-2)!)]
  return std::log(2.0 * k + d - 2.0) + std::lgamma(k + d - 2.0) -
         std::lgamma(k + 1.0) - std::lgamma(d - 1.0);
}

DegreeCount multiplicity(int d, int k) {
  require_dk(d, k);
  DegreeCount out;
  out.d = d;
  out.k = k;
  out.value_log = log_multiplicity(d, k);
  if (k == 0) {
    out.value_exact = 1;
    return out;
  }
  auto a = binom_exact(static_cast<long long>(k) + d - 2, d - 2);
  auto b = binom_exact(static_cast<long long>(k) + d - 3, d - 2);
  if (a && b) {
    unsigned __int128 sum =
        static_cast<unsigned __int128>(*a) + static_cast<unsigned __int128>(*b);
    if (sum <= std::numeric_limits<std::uint64_t>::max())
      out.value_exact = static_cast<std::uint64_t>(sum);
  }
  return out;
}

std::optional<std::uint64_t> cumulative_multiplicity_exact(int d, int k) {
  if (d < 2) throw usage_error("dimension parameter d must be >= 2");
  if (k < 0) return 0;  // empty sum
  // sum_{j<=k} N(d,j) = C(k+d-1, d-1) + C(k+d-2, d-1)
  auto a = binom_exact(static_cast<long long>(k) + d - 1, d - 1);
  auto b = binom_exact(static_cast<long long>(k) + d - 2, d - 1);
  if (!a || !b) return std::nullopt;
  unsigned __int128 sum =
      static_cast<unsigned __int128>(*a) + static_cast<unsigned __int128>(*b);
  if (sum > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(sum);
}

double cumulative_multiplicity(int d, int k) {
  if (d < 2) throw usage_error("dimension parameter d must be >= 2");
  if (k < 0) return 0.0;
  if (auto exact = cumulative_multiplicity_exact(d, k))
    return static_cast<double>(*exact);
  double log_sum = log_add(binom_log(static_cast<double>(k) + d - 1, d - 1.0),
                           binom_log(static_cast<double>(k) + d - 2, d - 1.0));
  return std::exp(log_sum);
}

IndexSummary index_summary(int d, long long m) {
  if (m < 2) throw usage_error("index summary requires m >= 2");
  IndexSummary out;
  out.m = m;
  int k = 0;
  // cumulative(d, 0) = 1 < m, so the scan terminates with k_m >= 0.
  while (cumulative_multiplicity(d, k + 1) < static_cast<double>(m)) ++k;
  out.k_m = k;
  out.L_m = cumulative_multiplicity(d, k);
  out.U_m = cumulative_multiplicity(d, k + 1);
  return out;
}

int invert_index(int d, double j) {
  if (!(j >= 1)) throw usage_error("flattened index must be >= 1");
  int k = 0;
  while (cumulative_multiplicity(d, k) < j) ++k;
  return k;
}

}  // namespace eigenrisk::harmonics
