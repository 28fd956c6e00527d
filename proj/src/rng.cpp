#include "eigenrisk/rng.hpp"

#include <cmath>

#include "eigenrisk/errors.hpp"

namespace eigenrisk::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Stream::Stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  // Counter-based construction: mix (seed, id) through splitmix64 so streams
  // are independent of the order in which trials run.
  std::uint64_t state = master_seed;
  std::uint64_t a = splitmix64(state);
  state ^= 0x6a09e667f3bcc908ULL + stream_id * 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(state);
  state = a ^ rotl(b, 17) ^ (stream_id + 0x9e3779b97f4a7c15ULL);
  for (auto& word : s_) word = splitmix64(state);
  // xoshiro256++ forbids the all-zero state; splitmix64 output makes this
  // astronomically unlikely, but keep the guard explicit.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t Stream::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Stream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method; branch counts depend only on the stream's own
  // draws, so per-trial streams stay reproducible.
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

void Stream::sphere_point(int d, double* out) {
  if (d < 2) throw usage_error("sphere sampling needs d >= 2");
  double norm_sq;
  do {
    norm_sq = 0.0;
    for (int i = 0; i < d; ++i) {
      out[i] = normal();
      norm_sq += out[i] * out[i];
    }
  } while (norm_sq == 0.0);
  double inv = 1.0 / std::sqrt(norm_sq);
  for (int i = 0; i < d; ++i) out[i] *= inv;
}

}  // namespace eigenrisk::rng
