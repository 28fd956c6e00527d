#pragma once

#include <cstdint>

namespace eigenrisk::rng {

// splitmix64 step; used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256++ stream with counter-based construction: the state is expanded
// with splitmix64 from (master_seed, stream_id), so streams are independent
// of evaluation order and safe to hand to concurrent trials.
class Stream {
 public:
  Stream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform01();                  // [0, 1), 53-bit mantissa
  double normal();                     // standard normal, Marsaglia polar
  void sphere_point(int d, double* out);  // uniform on S^{d-1}

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace eigenrisk::rng
