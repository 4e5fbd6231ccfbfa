// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_RNG_HPP
#define DEGEN_RNG_HPP

#include <cstdint>
#include <random>

namespace degen {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent purposes drawing from the same master seed.
enum class StreamTag : std::uint64_t {
  coefficients = 0x636f656666ULL,
  shot = 0x73686f74ULL,
  solver_start = 0x736f6c7665ULL,
  test = 0x74657374ULL,
};

/// Random stream keyed by (master seed, index, purpose). Streams with
/// different keys are statistically independent, so per-sample work can be
/// scheduled in any order and still reproduce bit-for-bit.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t index,
            StreamTag tag = StreamTag::coefficients)
      : engine_(derive(master_seed, index, tag)) {}

  double normal() { return normal_(engine_); }
  double uniform01() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  static std::uint64_t derive(std::uint64_t master_seed, std::uint64_t index,
                              StreamTag tag) {
    std::uint64_t s = splitmix64(master_seed ^ static_cast<std::uint64_t>(tag));
    s = splitmix64(s ^ splitmix64(index));
    return s;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace degen

#endif  // DEGEN_RNG_HPP
