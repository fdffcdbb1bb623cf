#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dyson {

// Counter-based generator: output n is a hash of (key, n), where the key is
// derived from a seed and a stream id.  Chains and tests can derive as many
// independent streams as they like from one seed, and replaying a stream
// never depends on how much of another stream was consumed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed + kGolden) ^ mix(stream ^ 0xb5297a4d3f84d5a3ULL))) {}

  // Independent generator for a sub-task, cheap enough to make per site/chain.
  CounterRng stream(std::uint64_t id) const { return CounterRng(key_, id + 1); }

  std::uint64_t next() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; burns two counter values per call.
  double normal() {
    double u = uniform();
    double v = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  // Uniform integer in [0, bound) by 128-bit multiply-shift.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Random sign, +1 or -1.
  int sign() { return (next() & 1) ? 1 : -1; }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dyson
