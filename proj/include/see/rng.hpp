#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace see {

/// Deterministic random source shared by every module.
///
/// The bit stream comes from std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. None of the <random> distributions are used because
/// their algorithms are implementation-defined; the transforms below are:
///
///   uniform01   (u64 >> 11) * 2^-53, giving a double in [0,1)
///   gaussian    Box-Muller on two uniforms, second variate cached
///   index(n)    rejection sampling on u64 to remove modulo bias
///
/// Child streams for parallel runs come from derive(master_seed, index), which
/// passes both values through SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  static Rng derive(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi);
  double gaussian();
  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }
  std::size_t index(std::size_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> cached_gaussian_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace see
