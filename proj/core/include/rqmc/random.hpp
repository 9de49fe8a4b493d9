#pragma once

#include <cstdint>
#include <random>

namespace rqmc {

/// Seedable random stream driving every randomized choice.
/// Identical seeds give identical draw sequences, hence identical
/// constructed rules and experiment outputs.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on the 53-bit grid in [0,1).
  double next_double01();

  /// Exactly uniform over {0,...,n-1}; rejection sampling, no modulo bias.
  std::uint64_t uniform_below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Free-function form of RandomSource::uniform_below.
std::uint64_t pick_uniform(RandomSource& rng, std::uint64_t n);

/// SplitMix64 finalizer; used to decorrelate seeds derived from
/// (master seed, stream index, replication index) tuples.
std::uint64_t mix64(std::uint64_t x);

/// Seed for replication `rep` of stream `stream` under a master seed.
/// Replications are independent streams: no sequential draw dependence.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t rep);

}  // namespace rqmc
