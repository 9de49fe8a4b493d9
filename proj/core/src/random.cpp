#include "rqmc/random.hpp"

#include <stdexcept>

namespace rqmc {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t rep) {
  return mix64(mix64(master + 0x632BE59BD9B4E019ULL * (stream + 1)) + rep);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

std::uint64_t RandomSource::next_u64() { return engine_(); }

double RandomSource::next_double01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::uniform_below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_below requires n >= 1");
  }
  if ((n & (n - 1)) == 0) {
    return next_u64() & (n - 1);  // power of two, no bias possible
  }
  // Reject draws below 2^64 mod n, then reduce; every residue class is
  // hit by the same number of accepted values.
  const std::uint64_t min_accept = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= min_accept) return r % n;
  }
}

std::uint64_t pick_uniform(RandomSource& rng, std::uint64_t n) { return rng.uniform_below(n); }

}  // namespace rqmc
