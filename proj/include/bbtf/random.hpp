#pragma once

#include <cstdint>
#include <random>

namespace bbtf {

// One reproducible stream of variates. Identical (seed, stream) pairs give
// bit-identical sequences; distinct stream ids are seeded through seed_seq so
// concurrent chains can share a base seed without sharing state.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Exponential with rate 1.
  double exponential();
  // Gamma with the given shape and rate 1 (Marsaglia-Tsang).
  double gamma(double shape);
  // log of a Gamma(shape, 1) draw; stays finite for shapes far below 1.
  double log_gamma(double shape);

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Deterministic 64-bit mixing of a base seed with an index (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

} // namespace bbtf
