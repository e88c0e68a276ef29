#pragma once

#include <cstdint>
#include <random>

namespace sldp {

/// A seeded random stream. Streams are split deterministically into
/// independent child lanes, so a batch of Monte Carlo work keyed by lane
/// index reproduces bit-for-bit regardless of how batches are scheduled.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t lane = 0);

  /// Child stream for `lane`. Does not advance this stream.
  RngStream split(std::uint64_t lane) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t key() const { return key_; }

  double uniform();              // [0, 1)
  double uniform_open();         // (0, 1)
  double normal();               // N(0, 1)
  double gamma(double shape);    // Gamma(shape, 1)
  double sign();                 // +1 or -1 with probability 1/2

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// SplitMix64 finalizer; used to derive lane keys.
std::uint64_t mix64(std::uint64_t x);

}  // namespace sldp
