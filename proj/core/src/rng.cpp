#include "sldp/rng.hpp"

namespace sldp {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t lane)
    : seed_(seed), key_(mix64(seed ^ mix64(lane + 0x632be59bd9b4e019ULL))), engine_(key_) {}

RngStream RngStream::split(std::uint64_t lane) const {
  RngStream child(seed_);
  child.key_ = mix64(key_ ^ mix64(lane + 0x2545f4914f6cdd1dULL));
  child.engine_.seed(child.key_);
  return child;
}

double RngStream::uniform() {
  return std::generate_canonical<double, 53>(engine_);
}

double RngStream::uniform_open() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  return u;
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double RngStream::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

}  // namespace sldp
