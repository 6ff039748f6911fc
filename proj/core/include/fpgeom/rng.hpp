#pragma once

// Counter-based generator: output is a pure function of (seed, stream,
// counter), so trials and points draw independently with no shared state.

#include <cstdint>

namespace fpgeom {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(splitmix64(seed ^ splitmix64(stream * 0xda942042e4dd58b5ull))) {}

  std::uint64_t at(std::uint64_t counter) const {
    return splitmix64(base_ + counter * 0x9e3779b97f4a7c15ull);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform(std::uint64_t counter) const {
    return double(at(counter) >> 11) * 0x1.0p-53;
  }

  bool bernoulli(std::uint64_t counter, double prob) const {
    return uniform(counter) < prob;
  }

  CounterRng split(std::uint64_t substream) const {
    CounterRng r(0, 0);
    r.base_ = splitmix64(base_ ^ splitmix64(substream * 0xd6e8feb86659fd93ull));
    return r;
  }

 private:
  std::uint64_t base_;
};

}  // namespace fpgeom
