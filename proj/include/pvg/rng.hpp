#pragma once

// Deterministic randomness for the property suites. mt19937_64 has a
// standard-pinned output sequence, and sampling goes through rejection
// (never std::uniform_int_distribution, whose output is implementation
// defined), so identical seeds give identical reports everywhere.

#include <cstdint>
#include <random>

namespace pvg {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Rng {
public:
  explicit Rng(uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n) via rejection.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  bool coin() { return (eng_() & 1) != 0; }

  // Independent stream for a sub-task (e.g. one trial of a suite).
  Rng derive(uint64_t salt) const {
    return Rng(splitmix64(seed_ ^ splitmix64(salt + 0x51ed2701)));
  }

private:
  uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace pvg
