#pragma once

// Shared test helpers: an exact big-integer binomial oracle (independent of
// the Lucas path under test) and small fixtures.

#include <cstdint>
#include <vector>

#include "pvg/nilgroup.hpp"
#include "pvg/rng.hpp"

namespace pvgtest {

// Minimal unsigned bignum, base 2^32, little-endian limbs. Just enough for
// the multiplicative binomial formula.
class BigUint {
public:
  BigUint() : limbs_{0} {}
  explicit BigUint(uint64_t v) {
    limbs_ = {static_cast<uint32_t>(v & 0xffffffffu), static_cast<uint32_t>(v >> 32)};
    trim();
  }

  void mul_small(uint64_t m) {
    uint64_t carry = 0;
    for (auto& l : limbs_) {
      uint64_t cur = static_cast<uint64_t>(l) * (m & 0xffffffffu) + carry;
      // m < 2^32 is all we need for the binomial formula's factors below
      // 2^20, but keep the general split for safety.
      l = static_cast<uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    while (carry) {
      limbs_.push_back(static_cast<uint32_t>(carry & 0xffffffffu));
      carry >>= 32;
    }
    trim();
  }

  // Exact division by a small divisor; the caller guarantees divisibility.
  void div_small(uint64_t d) {
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    trim();
  }

  uint64_t mod_small(uint64_t d) const {
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;)
      rem = ((rem << 32) | limbs_[i]) % d;
    return rem;
  }

private:
  std::vector<uint32_t> limbs_;
  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }
};

// C(b, n) as an exact integer via the multiplicative formula
// C(b, n) = prod_{i=1..n} (b - n + i) / i (each step divides exactly).
inline BigUint exact_binomial(uint64_t b, uint64_t n) {
  if (n > b) return BigUint(0);
  BigUint r(1);
  for (uint64_t i = 1; i <= n; ++i) {
    r.mul_small(b - n + i);
    r.div_small(i);
  }
  return r;
}

inline std::vector<std::pair<pvg::GroupElement, pvg::GroupElement>> sample_pairs(
    const pvg::GroupSpecPtr& spec, uint32_t prec, pvg::Rng& rng, uint64_t count) {
  std::vector<std::pair<pvg::GroupElement, pvg::GroupElement>> out;
  for (uint64_t i = 0; i < count; ++i)
    out.push_back({pvg::random_element(spec, prec, rng),
                   pvg::random_element(spec, prec, rng)});
  return out;
}

}  // namespace pvgtest
