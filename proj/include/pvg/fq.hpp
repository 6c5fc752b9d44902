#pragma once

// Coefficient field k for the group algebra: F_p by default, or F_{p^r}
// presented as F_p[x]/(irred) for a monic irreducible polynomial supplied
// in configuration.

#include <cstdint>
#include <memory>
#include <vector>

#include "pvg/errors.hpp"

namespace pvg {

// Element of F_{p^r}: coefficient vector of length r, little-endian in x.
using Fq = std::vector<uint32_t>;

class FieldSpec {
public:
  // irred: monic polynomial coefficients c_0..c_r (c_r = 1), degree r >= 1.
  // Degree 1 gives F_p itself. Irreducibility is verified (Rabin's test).
  FieldSpec(uint64_t p, std::vector<uint32_t> irred);

  static std::shared_ptr<const FieldSpec> prime_field(uint64_t p);

  uint64_t p() const { return p_; }
  uint32_t degree() const { return static_cast<uint32_t>(irred_.size()) - 1; }
  const std::vector<uint32_t>& irreducible() const { return irred_; }

  Fq zero() const { return Fq(degree(), 0); }
  Fq one() const;
  Fq from_int(int64_t v) const;  // image of Z -> F_p -> F_{p^r}

  bool is_zero(const Fq& a) const;
  Fq add(const Fq& a, const Fq& b) const;
  Fq sub(const Fq& a, const Fq& b) const;
  Fq neg(const Fq& a) const;
  Fq mul(const Fq& a, const Fq& b) const;
  Fq inv(const Fq& a) const;  // NotAUnit on zero
  Fq pow(const Fq& a, uint64_t e) const;

  bool same(const FieldSpec& other) const {
    return p_ == other.p_ && irred_ == other.irred_;
  }

private:
  uint64_t p_;
  std::vector<uint32_t> irred_;

  void check_irreducible() const;
};

}  // namespace pvg
