#pragma once

// Exact truncated arithmetic in Z_p: elements known modulo p^N, with the
// p-adic valuation, unit inversion, and Lucas-theorem binomial residues.

#include <cstdint>
#include <vector>

#include "pvg/errors.hpp"
#include "pvg/valueq.hpp"

namespace pvg {

// v_p of a truncated element. A zero residue only certifies v_p >= N,
// so the flag records whether the valuation is exact or a lower bound.
struct Vp {
  uint32_t k;
  bool exact;  // false: valuation is only known to be >= k (= precision)
};

class PAdicInt {
public:
  // value is reduced into [0, p^precision); negative values wrap.
  PAdicInt(uint64_t p, uint32_t precision, int64_t value);

  uint64_t prime() const { return p_; }
  uint32_t precision() const { return prec_; }
  uint64_t residue() const { return r_; }
  uint64_t modulus() const { return mod_; }

  bool is_zero() const { return r_ == 0; }
  bool is_unit() const { return r_ % p_ != 0; }

  Vp vp() const;

  // Multiplicative inverse of a unit mod p^N; throws NotAUnit otherwise.
  PAdicInt unit_inverse() const;

  PAdicInt truncated(uint32_t precision) const;

  friend PAdicInt operator+(const PAdicInt& a, const PAdicInt& b);
  friend PAdicInt operator-(const PAdicInt& a, const PAdicInt& b);
  friend PAdicInt operator*(const PAdicInt& a, const PAdicInt& b);
  PAdicInt operator-() const;

  // Same prime and precision, same residue.
  friend bool operator==(const PAdicInt& a, const PAdicInt& b) {
    return a.p_ == b.p_ && a.prec_ == b.prec_ && a.r_ == b.r_;
  }
  friend bool operator!=(const PAdicInt& a, const PAdicInt& b) { return !(a == b); }

private:
  uint64_t p_;
  uint32_t prec_;
  uint64_t mod_;  // p^prec
  uint64_t r_;
};

// p^k for small arguments, guarding against overflow of the working range.
uint64_t pow_u64(uint64_t p, uint32_t k);

// Binomial residue C(b, n) mod p by digit-wise products (Lucas). Requires
// n < p^N so that every base-p digit of n is covered by the known digits
// of b; throws InsufficientPrecision otherwise.
uint64_t binom_mod_p(const PAdicInt& b, uint64_t n);

// Smallest n >= 1 with C(b, n) a unit mod p, namely p^{v_p(b)}. Throws
// InsufficientPrecision when b is zero at the working precision.
uint64_t min_nonzero_binom(const PAdicInt& b);

// Square matrix over Z_p at a fixed truncated precision.
class MatrixZp {
public:
  MatrixZp(uint64_t p, uint32_t precision, uint32_t dim);
  static MatrixZp identity(uint64_t p, uint32_t precision, uint32_t dim);

  uint64_t prime() const { return p_; }
  uint32_t precision() const { return prec_; }
  uint32_t dim() const { return dim_; }

  uint64_t at(uint32_t i, uint32_t j) const { return a_[i * dim_ + j]; }
  void set(uint32_t i, uint32_t j, int64_t value);
  PAdicInt entry(uint32_t i, uint32_t j) const {
    return PAdicInt(p_, prec_, static_cast<int64_t>(at(i, j)));
  }

  friend MatrixZp operator*(const MatrixZp& a, const MatrixZp& b);
  friend MatrixZp operator-(const MatrixZp& a, const MatrixZp& b);
  MatrixZp pow(uint64_t e) const;

  bool is_identity() const;
  // Determinant nonzero mod p.
  bool invertible_mod_p() const;
  // Inverse of a unipotent upper-triangular matrix (exact at precision).
  MatrixZp unipotent_inverse() const;
  bool is_unipotent_upper() const;

  friend bool operator==(const MatrixZp& a, const MatrixZp& b) {
    return a.p_ == b.p_ && a.prec_ == b.prec_ && a.dim_ == b.dim_ && a.a_ == b.a_;
  }
  friend bool operator!=(const MatrixZp& a, const MatrixZp& b) { return !(a == b); }

private:
  uint64_t p_;
  uint32_t prec_;
  uint64_t mod_;
  uint32_t dim_;
  std::vector<uint64_t> a_;
};

}  // namespace pvg
