#pragma once

// Exact non-negative rationals with an absorbing infinity, plus the
// bound-tracking wrapper used wherever truncated precision means a value
// is only known as a lower bound.

#include <cstdint>
#include <numeric>
#include <string>

#include "pvg/errors.hpp"

namespace pvg {

// A non-negative rational, or infinity (den_ == 0). Always stored reduced.
class ValueQ {
public:
  ValueQ() : num_(0), den_(1) {}
  ValueQ(int64_t n) : num_(n), den_(1) {
    if (n < 0) throw Error("ValueQ: negative value");
  }

  static ValueQ frac(int64_t num, int64_t den) {
    if (den == 0) throw Error("ValueQ: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    if (num < 0) throw Error("ValueQ: negative value");
    int64_t g = std::gcd(num, den);
    ValueQ q;
    q.num_ = num / g;
    q.den_ = den / g;
    return q;
  }

  static ValueQ infinity() {
    ValueQ q;
    q.num_ = 1;
    q.den_ = 0;
    return q;
  }

  bool is_infinity() const { return den_ == 0; }
  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  friend ValueQ operator+(const ValueQ& a, const ValueQ& b) {
    if (a.is_infinity() || b.is_infinity()) return infinity();
    return frac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }

  // a - b for a >= b (values stay non-negative).
  friend ValueQ operator-(const ValueQ& a, const ValueQ& b) {
    if (a.is_infinity()) return infinity();
    if (b.is_infinity() || a < b) throw Error("ValueQ: negative difference");
    return frac(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }

  // q scaled by a natural number; 0 * infinity is taken to be 0 (empty sum).
  ValueQ scaled(uint64_t k) const {
    if (k == 0) return ValueQ(0);
    if (is_infinity()) return infinity();
    return frac(num_ * static_cast<int64_t>(k), den_);
  }

  friend bool operator==(const ValueQ& a, const ValueQ& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const ValueQ& a, const ValueQ& b) { return !(a == b); }
  friend bool operator<(const ValueQ& a, const ValueQ& b) {
    if (a.is_infinity()) return false;
    if (b.is_infinity()) return true;
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const ValueQ& a, const ValueQ& b) { return !(b < a); }
  friend bool operator>(const ValueQ& a, const ValueQ& b) { return b < a; }
  friend bool operator>=(const ValueQ& a, const ValueQ& b) { return !(a < b); }

  static ValueQ min(const ValueQ& a, const ValueQ& b) { return a < b ? a : b; }
  static ValueQ max(const ValueQ& a, const ValueQ& b) { return a < b ? b : a; }

  std::string str() const {
    if (is_infinity()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

private:
  int64_t num_;
  int64_t den_;
};

// A value that may only be known as a lower bound after truncation:
//   Exact v    -- the value is v
//   AtLeast v  -- the value is >= v
//   Greater v  -- the value is > v
struct ValueBound {
  enum class Kind { Exact, AtLeast, Greater };

  ValueQ value;
  Kind kind = Kind::Exact;

  static ValueBound exact(ValueQ v) { return {v, Kind::Exact}; }
  static ValueBound at_least(ValueQ v) { return {v, Kind::AtLeast}; }
  static ValueBound greater(ValueQ v) { return {v, Kind::Greater}; }

  bool is_exact() const { return kind == Kind::Exact; }

  std::string str() const {
    switch (kind) {
      case Kind::AtLeast: return ">=" + value.str();
      case Kind::Greater: return ">" + value.str();
      default: return value.str();
    }
  }
};

// Sound min under interval semantics: an exact value wins whenever it lies
// at or below every competing lower bound.
inline ValueBound vb_min(const ValueBound& a, const ValueBound& b) {
  if (a.is_exact() && b.is_exact())
    return ValueBound::exact(ValueQ::min(a.value, b.value));
  if (a.is_exact()) {
    if (a.value <= b.value) return a;
    return b;
  }
  if (b.is_exact()) {
    if (b.value <= a.value) return b;
    return a;
  }
  if (a.value < b.value) return a;
  if (b.value < a.value) return b;
  if (a.kind == ValueBound::Kind::Greater && b.kind == ValueBound::Kind::Greater)
    return a;
  return ValueBound::at_least(a.value);
}

inline ValueBound vb_add(const ValueBound& a, const ValueBound& b) {
  ValueQ v = a.value + b.value;
  if (a.is_exact() && b.is_exact()) return ValueBound::exact(v);
  if (a.kind == ValueBound::Kind::Greater || b.kind == ValueBound::Kind::Greater)
    return ValueBound::greater(v);
  return ValueBound::at_least(v);
}

// True only when the interval semantics certify a > b / a < b; inconclusive
// comparisons return false.
inline bool definitely_gt(const ValueBound& a, const ValueBound& b) {
  if (!b.is_exact()) return false;
  switch (a.kind) {
    case ValueBound::Kind::Exact:
    case ValueBound::Kind::AtLeast: return a.value > b.value;
    case ValueBound::Kind::Greater: return a.value >= b.value;
  }
  return false;
}

inline bool definitely_lt(const ValueBound& a, const ValueBound& b) {
  if (!a.is_exact()) return false;
  switch (b.kind) {
    case ValueBound::Kind::Exact: return a.value < b.value;
    case ValueBound::Kind::AtLeast: return a.value < b.value;
    case ValueBound::Kind::Greater: return a.value <= b.value;
  }
  return false;
}

}  // namespace pvg
