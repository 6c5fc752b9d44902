#include "pvg/fq.hpp"

#include <algorithm>

namespace pvg {

namespace {

// Dense polynomial arithmetic over F_p, used for field ops and the
// irreducibility check. Polynomials are little-endian coefficient vectors.

using Poly = std::vector<uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  trim(c);
  return c;
}

uint64_t inv_mod_p(uint64_t a, uint64_t p) {
  uint64_t r = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& m, uint64_t p) {
  uint64_t lead_inv = inv_mod_p(m.back(), p);
  while (a.size() >= m.size()) {
    uint64_t f = a.back() * lead_inv % p;
    size_t shift = a.size() - m.size();
    if (f != 0)
      for (size_t i = 0; i < m.size(); ++i)
        a[shift + i] = (a[shift + i] + (p - f * m[i] % p)) % p;
    a.pop_back();
    trim(a);
    if (a.size() < m.size()) break;
  }
  trim(a);
  return a;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint64_t p) {
  Poly r = {1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
    base = poly_mod(poly_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly x_power_q_minus_x(uint64_t q_exp_p, uint32_t k, const Poly& m, uint64_t p) {
  // x^(p^k) mod m, minus x.
  Poly xp = {0, 1};
  for (uint32_t i = 0; i < k; ++i) xp = poly_powmod(xp, q_exp_p, m, p);
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = (xp[1] + p - 1) % p;
  trim(xp);
  return xp;
}

}  // namespace

FieldSpec::FieldSpec(uint64_t p, std::vector<uint32_t> irred)
    : p_(p), irred_(std::move(irred)) {
  if (p < 2) throw ConfigInvalid("FieldSpec: p must be prime");
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw ConfigInvalid("FieldSpec: p must be prime");
  if (irred_.size() < 2) throw ConfigInvalid("FieldSpec: polynomial degree >= 1 required");
  for (auto& c : irred_) c = static_cast<uint32_t>(c % p_);
  if (irred_.back() != 1) throw ConfigInvalid("FieldSpec: polynomial must be monic");
  check_irreducible();
}

void FieldSpec::check_irreducible() const {
  uint32_t r = degree();
  if (r == 1) return;
  Poly m(irred_.begin(), irred_.end());
  // Rabin: x^(p^r) == x mod m, and gcd(x^(p^(r/q)) - x, m) = 1 for primes q | r.
  Poly top = x_power_q_minus_x(p_, r, m, p_);
  if (!top.empty()) throw ConfigInvalid("FieldSpec: polynomial is not irreducible");
  for (uint32_t q = 2; q <= r; ++q) {
    if (r % q != 0) continue;
    bool q_prime = true;
    for (uint32_t d = 2; d * d <= q; ++d)
      if (q % d == 0) q_prime = false;
    if (!q_prime) continue;
    Poly g = poly_gcd(x_power_q_minus_x(p_, r / q, m, p_), m, p_);
    if (g.size() != 1) throw ConfigInvalid("FieldSpec: polynomial is not irreducible");
  }
}

std::shared_ptr<const FieldSpec> FieldSpec::prime_field(uint64_t p) {
  return std::make_shared<const FieldSpec>(p, std::vector<uint32_t>{0, 1});
}

Fq FieldSpec::one() const {
  Fq a = zero();
  a[0] = 1;
  return a;
}

Fq FieldSpec::from_int(int64_t v) const {
  int64_t m = static_cast<int64_t>(p_);
  int64_t r = v % m;
  if (r < 0) r += m;
  Fq a = zero();
  a[0] = static_cast<uint32_t>(r);
  return a;
}

bool FieldSpec::is_zero(const Fq& a) const {
  for (uint32_t c : a)
    if (c != 0) return false;
  return true;
}

Fq FieldSpec::add(const Fq& a, const Fq& b) const {
  Fq c(degree());
  for (uint32_t i = 0; i < degree(); ++i)
    c[i] = static_cast<uint32_t>((a[i] + static_cast<uint64_t>(b[i])) % p_);
  return c;
}

Fq FieldSpec::sub(const Fq& a, const Fq& b) const {
  Fq c(degree());
  for (uint32_t i = 0; i < degree(); ++i)
    c[i] = static_cast<uint32_t>((a[i] + p_ - b[i]) % p_);
  return c;
}

Fq FieldSpec::neg(const Fq& a) const { return sub(zero(), a); }

Fq FieldSpec::mul(const Fq& a, const Fq& b) const {
  if (degree() == 1) {
    Fq c(1);
    c[0] = static_cast<uint32_t>(static_cast<uint64_t>(a[0]) * b[0] % p_);
    return c;
  }
  Poly pa(a.begin(), a.end()), pb(b.begin(), b.end());
  Poly m(irred_.begin(), irred_.end());
  Poly pc = poly_mod(poly_mul(pa, pb, p_), m, p_);
  Fq c = zero();
  for (size_t i = 0; i < pc.size(); ++i) c[i] = static_cast<uint32_t>(pc[i]);
  return c;
}

Fq FieldSpec::pow(const Fq& a, uint64_t e) const {
  Fq r = one(), base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Fq FieldSpec::inv(const Fq& a) const {
  if (is_zero(a)) throw NotAUnit("Fq: zero has no inverse");
  // a^(q-2), q = p^r (q fits: p^r is checked small at construction use sites)
  uint64_t q = 1;
  for (uint32_t i = 0; i < degree(); ++i) {
    if (q > (1ull << 40) / p_) throw ConfigInvalid("FieldSpec: field too large");
    q *= p_;
  }
  return pow(a, q - 2);
}

}  // namespace pvg
