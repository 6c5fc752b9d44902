#include "pvg/padic.hpp"

#include <map>
#include <mutex>

namespace pvg {

namespace {

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// C(a, k) mod p for digits a, k < p, via a per-prime Pascal table. The
// cache behaves as if absent (pure values, built once under a lock).
const uint64_t* digit_binom_table(uint64_t p) {
  static std::mutex mu;
  static std::map<uint64_t, std::vector<uint64_t>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto it = tables.find(p);
  if (it == tables.end()) {
    std::vector<uint64_t> t(p * p, 0);
    for (uint64_t a = 0; a < p; ++a) {
      t[a * p] = 1;
      for (uint64_t k = 1; k <= a; ++k)
        t[a * p + k] = (t[(a - 1) * p + k] + t[(a - 1) * p + (k - 1)]) % p;
    }
    it = tables.emplace(p, std::move(t)).first;
  }
  return it->second.data();
}

}  // namespace

uint64_t pow_u64(uint64_t p, uint32_t k) {
  uint64_t m = 1;
  for (uint32_t i = 0; i < k; ++i) {
    if (m > (1ull << 31) / p) throw Error("pow_u64: p^k exceeds working range");
    m *= p;
  }
  return m;
}

PAdicInt::PAdicInt(uint64_t p, uint32_t precision, int64_t value)
    : p_(p), prec_(precision) {
  if (!is_prime_u64(p)) throw Error("PAdicInt: p must be prime");
  if (precision < 1) throw Error("PAdicInt: precision must be >= 1");
  mod_ = pow_u64(p, precision);
  int64_t m = static_cast<int64_t>(mod_);
  int64_t r = value % m;
  if (r < 0) r += m;
  r_ = static_cast<uint64_t>(r);
}

Vp PAdicInt::vp() const {
  if (r_ == 0) return {prec_, false};
  uint32_t k = 0;
  uint64_t r = r_;
  while (r % p_ == 0) {
    r /= p_;
    ++k;
  }
  return {k, true};
}

PAdicInt PAdicInt::unit_inverse() const {
  if (!is_unit()) throw NotAUnit("v_p > 0 at residue " + std::to_string(r_));
  // Extended Euclid on (r, p^N).
  int64_t a = static_cast<int64_t>(r_), m = static_cast<int64_t>(mod_);
  int64_t x0 = 1, x1 = 0, r0 = a, r1 = m;
  while (r1 != 0) {
    int64_t q = r0 / r1;
    int64_t t = r0 - q * r1; r0 = r1; r1 = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
  }
  return PAdicInt(p_, prec_, x0);
}

PAdicInt PAdicInt::truncated(uint32_t precision) const {
  if (precision >= prec_) return *this;
  PAdicInt out(p_, precision, 0);
  out.r_ = r_ % out.mod_;
  return out;
}

static void require_same_prime(const PAdicInt& a, const PAdicInt& b) {
  if (a.prime() != b.prime()) throw SpecMismatch("PAdicInt primes differ");
}

PAdicInt operator+(const PAdicInt& a, const PAdicInt& b) {
  require_same_prime(a, b);
  uint32_t prec = std::min(a.prec_, b.prec_);
  PAdicInt out(a.p_, prec, 0);
  out.r_ = (a.r_ % out.mod_ + b.r_ % out.mod_) % out.mod_;
  return out;
}

PAdicInt operator-(const PAdicInt& a, const PAdicInt& b) {
  require_same_prime(a, b);
  uint32_t prec = std::min(a.prec_, b.prec_);
  PAdicInt out(a.p_, prec, 0);
  out.r_ = (a.r_ % out.mod_ + out.mod_ - b.r_ % out.mod_) % out.mod_;
  return out;
}

PAdicInt operator*(const PAdicInt& a, const PAdicInt& b) {
  require_same_prime(a, b);
  uint32_t prec = std::min(a.prec_, b.prec_);
  PAdicInt out(a.p_, prec, 0);
  out.r_ = (a.r_ % out.mod_) * (b.r_ % out.mod_) % out.mod_;
  return out;
}

PAdicInt PAdicInt::operator-() const {
  PAdicInt out(p_, prec_, 0);
  out.r_ = r_ == 0 ? 0 : mod_ - r_;
  return out;
}

uint64_t binom_mod_p(const PAdicInt& b, uint64_t n) {
  if (n >= b.modulus())
    throw InsufficientPrecision("binom_mod_p: n >= p^N, digits of b unknown");
  uint64_t p = b.prime();
  const uint64_t* table = digit_binom_table(p);
  uint64_t br = b.residue(), nr = n;
  uint64_t acc = 1;
  while (nr != 0) {
    acc = acc * table[(br % p) * p + nr % p] % p;
    if (acc == 0) return 0;
    br /= p;
    nr /= p;
  }
  return acc;
}

uint64_t min_nonzero_binom(const PAdicInt& b) {
  Vp v = b.vp();
  if (!v.exact)
    throw InsufficientPrecision("min_nonzero_binom: b is zero at precision");
  return pow_u64(b.prime(), v.k);
}

MatrixZp::MatrixZp(uint64_t p, uint32_t precision, uint32_t dim)
    : p_(p), prec_(precision), mod_(pow_u64(p, precision)), dim_(dim),
      a_(static_cast<size_t>(dim) * dim, 0) {}

MatrixZp MatrixZp::identity(uint64_t p, uint32_t precision, uint32_t dim) {
  MatrixZp m(p, precision, dim);
  for (uint32_t i = 0; i < dim; ++i) m.a_[i * dim + i] = 1;
  return m;
}

void MatrixZp::set(uint32_t i, uint32_t j, int64_t value) {
  int64_t m = static_cast<int64_t>(mod_);
  int64_t r = value % m;
  if (r < 0) r += m;
  a_[i * dim_ + j] = static_cast<uint64_t>(r);
}

MatrixZp operator*(const MatrixZp& a, const MatrixZp& b) {
  if (a.p_ != b.p_ || a.prec_ != b.prec_ || a.dim_ != b.dim_)
    throw SpecMismatch("MatrixZp shape/ring mismatch");
  MatrixZp out(a.p_, a.prec_, a.dim_);
  uint32_t n = a.dim_;
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t k = 0; k < n; ++k) {
      uint64_t aik = a.a_[i * n + k];
      if (aik == 0) continue;
      for (uint32_t j = 0; j < n; ++j)
        out.a_[i * n + j] =
            (out.a_[i * n + j] + aik * b.a_[k * n + j]) % out.mod_;
    }
  return out;
}

MatrixZp operator-(const MatrixZp& a, const MatrixZp& b) {
  if (a.p_ != b.p_ || a.prec_ != b.prec_ || a.dim_ != b.dim_)
    throw SpecMismatch("MatrixZp shape/ring mismatch");
  MatrixZp out(a.p_, a.prec_, a.dim_);
  for (size_t i = 0; i < a.a_.size(); ++i)
    out.a_[i] = (a.a_[i] + out.mod_ - b.a_[i]) % out.mod_;
  return out;
}

MatrixZp MatrixZp::pow(uint64_t e) const {
  MatrixZp out = identity(p_, prec_, dim_);
  MatrixZp base = *this;
  while (e) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

bool MatrixZp::is_identity() const {
  return *this == identity(p_, prec_, dim_);
}

bool MatrixZp::invertible_mod_p() const {
  // Gaussian elimination over F_p.
  std::vector<uint64_t> m(a_);
  for (auto& x : m) x %= p_;
  uint32_t n = dim_;
  for (uint32_t col = 0; col < n; ++col) {
    uint32_t piv = col;
    while (piv < n && m[piv * n + col] == 0) ++piv;
    if (piv == n) return false;
    if (piv != col)
      for (uint32_t j = 0; j < n; ++j) std::swap(m[piv * n + j], m[col * n + j]);
    uint64_t inv = 1, base = m[col * n + col], e = p_ - 2;
    while (e) {
      if (e & 1) inv = inv * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    for (uint32_t i = col + 1; i < n; ++i) {
      uint64_t f = m[i * n + col] * inv % p_;
      if (f == 0) continue;
      for (uint32_t j = col; j < n; ++j)
        m[i * n + j] = (m[i * n + j] + (p_ - f) * m[col * n + j]) % p_;
    }
  }
  return true;
}

bool MatrixZp::is_unipotent_upper() const {
  for (uint32_t i = 0; i < dim_; ++i) {
    if (at(i, i) != 1) return false;
    for (uint32_t j = 0; j < i; ++j)
      if (at(i, j) != 0) return false;
  }
  return true;
}

MatrixZp MatrixZp::unipotent_inverse() const {
  if (!is_unipotent_upper()) throw Error("unipotent_inverse: matrix not unipotent");
  // (1 + E)^{-1} = sum (-E)^k, E nilpotent of index <= dim.
  MatrixZp e(p_, prec_, dim_);            // E = M - I
  for (uint32_t i = 0; i < dim_; ++i)
    for (uint32_t j = 0; j < dim_; ++j)
      e.a_[i * dim_ + j] = (a_[i * dim_ + j] + mod_ - (i == j ? 1 : 0)) % mod_;
  MatrixZp out = identity(p_, prec_, dim_);
  MatrixZp term = identity(p_, prec_, dim_);
  for (uint32_t k = 1; k < dim_; ++k) {
    term = term * e;
    // out += (-1)^k term
    for (size_t idx = 0; idx < out.a_.size(); ++idx) {
      uint64_t t = term.a_[idx] % mod_;
      out.a_[idx] = (k % 2 == 1) ? (out.a_[idx] + mod_ - t) % mod_
                                 : (out.a_[idx] + t) % mod_;
    }
  }
  return out;
}

}  // namespace pvg
