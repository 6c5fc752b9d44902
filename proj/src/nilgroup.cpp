#include "pvg/nilgroup.hpp"

#include <algorithm>
#include <sstream>

namespace pvg {

namespace {

using Word = std::vector<std::pair<uint32_t, uint64_t>>;

uint64_t reduce_i64(int64_t v, uint64_t mod) {
  int64_t m = static_cast<int64_t>(mod);
  int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<uint64_t>(r);
}

}  // namespace

// --- GroupSpec -------------------------------------------------------------

std::shared_ptr<const GroupSpec> GroupSpec::create(Data data) {
  auto spec = std::shared_ptr<GroupSpec>(new GroupSpec());
  spec->d_ = std::move(data);
  spec->validate();
  return spec;
}

bool GroupSpec::generators_commute(uint32_t i, uint32_t j) const {
  if (i == j) return true;
  if (i > j) std::swap(i, j);
  for (int64_t e : d_.comm[i][j])
    if (e != 0) return false;
  return true;
}

MatrixZp GroupSpec::rep_generator(uint32_t i, uint32_t precision) const {
  const IntMat& im = d_.rep[i];
  MatrixZp m(d_.p, precision, im.dim);
  for (uint32_t r = 0; r < im.dim; ++r)
    for (uint32_t c = 0; c < im.dim; ++c) m.set(r, c, im.at(r, c));
  return m;
}

uint32_t GroupSpec::quotient_rank(Subgroup which) const {
  switch (which) {
    case Subgroup::Trivial: return d_.rank;
    case Subgroup::L: return d_.head;
    case Subgroup::Z: return d_.central_start;
  }
  return d_.rank;
}

std::shared_ptr<const GroupSpec> GroupSpec::quotient_spec(Subgroup which) const {
  if (which == Subgroup::Trivial)
    return shared_from_this();
  uint32_t r = quotient_rank(which);
  // The quotient is presented on g_1..g_r; it must be free abelian, i.e.
  // every surviving commutator word must die in the quotient.
  for (uint32_t i = 0; i + 1 < r; ++i)
    for (uint32_t j = i + 1; j < r; ++j)
      for (uint32_t k = 0; k < d_.rank; ++k)
        if (d_.comm[i][j][k] != 0 && k < r)
          throw NonAbelianQuotient("quotient along chain member is not abelian");
  auto q = abelian(d_.p, r);
  return q;
}

void GroupSpec::validate() const {
  auto self = const_cast<GroupSpec*>(this);
  const uint32_t n = d_.rank;
  if (n < 1) throw SpecInvalid("rank must be >= 1");
  if (d_.p < 2) throw SpecInvalid("p must be a prime >= 2");
  for (uint64_t d = 2; d * d <= d_.p; ++d)
    if (d_.p % d == 0) throw SpecInvalid("p must be prime");
  if (self->d_.names.empty())
    for (uint32_t i = 0; i < n; ++i)
      self->d_.names.push_back("g" + std::to_string(i + 1));
  if (d_.names.size() != n) throw SpecInvalid("generator name count != rank");
  if (!(1 <= d_.head && d_.head <= d_.central_start && d_.central_start <= n))
    throw SpecInvalid("chain indices must satisfy 1 <= l <= m <= n");

  if (d_.comm.size() != n) throw SpecInvalid("comm table must be rank x rank");
  bool ab = true;
  for (uint32_t i = 0; i < n; ++i) {
    if (d_.comm[i].size() != n) throw SpecInvalid("comm table must be rank x rank");
    for (uint32_t j = 0; j < n; ++j) {
      const auto& w = d_.comm[i][j];
      if (w.size() != n) throw SpecInvalid("comm word length != rank");
      for (uint32_t k = 0; k < n; ++k) {
        if (w[k] == 0) continue;
        if (j <= i) throw SpecInvalid("comm table must be strictly upper");
        ab = false;
        if (k <= j) throw SpecInvalid("comm word must be supported above both generators");
        if (k < d_.head)
          throw SpecInvalid("commutators must land in L (indices past the head block)");
      }
    }
  }
  self->abelian_ = ab;

  // Central tail: generators m+1..n commute with everything.
  for (uint32_t j = d_.central_start; j < n; ++j)
    for (uint32_t i = 0; i < j; ++i)
      if (!generators_commute(i, j))
        throw SpecInvalid("generator past the central mark is not central");

  // Collection-friendliness: every letter of [g_i, g_j] commutes with both
  // g_i and g_j, which is what licenses the swap rule
  //   g_j^a g_i^b = g_i^b g_j^a [g_j, g_i]^{ab}.
  for (uint32_t i = 0; i + 1 < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) {
      for (uint32_t k = 0; k < n; ++k)
        if (d_.comm[i][j][k] != 0 &&
            (!generators_commute(i, k) || !generators_commute(j, k)))
          throw SpecInvalid("presentation is not collection-friendly");
      // Letters of one commutator word must commute pairwise, so powers of
      // the correction term stay linear in the exponent at any precision.
      for (uint32_t k1 = 0; k1 < n; ++k1)
        for (uint32_t k2 = k1 + 1; k2 < n; ++k2)
          if (d_.comm[i][j][k1] != 0 && d_.comm[i][j][k2] != 0 &&
              !generators_commute(k1, k2))
            throw SpecInvalid("presentation is not collection-friendly");
    }

  // Representation shape: one unipotent elementary matrix per generator.
  if (d_.rep.size() != n) throw SpecInvalid("one representation matrix per generator");
  uint32_t dim = d_.rep[0].dim;
  if (dim < 2) throw SpecInvalid("representation dimension must be >= 2");
  self->pos_.clear();
  for (uint32_t g = 0; g < n; ++g) {
    const IntMat& m = d_.rep[g];
    if (m.dim != dim || m.a.size() != static_cast<size_t>(dim) * dim)
      throw SpecInvalid("representation matrices must share one dimension");
    std::optional<std::pair<uint32_t, uint32_t>> pos;
    for (uint32_t r = 0; r < dim; ++r)
      for (uint32_t c = 0; c < dim; ++c) {
        int64_t v = m.at(r, c);
        if (r == c) {
          if (v != 1) throw SpecInvalid("representation matrices must be unipotent");
        } else if (v != 0) {
          if (c < r) throw SpecInvalid("representation matrices must be upper triangular");
          if (pos || v != 1)
            throw SpecInvalid("each generator matrix must be elementary (single 1 above the diagonal)");
          pos = {r, c};
        }
      }
    if (!pos) throw SpecInvalid("generator matrix equals the identity");
    self->pos_.push_back(*pos);
  }
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = a + 1; b < n; ++b)
      if (pos_[a] == pos_[b]) throw SpecInvalid("generator matrix positions must be distinct");

  // Structure constants against the matrix oracle, at a fixed validation
  // precision.
  uint32_t vprec = 1;
  while (vprec < 8 && pow_u64(d_.p, vprec + 1) <= (1ull << 31)) ++vprec;
  uint64_t mod = pow_u64(d_.p, vprec);
  for (uint32_t i = 0; i + 1 < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) {
      MatrixZp mi = rep_generator(i, vprec), mj = rep_generator(j, vprec);
      MatrixZp lhs = mi.unipotent_inverse() * mj.unipotent_inverse() * mi * mj;
      MatrixZp rhs = MatrixZp::identity(d_.p, vprec, dim);
      for (uint32_t k = 0; k < n; ++k) {
        int64_t e = d_.comm[i][j][k];
        if (e == 0) continue;
        rhs = rhs * rep_generator(k, vprec).pow(reduce_i64(e, mod));
      }
      if (lhs != rhs)
        throw SpecInvalid("structure constants disagree with the matrix representation");
    }

  // Coordinate chart round-trip through the representation.
  auto self_ptr = std::shared_ptr<const GroupSpec>(self->shared_from_this());
  Rng rng(0xC0FFEEull + d_.p);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<int64_t> coords(n);
    for (uint32_t i = 0; i < n; ++i)
      coords[i] = static_cast<int64_t>(rng.below(mod));
    GroupElement e = GroupElement::from_coords(self_ptr, vprec, coords);
    GroupElement back = element_from_matrix(self_ptr, vprec, rep_matrix(e));
    if (e != back) throw SpecInvalid("coordinate chart does not round-trip through the representation");
  }

  // Products collect consistently with the oracle.
  bool saved = oracle_checks_;
  oracle_checks_ = true;
  for (int trial = 0; trial < 8; ++trial) {
    GroupElement a = random_element(self_ptr, vprec, rng);
    GroupElement b = random_element(self_ptr, vprec, rng);
    collect_mul(a, b);
  }
  oracle_checks_ = saved;
}

std::shared_ptr<const GroupSpec> GroupSpec::heisenberg(uint64_t p) {
  Data d;
  d.name = "heisenberg";
  d.p = p;
  d.rank = 3;
  d.names = {"x", "y", "z"};
  d.head = 2;
  d.central_start = 2;
  d.comm.assign(3, std::vector<std::vector<int64_t>>(3, std::vector<int64_t>(3, 0)));
  d.comm[0][1][2] = 1;  // [x, y] = z
  auto elem = [](uint32_t dim, uint32_t r, uint32_t c) {
    IntMat m;
    m.dim = dim;
    m.a.assign(static_cast<size_t>(dim) * dim, 0);
    for (uint32_t i = 0; i < dim; ++i) m.a[i * dim + i] = 1;
    m.a[r * dim + c] = 1;
    return m;
  };
  d.rep = {elem(3, 0, 1), elem(3, 1, 2), elem(3, 0, 2)};
  return create(std::move(d));
}

std::shared_ptr<const GroupSpec> GroupSpec::unipotent3(uint64_t p) {
  return heisenberg(p);
}

std::shared_ptr<const GroupSpec> GroupSpec::unipotent4(uint64_t p) {
  Data d;
  d.name = "u4";
  d.p = p;
  d.rank = 6;
  d.names = {"x12", "x23", "x34", "x13", "x24", "x14"};
  d.head = 3;
  d.central_start = 5;
  d.comm.assign(6, std::vector<std::vector<int64_t>>(6, std::vector<int64_t>(6, 0)));
  d.comm[0][1][3] = 1;   // [x12, x23] = x13
  d.comm[1][2][4] = 1;   // [x23, x34] = x24
  d.comm[0][4][5] = 1;   // [x12, x24] = x14
  d.comm[2][3][5] = -1;  // [x34, x13] = x14^{-1}
  auto elem = [](uint32_t r, uint32_t c) {
    IntMat m;
    m.dim = 4;
    m.a.assign(16, 0);
    for (uint32_t i = 0; i < 4; ++i) m.a[i * 4 + i] = 1;
    m.a[r * 4 + c] = 1;
    return m;
  };
  d.rep = {elem(0, 1), elem(1, 2), elem(2, 3), elem(0, 2), elem(1, 3), elem(0, 3)};
  return create(std::move(d));
}

std::shared_ptr<const GroupSpec> GroupSpec::abelian(uint64_t p, uint32_t rank,
                                                    std::optional<uint32_t> l,
                                                    std::optional<uint32_t> m) {
  Data d;
  d.name = "abelian" + std::to_string(rank);
  d.p = p;
  d.rank = rank;
  for (uint32_t i = 0; i < rank; ++i) d.names.push_back("a" + std::to_string(i + 1));
  d.head = l.value_or(rank);
  d.central_start = m.value_or(d.head);
  d.comm.assign(rank, std::vector<std::vector<int64_t>>(rank, std::vector<int64_t>(rank, 0)));
  uint32_t dim = rank + 1;
  for (uint32_t i = 0; i < rank; ++i) {
    IntMat mt;
    mt.dim = dim;
    mt.a.assign(static_cast<size_t>(dim) * dim, 0);
    for (uint32_t k = 0; k < dim; ++k) mt.a[k * dim + k] = 1;
    mt.a[i * dim + (dim - 1)] = 1;
    d.rep.push_back(mt);
  }
  return create(std::move(d));
}

nlohmann::ordered_json GroupSpec::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = d_.name;
  j["p"] = d_.p;
  j["rank"] = d_.rank;
  j["names"] = d_.names;
  j["head"] = d_.head;
  j["central_start"] = d_.central_start;
  auto comms = nlohmann::ordered_json::array();
  for (uint32_t i = 0; i < d_.rank; ++i)
    for (uint32_t jx = i + 1; jx < d_.rank; ++jx)
      if (!generators_commute(i, jx)) {
        nlohmann::ordered_json c;
        c["i"] = i + 1;
        c["j"] = jx + 1;
        c["word"] = d_.comm[i][jx];
        comms.push_back(c);
      }
  j["commutators"] = comms;
  nlohmann::ordered_json rep;
  rep["dim"] = rep_dim();
  auto mats = nlohmann::ordered_json::array();
  for (const auto& m : d_.rep) mats.push_back(m.a);
  rep["matrices"] = mats;
  j["rep"] = rep;
  return j;
}

std::shared_ptr<const GroupSpec> GroupSpec::from_json(const nlohmann::json& j) {
  Data d;
  try {
    d.name = j.value("name", "custom");
    d.p = j.at("p").get<uint64_t>();
    d.rank = j.at("rank").get<uint32_t>();
    if (j.contains("names")) d.names = j.at("names").get<std::vector<std::string>>();
    d.head = j.at("head").get<uint32_t>();
    d.central_start = j.at("central_start").get<uint32_t>();
    d.comm.assign(d.rank, std::vector<std::vector<int64_t>>(
                              d.rank, std::vector<int64_t>(d.rank, 0)));
    for (const auto& c : j.at("commutators")) {
      uint32_t i = c.at("i").get<uint32_t>(), jx = c.at("j").get<uint32_t>();
      if (i < 1 || jx <= i || jx > d.rank)
        throw SpecInvalid("commutator indices out of range");
      d.comm[i - 1][jx - 1] = c.at("word").get<std::vector<int64_t>>();
    }
    uint32_t dim = j.at("rep").at("dim").get<uint32_t>();
    for (const auto& arr : j.at("rep").at("matrices")) {
      IntMat m;
      m.dim = dim;
      m.a = arr.get<std::vector<int64_t>>();
      d.rep.push_back(m);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("group spec document: ") + e.what());
  }
  return create(std::move(d));
}

// --- GroupElement ----------------------------------------------------------

GroupElement GroupElement::identity(GroupSpecPtr spec, uint32_t precision) {
  GroupElement e;
  e.spec_ = std::move(spec);
  e.prec_ = precision;
  e.coords_.assign(e.spec_->rank(), 0);
  pow_u64(e.spec_->p(), precision);  // range check
  return e;
}

GroupElement GroupElement::from_coords(GroupSpecPtr spec, uint32_t precision,
                                       const std::vector<int64_t>& coords) {
  GroupElement e = identity(std::move(spec), precision);
  if (coords.size() != e.spec_->rank()) throw SpecMismatch("coordinate count != rank");
  uint64_t mod = pow_u64(e.spec_->p(), precision);
  for (size_t i = 0; i < coords.size(); ++i) e.coords_[i] = reduce_i64(coords[i], mod);
  return e;
}

GroupElement GroupElement::generator(GroupSpecPtr spec, uint32_t precision,
                                     uint32_t index, int64_t exponent) {
  GroupElement e = identity(std::move(spec), precision);
  if (index >= e.spec_->rank()) throw SpecMismatch("generator index out of range");
  uint64_t mod = pow_u64(e.spec_->p(), precision);
  e.coords_[index] = reduce_i64(exponent, mod);
  return e;
}

bool GroupElement::is_identity_at_precision() const {
  for (uint64_t c : coords_)
    if (c != 0) return false;
  return true;
}

bool operator==(const GroupElement& a, const GroupElement& b) {
  return a.spec_ == b.spec_ && a.prec_ == b.prec_ && a.coords_ == b.coords_;
}

std::string GroupElement::str() const {
  std::ostringstream os;
  os << "(";
  uint64_t mod = pow_u64(spec_->p(), prec_);
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ", ";
    // Small negatives display as such; everything else as the residue.
    if (coords_[i] > mod - 1 - mod / 8 && coords_[i] != 0)
      os << "-" << (mod - coords_[i]);
    else
      os << coords_[i];
  }
  os << ")";
  return os.str();
}

// --- collection ------------------------------------------------------------

static void require_compatible(const GroupElement& a, const GroupElement& b) {
  if (a.spec() != b.spec()) throw SpecMismatch("elements live over different group specs");
  if (a.precision() != b.precision())
    throw SpecMismatch("elements carry different precisions");
}

GroupElement collect_word(const GroupSpecPtr& spec, uint32_t prec, Word w) {
  const uint64_t mod = pow_u64(spec->p(), prec);
  const uint32_t n = spec->rank();

  size_t k = 0;
  uint64_t guard = 0;
  while (true) {
    if (++guard > 50'000'000ull)
      throw Error("collection did not terminate (malformed presentation?)");
    // Drop dead entries at the cursor.
    while (k < w.size() && w[k].second == 0) w.erase(w.begin() + k);
    if (k + 1 >= w.size()) break;
    if (w[k + 1].second == 0) {
      w.erase(w.begin() + k + 1);
      continue;
    }
    uint32_t ia = w[k].first, ib = w[k + 1].first;
    if (ia < ib) {
      ++k;
      continue;
    }
    if (ia == ib) {
      w[k].second = (w[k].second + w[k + 1].second) % mod;
      w.erase(w.begin() + k + 1);
      if (w[k].second == 0) w.erase(w.begin() + k);
      if (k > 0) --k;
      continue;
    }
    // ia > ib: swap using g_j^a g_i^b = g_i^b g_j^a [g_j, g_i]^{ab}.
    uint64_t a = w[k].second, b = w[k + 1].second;
    std::swap(w[k], w[k + 1]);
    if (!spec->generators_commute(ib, ia)) {
      const auto& word_ij = spec->comm_word(ib, ia);  // [g_i, g_j], i < j
      // [g_j, g_i] = [g_i, g_j]^{-1}
      Word rev;
      for (uint32_t t = n; t-- > 0;)
        if (word_ij[t] != 0) rev.push_back({t, reduce_i64(-word_ij[t], mod)});
      GroupElement cij = collect_word(spec, prec, std::move(rev));
      GroupElement corr = zp_power(
          cij, PAdicInt(spec->p(), prec,
                        static_cast<int64_t>(a % mod * (b % mod) % mod)));
      size_t at = k + 2;
      for (uint32_t t = 0; t < n; ++t)
        if (corr.raw_coords()[t] != 0) {
          w.insert(w.begin() + at, {t, corr.raw_coords()[t]});
          ++at;
        }
    }
    if (k > 0) --k;
  }

  GroupElement out = GroupElement::identity(spec, prec);
  for (auto& [idx, e] : w) {
    if (out.coords_[idx] != 0) throw Error("collection produced a non-normal word");
    out.coords_[idx] = e;
  }
  return out;
}

GroupElement collect_mul(const GroupElement& a, const GroupElement& b) {
  require_compatible(a, b);
  const auto& spec = a.spec();
  Word w;
  for (uint32_t i = 0; i < spec->rank(); ++i)
    if (a.raw_coords()[i] != 0) w.push_back({i, a.raw_coords()[i]});
  for (uint32_t i = 0; i < spec->rank(); ++i)
    if (b.raw_coords()[i] != 0) w.push_back({i, b.raw_coords()[i]});
  GroupElement out = collect_word(spec, a.precision(), std::move(w));
  if (spec->oracle_checks()) {
    if (rep_matrix(out) != rep_matrix(a) * rep_matrix(b))
      throw Error("collection disagrees with the matrix representation");
  }
  return out;
}

static GroupElement power_nat(const GroupElement& a, uint64_t e) {
  GroupElement out = GroupElement::identity(a.spec(), a.precision());
  GroupElement base = a;
  while (e) {
    if (e & 1) out = collect_mul(out, base);
    if ((e >>= 1)) base = collect_mul(base, base);
  }
  return out;
}

GroupElement zp_power(const GroupElement& a, const PAdicInt& s) {
  if (s.prime() != a.spec()->p()) throw SpecMismatch("exponent prime differs");
  uint64_t p = a.spec()->p();
  uint64_t r = s.residue();
  // Digit-by-digit in base p: a^r = prod_k (a^{p^k})^{r_k}.
  GroupElement out = GroupElement::identity(a.spec(), a.precision());
  GroupElement pw = a;
  while (r) {
    uint64_t digit = r % p;
    if (digit) out = collect_mul(out, power_nat(pw, digit));
    r /= p;
    if (r) pw = power_nat(pw, p);
  }
  return out;
}

GroupElement zp_power(const GroupElement& a, int64_t s) {
  if (s >= 0) return power_nat(a, static_cast<uint64_t>(s));
  return power_nat(group_inverse(a), static_cast<uint64_t>(-s));
}

GroupElement group_inverse(const GroupElement& a) {
  const auto& spec = a.spec();
  uint64_t mod = pow_u64(spec->p(), a.precision());
  Word w;
  for (uint32_t i = spec->rank(); i-- > 0;)
    if (a.raw_coords()[i] != 0) w.push_back({i, mod - a.raw_coords()[i]});
  return collect_word(spec, a.precision(), std::move(w));
}

GroupElement commutator(const GroupElement& a, const GroupElement& b) {
  require_compatible(a, b);
  return collect_mul(collect_mul(group_inverse(a), group_inverse(b)),
                     collect_mul(a, b));
}

std::vector<PAdicInt> coords_mod(const GroupElement& a, Subgroup subgroup) {
  uint32_t r = a.spec()->quotient_rank(subgroup);
  std::vector<PAdicInt> out;
  for (uint32_t i = 0; i < r; ++i) out.push_back(a.coord(i));
  return out;
}

MatrixZp rep_matrix(const GroupElement& a) {
  const auto& spec = a.spec();
  MatrixZp m = MatrixZp::identity(spec->p(), a.precision(), spec->rep_dim());
  for (uint32_t i = 0; i < spec->rank(); ++i) {
    uint64_t e = a.raw_coords()[i];
    if (e) m = m * spec->rep_generator(i, a.precision()).pow(e);
  }
  return m;
}

GroupElement element_from_matrix(GroupSpecPtr spec, uint32_t precision,
                                 const MatrixZp& m) {
  if (m.dim() != spec->rep_dim() || m.prime() != spec->p())
    throw SpecMismatch("matrix shape does not match the representation");
  MatrixZp cur = m;
  std::vector<int64_t> coords(spec->rank(), 0);
  for (uint32_t i = 0; i < spec->rank(); ++i) {
    auto [r, c] = spec->rep_position(i);
    uint64_t lam = cur.at(r, c);
    coords[i] = static_cast<int64_t>(lam);
    MatrixZp inv = MatrixZp::identity(spec->p(), precision, m.dim());
    inv.set(r, c, -static_cast<int64_t>(lam));
    cur = inv * cur;
  }
  if (!cur.is_identity())
    throw SpecInvalid("matrix does not lie on the coordinate chart");
  return GroupElement::from_coords(std::move(spec), precision, coords);
}

GroupElement random_element(GroupSpecPtr spec, uint32_t precision, Rng& rng) {
  uint64_t mod = pow_u64(spec->p(), precision);
  std::vector<int64_t> coords(spec->rank());
  for (auto& c : coords) {
    uint64_t v = rng.below(mod);
    if (rng.below(4) == 0)  // boost the valuation now and then
      v = v * pow_u64(spec->p(), static_cast<uint32_t>(rng.below(precision))) % mod;
    c = static_cast<int64_t>(v);
  }
  return GroupElement::from_coords(std::move(spec), precision, coords);
}

}  // namespace pvg
