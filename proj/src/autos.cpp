#include "pvg/autos.hpp"

#include <algorithm>

namespace pvg {

namespace {

GroupElement word_image(const GroupSpecPtr& spec, uint32_t prec,
                        const std::vector<GroupElement>& images,
                        const std::vector<int64_t>& word) {
  GroupElement out = GroupElement::identity(spec, prec);
  for (uint32_t k = 0; k < word.size(); ++k)
    if (word[k] != 0) out = collect_mul(out, zp_power(images[k], word[k]));
  return out;
}

}  // namespace

Automorphism Automorphism::make(GroupSpecPtr spec, std::vector<GroupElement> images,
                                std::optional<uint32_t> declared_order) {
  const uint32_t n = spec->rank();
  if (images.size() != n) throw SpecMismatch("one image per generator required");
  for (const auto& g : images) {
    if (g.spec() != spec) throw SpecMismatch("image over a different spec");
    if (g.precision() != images[0].precision())
      throw SpecMismatch("images carry different precisions");
  }
  uint32_t prec = images[0].precision();

  // Homomorphism property on the defining relations.
  for (uint32_t i = 0; i + 1 < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j) {
      GroupElement lhs = commutator(images[i], images[j]);
      GroupElement rhs = word_image(spec, prec, images, spec->comm_word(i, j));
      if (lhs != rhs)
        throw RelationViolation("images break [" + spec->generator_name(i) + ", " +
                                spec->generator_name(j) + "]");
    }

  // Bijectivity at precision: induced coordinate map invertible mod p.
  MatrixZp jac(spec->p(), 1, n);
  for (uint32_t j = 0; j < n; ++j)
    for (uint32_t i = 0; i < n; ++i)
      jac.set(i, j, static_cast<int64_t>(images[j].raw_coords()[i]));
  if (!jac.invertible_mod_p())
    throw NotBijective("induced coordinate map is singular mod p");

  // sigma(L) <= L and sigma(Z) <= Z.
  for (uint32_t j = spec->head_count(); j < n; ++j)
    for (uint32_t i = 0; i < spec->head_count(); ++i)
      if (images[j].raw_coords()[i] != 0)
        throw SubgroupNotPreserved("image of an L-generator leaves L");
  for (uint32_t j = spec->central_start(); j < n; ++j)
    for (uint32_t i = 0; i < spec->central_start(); ++i)
      if (images[j].raw_coords()[i] != 0)
        throw SubgroupNotPreserved("image of a central generator leaves Z");

  Automorphism s;
  s.spec_ = std::move(spec);
  s.prec_ = prec;
  s.images_ = std::move(images);
  s.order_ = declared_order;

  if (declared_order) {
    if (*declared_order == 0) throw OrderMismatch("order must be positive");
    Automorphism acc = identity(s.spec_, prec);
    for (uint32_t k = 0; k < *declared_order; ++k) acc = compose(acc, s);
    if (!acc.is_identity_at_precision())
      throw OrderMismatch("sigma^" + std::to_string(*declared_order) +
                          " is not the identity at precision");
  }
  return s;
}

Automorphism Automorphism::identity(GroupSpecPtr spec, uint32_t precision) {
  std::vector<GroupElement> images;
  for (uint32_t i = 0; i < spec->rank(); ++i)
    images.push_back(GroupElement::generator(spec, precision, i));
  Automorphism s;
  s.spec_ = std::move(spec);
  s.prec_ = precision;
  s.images_ = std::move(images);
  s.order_ = 1;
  return s;
}

Automorphism Automorphism::inner(const GroupElement& h) {
  const auto& spec = h.spec();
  GroupElement hi = group_inverse(h);
  std::vector<GroupElement> images;
  for (uint32_t i = 0; i < spec->rank(); ++i) {
    GroupElement g = GroupElement::generator(spec, h.precision(), i);
    images.push_back(collect_mul(collect_mul(hi, g), h));
  }
  Automorphism s;
  s.spec_ = spec;
  s.prec_ = h.precision();
  s.images_ = std::move(images);
  return s;
}

Automorphism Automorphism::compose(const Automorphism& a, const Automorphism& b) {
  if (a.spec_ != b.spec_ || a.prec_ != b.prec_)
    throw SpecMismatch("automorphisms over different specs or precisions");
  std::vector<GroupElement> images;
  for (uint32_t i = 0; i < a.spec_->rank(); ++i) images.push_back(b.apply(a.images_[i]));
  Automorphism s;
  s.spec_ = a.spec_;
  s.prec_ = a.prec_;
  s.images_ = std::move(images);
  return s;
}

GroupElement Automorphism::apply(const GroupElement& x) const {
  if (x.spec() != spec_ || x.precision() != prec_)
    throw SpecMismatch("element does not match the automorphism");
  GroupElement out = GroupElement::identity(spec_, prec_);
  for (uint32_t i = 0; i < spec_->rank(); ++i) {
    if (x.raw_coords()[i] == 0) continue;
    out = collect_mul(out, zp_power(images_[i], x.coord(i)));
  }
  return out;
}

bool Automorphism::is_identity_at_precision() const {
  for (uint32_t i = 0; i < spec_->rank(); ++i)
    if (images_[i] != GroupElement::generator(spec_, prec_, i)) return false;
  return true;
}

nlohmann::ordered_json Automorphism::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = "automorphism";
  j["p"] = spec_->p();
  j["precision"] = prec_;
  auto im = nlohmann::ordered_json::array();
  for (const auto& g : images_) im.push_back(g.raw_coords());
  j["images"] = im;
  if (order_) j["order"] = *order_;
  return j;
}

Automorphism Automorphism::from_json(GroupSpecPtr spec, const nlohmann::json& j) {
  try {
    uint32_t prec = j.at("precision").get<uint32_t>();
    std::vector<GroupElement> images;
    for (const auto& arr : j.at("images"))
      images.push_back(GroupElement::from_coords(spec, prec,
                                                 arr.get<std::vector<int64_t>>()));
    std::optional<uint32_t> order;
    if (j.contains("order")) order = j.at("order").get<uint32_t>();
    return make(spec, std::move(images), order);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("automorphism document: ") + e.what());
  }
}

AlgebraElement apply_to_algebra(const Automorphism& sigma, const AlgebraElement& x) {
  AlgebraElement out = AlgebraElement::zero(x.spec(), x.precision(), x.field());
  for (const auto& [coords, c] : x.terms()) {
    GroupElement g = GroupElement::from_coords(
        x.spec(), x.precision(), std::vector<int64_t>(coords.begin(), coords.end()));
    out.add_term(sigma.apply(g), c);
  }
  return out;
}

MatrixZp induced_matrix(const Automorphism& sigma) {
  const auto& spec = sigma.spec();
  uint32_t l = spec->head_count();
  MatrixZp m(spec->p(), sigma.precision(), l);
  for (uint32_t j = 0; j < l; ++j) {
    auto col = coords_mod(sigma.image(j), Subgroup::L);
    for (uint32_t i = 0; i < l; ++i)
      m.set(i, j, static_cast<int64_t>(col[i].residue()));
  }
  return m;
}

bool in_gamma1(const MatrixZp& m) {
  MatrixZp d = m - MatrixZp::identity(m.prime(), m.precision(), m.dim());
  for (uint32_t i = 0; i < m.dim(); ++i)
    for (uint32_t j = 0; j < m.dim(); ++j)
      if (d.at(i, j) % m.prime() != 0) return false;
  return true;
}

PValuation act(const Automorphism& sigma, const PValuation& omega) {
  if (sigma.spec() != omega.spec())
    throw SpecMismatch("automorphism and valuation specs differ");
  Automorphism s = sigma;
  return act_by(omega, [s](const GroupElement& x) { return s.apply(x); });
}

PValuation orbit_inf(const PValuation& omega, const std::vector<Automorphism>& family) {
  std::vector<std::function<GroupElement(const GroupElement&)>> maps;
  for (const auto& sigma : family) {
    if (sigma.spec() != omega.spec())
      throw SpecMismatch("automorphism and valuation specs differ");
    Automorphism s = sigma;
    maps.push_back([s](const GroupElement& x) { return s.apply(x); });
  }
  return orbit_inf_by(omega, std::move(maps));
}

Condition11Report check_condition_1_1(const Automorphism& sigma, const PValuation& omega,
                                      const std::vector<GroupElement>& elements) {
  std::vector<GroupElement> xs = elements;
  if (xs.empty())
    for (uint32_t i = 0; i < sigma.spec()->head_count(); ++i)
      xs.push_back(GroupElement::generator(sigma.spec(), sigma.precision(), i));

  Condition11Report rep;
  for (const auto& x : xs) {
    ValueBound moved = omega.eval(collect_mul(sigma.apply(x), group_inverse(x)));
    ValueBound base = omega.eval(x);
    bool pass = definitely_gt(moved, base);
    rep.entries.push_back({x, moved, base, pass});
    rep.all_pass = rep.all_pass && pass;
  }
  return rep;
}

FIncreaseReport check_f_increase(const Automorphism& sigma, const FContext& ctx,
                                 std::optional<uint32_t> upto) {
  const auto& spec = sigma.spec();
  uint32_t count = upto.value_or(spec->head_count());
  auto family = ctx.family.empty() ? default_central_family(ctx.omega) : ctx.family;
  auto field = ctx.field ? ctx.field : FieldSpec::prime_field(spec->p());

  FIncreaseReport rep;
  for (uint32_t i = 0; i < count; ++i) {
    AlgebraElement bi = AlgebraElement::b_element(spec, sigma.precision(), i, field);
    AlgebraElement diff = apply_to_algebra(sigma, bi) - bi;
    ValueBound base = f_value(bi, family, ctx.omega, ctx.cutoff);
    ValueBound moved = f_value(diff, family, ctx.omega, ctx.cutoff);

    bool increase = false, conclusive = true;
    if (!base.is_exact()) {
      conclusive = false;  // base beyond the cutoff: nothing to compare against
    } else if (moved.is_exact()) {
      increase = moved.value > base.value;
    } else {
      // moved is a truncation flag; strict increase needs headroom below
      // the cutoff on the base value.
      if (moved.value >= base.value + ValueQ(1) &&
          base.value + ValueQ(1) <= ctx.cutoff)
        increase = true;
      else if (definitely_gt(moved, base))
        increase = true;
      else
        conclusive = false;
    }
    rep.entries.push_back({i, moved, base, increase, conclusive});
    rep.conclusive = rep.conclusive && conclusive;
    rep.all_increase = rep.all_increase && increase && conclusive;
  }
  return rep;
}

// --- random generation -----------------------------------------------------

namespace {

// Full image family for the Heisenberg presentation: any pair (A, B) with
// invertible head block extends uniquely via z -> [A, B].
Automorphism random_heisenberg_auto(const GroupSpecPtr& spec, uint32_t prec, Rng& rng,
                                    bool head_congruent) {
  uint64_t p = spec->p();
  uint64_t mod = pow_u64(p, prec);
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto coords = [&](bool diag_one, bool off_zero) {
      std::vector<int64_t> v(3);
      v[0] = static_cast<int64_t>(diag_one ? (1 + p * rng.below(mod / p)) % mod
                                           : rng.below(mod));
      v[1] = static_cast<int64_t>(off_zero ? (p * rng.below(mod / p)) % mod
                                           : rng.below(mod));
      v[2] = static_cast<int64_t>(rng.below(mod));
      return v;
    };
    std::vector<int64_t> ca = coords(head_congruent, head_congruent);
    std::vector<int64_t> cb = coords(head_congruent, head_congruent);
    std::swap(cb[0], cb[1]);  // B sits near y when congruent
    GroupElement A = GroupElement::from_coords(spec, prec, ca);
    GroupElement B = GroupElement::from_coords(spec, prec, cb);
    uint64_t det = ((ca[0] % static_cast<int64_t>(p)) * (cb[1] % static_cast<int64_t>(p)) %
                        static_cast<int64_t>(p) +
                    p -
                    (ca[1] % static_cast<int64_t>(p)) * (cb[0] % static_cast<int64_t>(p)) %
                        static_cast<int64_t>(p)) %
                   p;
    if (det == 0) continue;
    std::vector<GroupElement> images{A, B, commutator(A, B)};
    return Automorphism::make(spec, std::move(images));
  }
  throw Error("could not sample an invertible head block");
}

// Conjugation by a diagonal torus element of the ambient unipotent group:
// each elementary generator rescales by a unit.
Automorphism torus_rescale(const GroupSpecPtr& spec, uint32_t prec, Rng& rng,
                           bool congruent_mod_p) {
  uint64_t p = spec->p();
  uint64_t mod = pow_u64(p, prec);
  uint32_t dim = spec->rep_dim();
  std::vector<PAdicInt> d;
  for (uint32_t i = 0; i < dim; ++i) {
    uint64_t u;
    do {
      u = rng.below(mod);
    } while (u % p == 0);
    if (congruent_mod_p) u = (1 + p * rng.below(mod / p)) % mod;
    d.emplace_back(p, prec, static_cast<int64_t>(u));
  }
  std::vector<GroupElement> images;
  for (uint32_t k = 0; k < spec->rank(); ++k) {
    auto [r, c] = spec->rep_position(k);
    PAdicInt u = d[r] * d[c].unit_inverse();
    images.push_back(zp_power(GroupElement::generator(spec, prec, k), u));
  }
  return Automorphism::make(spec, std::move(images));
}

Automorphism random_abelian_auto(const GroupSpecPtr& spec, uint32_t prec, Rng& rng) {
  uint64_t mod = pow_u64(spec->p(), prec);
  uint32_t n = spec->rank();
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<GroupElement> images;
    MatrixZp m(spec->p(), 1, n);
    std::vector<std::vector<int64_t>> cols(n, std::vector<int64_t>(n));
    for (uint32_t j = 0; j < n; ++j)
      for (uint32_t i = 0; i < n; ++i) {
        cols[j][i] = static_cast<int64_t>(rng.below(mod));
        m.set(i, j, cols[j][i]);
      }
    if (!m.invertible_mod_p()) continue;
    for (uint32_t j = 0; j < n; ++j)
      images.push_back(GroupElement::from_coords(spec, prec, cols[j]));
    return Automorphism::make(spec, std::move(images));
  }
  throw Error("could not sample an invertible coordinate matrix");
}

}  // namespace

Automorphism random_automorphism(GroupSpecPtr spec, uint32_t precision, Rng& rng,
                                 bool head_congruent) {
  if (spec->is_abelian() && !head_congruent) return random_abelian_auto(spec, precision, rng);
  Automorphism s = spec->name() == "heisenberg"
                       ? random_heisenberg_auto(spec, precision, rng, head_congruent)
                       : torus_rescale(spec, precision, rng, head_congruent);
  // Mix in an inner twist half the time; it never disturbs the induced
  // matrix mod p beyond what conjugation allows.
  if (rng.coin())
    s = Automorphism::compose(s, Automorphism::inner(random_element(spec, precision, rng)));
  return s;
}

std::vector<Automorphism> finite_order_pool(GroupSpecPtr spec, uint32_t precision,
                                            Rng& rng, uint32_t inner_twists) {
  std::vector<Automorphism> pool;
  pool.push_back(Automorphism::identity(spec, precision));

  auto try_push = [&](std::vector<int64_t> imx, std::vector<int64_t> imy,
                      std::vector<int64_t> imz, uint32_t order) {
    try {
      std::vector<GroupElement> images{
          GroupElement::from_coords(spec, precision, imx),
          GroupElement::from_coords(spec, precision, imy),
          GroupElement::from_coords(spec, precision, imz)};
      pool.push_back(Automorphism::make(spec, std::move(images), order));
      return true;
    } catch (const Error&) {
      return false;
    }
  };

  if (spec->name() == "heisenberg") {
    // Inversion on the head, identity on the centre.
    try_push({-1, 0, 0}, {0, -1, 0}, {0, 0, 1}, 2);
    // Order-3 rotation with head matrix [[0,-1],[1,-1]]; central
    // adjustments searched so the cube closes exactly.
    uint64_t p = spec->p();
    uint64_t range = std::min<uint64_t>(pow_u64(p, precision), p * p * p);
    bool found = false;
    for (uint64_t c1 = 0; c1 < range && !found; ++c1)
      for (uint64_t c2 = 0; c2 < range && !found; ++c2)
        found = try_push({0, 1, static_cast<int64_t>(c1)},
                         {-1, -1, static_cast<int64_t>(c2)}, {0, 0, 1}, 3);
  } else if (spec->name() == "u4") {
    // Conjugation by diag(1,-1,1,-1): inverts the superdiagonal generators.
    std::vector<GroupElement> images;
    std::vector<int64_t> signs = {-1, -1, -1, 1, 1, -1};
    for (uint32_t k = 0; k < spec->rank(); ++k)
      images.push_back(zp_power(GroupElement::generator(spec, precision, k), signs[k]));
    pool.push_back(Automorphism::make(spec, std::move(images), 2));
  }

  // Inner twists of involutions keep finite order: (sigma inner(h))^2 is
  // conjugation by sigma(h) h, a central element when sigma inverts H/L.
  size_t base_count = pool.size();
  for (uint32_t t = 0; t < inner_twists; ++t) {
    for (size_t i = 1; i < base_count; ++i) {
      if (!pool[i].declared_order() || *pool[i].declared_order() != 2) continue;
      GroupElement h = random_element(spec, precision, rng);
      try {
        Automorphism twisted = Automorphism::compose(pool[i], Automorphism::inner(h));
        std::vector<GroupElement> images;
        for (uint32_t k = 0; k < spec->rank(); ++k) images.push_back(twisted.image(k));
        pool.push_back(Automorphism::make(spec, std::move(images), 2));
      } catch (const OrderMismatch&) {
        // Twist did not close; skip it.
      }
    }
  }
  return pool;
}

}  // namespace pvg
