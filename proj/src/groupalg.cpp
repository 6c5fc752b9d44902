#include "pvg/groupalg.hpp"

#include <algorithm>
#include <sstream>

namespace pvg {

namespace {

void require_compatible(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.spec() != b.spec()) throw SpecMismatch("algebra elements over different specs");
  if (a.precision() != b.precision())
    throw SpecMismatch("algebra elements carry different precisions");
  if (!a.field()->same(*b.field()))
    throw SpecMismatch("algebra elements over different coefficient fields");
}

const std::vector<ValueQ>& certified_weights(const PValuation& omega) {
  if (!omega.certificate())
    throw NoCertificate("b-adic expansion needs a diagonal valuation");
  return omega.certificate()->values;
}

// All exponents k with C(lambda, k) nonzero mod p, where lambda is a
// residue: digit-wise k <= lambda (Kummer), enumerated without scanning.
std::vector<uint64_t> nonzero_binomial_exponents(uint64_t lambda, uint64_t p) {
  std::vector<uint64_t> out{0};
  uint64_t place = 1;
  while (lambda) {
    uint64_t digit = lambda % p;
    size_t sz = out.size();
    for (uint64_t d = 1; d <= digit; ++d)
      for (size_t i = 0; i < sz; ++i) out.push_back(out[i] + d * place);
    lambda /= p;
    place *= p;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// --- AlgebraElement --------------------------------------------------------

AlgebraElement AlgebraElement::zero(GroupSpecPtr spec, uint32_t precision,
                                    std::shared_ptr<const FieldSpec> field) {
  AlgebraElement x;
  x.spec_ = std::move(spec);
  x.prec_ = precision;
  x.field_ = field ? std::move(field) : FieldSpec::prime_field(x.spec_->p());
  if (x.field_->p() != x.spec_->p())
    throw SpecMismatch("coefficient field characteristic differs from the group prime");
  return x;
}

AlgebraElement AlgebraElement::one(GroupSpecPtr spec, uint32_t precision,
                                   std::shared_ptr<const FieldSpec> field) {
  AlgebraElement x = zero(std::move(spec), precision, std::move(field));
  x.add_term(GroupElement::identity(x.spec_, precision), x.field_->one());
  return x;
}

AlgebraElement AlgebraElement::from_group(const GroupElement& g,
                                          std::shared_ptr<const FieldSpec> field) {
  AlgebraElement x = zero(g.spec(), g.precision(), std::move(field));
  x.add_term(g, x.field_->one());
  return x;
}

AlgebraElement AlgebraElement::b_element(GroupSpecPtr spec, uint32_t precision,
                                         uint32_t i,
                                         std::shared_ptr<const FieldSpec> field) {
  AlgebraElement x = zero(spec, precision, std::move(field));
  x.add_term(GroupElement::generator(spec, precision, i), x.field_->one());
  x.add_term(GroupElement::identity(spec, precision), x.field_->from_int(-1));
  return x;
}

AlgebraElement& AlgebraElement::add_term(const GroupElement& g, const Fq& c) {
  if (g.spec() != spec_ || g.precision() != prec_)
    throw SpecMismatch("group term does not match the algebra element");
  if (field_->is_zero(c)) return *this;
  auto it = terms_.find(g.raw_coords());
  if (it == terms_.end()) {
    terms_.emplace(g.raw_coords(), c);
  } else {
    it->second = field_->add(it->second, c);
    if (field_->is_zero(it->second)) terms_.erase(it);
  }
  return *this;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_compatible(a, b);
  AlgebraElement out = a;
  for (const auto& [coords, c] : b.terms_) {
    auto it = out.terms_.find(coords);
    if (it == out.terms_.end()) {
      out.terms_.emplace(coords, c);
    } else {
      it->second = out.field_->add(it->second, c);
      if (out.field_->is_zero(it->second)) out.terms_.erase(it);
    }
  }
  return out;
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out = *this;
  for (auto& [coords, c] : out.terms_) c = field_->neg(c);
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return a + (-b);
}

AlgebraElement AlgebraElement::scaled(const Fq& c) const {
  AlgebraElement out = zero(spec_, prec_, field_);
  if (field_->is_zero(c)) return out;
  for (const auto& [coords, v] : terms_) {
    Fq cv = field_->mul(v, c);
    if (!field_->is_zero(cv)) out.terms_.emplace(coords, cv);
  }
  return out;
}

AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_compatible(a, b);
  AlgebraElement out = AlgebraElement::zero(a.spec(), a.precision(), a.field());
  for (const auto& [ca, va] : a.terms()) {
    GroupElement ga = GroupElement::from_coords(
        a.spec(), a.precision(), std::vector<int64_t>(ca.begin(), ca.end()));
    for (const auto& [cb, vb] : b.terms()) {
      GroupElement gb = GroupElement::from_coords(
          b.spec(), b.precision(), std::vector<int64_t>(cb.begin(), cb.end()));
      out.add_term(collect_mul(ga, gb), a.field()->mul(va, vb));
    }
  }
  return out;
}

AlgebraElement AlgebraElement::pow_nat(uint64_t e) const {
  AlgebraElement out = one(spec_, prec_, field_);
  AlgebraElement base = *this;
  while (e) {
    if (e & 1) out = alg_mul(out, base);
    if ((e >>= 1)) base = alg_mul(base, base);
  }
  return out;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  return a.spec_ == b.spec_ && a.prec_ == b.prec_ && a.field_->same(*b.field_) &&
         a.terms_ == b.terms_;
}

nlohmann::ordered_json AlgebraElement::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = "algebra-element";
  j["p"] = spec_->p();
  j["precision"] = prec_;
  j["field"] = {{"p", field_->p()}, {"irred", field_->irreducible()}};
  auto terms = nlohmann::ordered_json::array();
  for (const auto& [coords, c] : terms_)
    terms.push_back({{"coords", coords}, {"coeff", c}});
  j["terms"] = terms;
  return j;
}

AlgebraElement AlgebraElement::from_json(GroupSpecPtr spec, const nlohmann::json& j) {
  try {
    if (j.at("p").get<uint64_t>() != spec->p())
      throw ConfigInvalid("algebra element prime differs from the spec");
    auto field = std::make_shared<const FieldSpec>(
        j.at("field").at("p").get<uint64_t>(),
        j.at("field").at("irred").get<std::vector<uint32_t>>());
    AlgebraElement x = zero(spec, j.at("precision").get<uint32_t>(), field);
    for (const auto& t : j.at("terms")) {
      auto coords = t.at("coords").get<std::vector<int64_t>>();
      Fq c = t.at("coeff").get<Fq>();
      x.add_term(GroupElement::from_coords(spec, x.precision(), coords), c);
    }
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("algebra element document: ") + e.what());
  }
}

std::string AlgebraElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [coords, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (!(c.size() >= 1 && c[0] == 1 &&
          std::all_of(c.begin() + 1, c.end(), [](uint32_t v) { return v == 0; }))) {
      os << c[0];
      for (size_t i = 1; i < c.size(); ++i) os << "," << c[i];
      os << "*";
    }
    GroupElement g = GroupElement::from_coords(
        spec_, prec_, std::vector<int64_t>(coords.begin(), coords.end()));
    os << "g" << g.str();
  }
  return os.str();
}

// --- BSeries ---------------------------------------------------------------

BSeries::BSeries(GroupSpecPtr spec, std::shared_ptr<const FieldSpec> field,
                 uint32_t precision, std::vector<ValueQ> weights, ValueQ cutoff)
    : spec_(std::move(spec)), field_(std::move(field)), prec_(precision),
      weights_(std::move(weights)), cutoff_(cutoff) {
  if (weights_.size() != spec_->rank())
    throw SpecMismatch("one weight per generator required");
  for (const auto& w : weights_)
    if (!(ValueQ(0) < w)) throw InvalidT("weights must be positive");
}

ValueQ BSeries::weight_of(const std::vector<uint32_t>& alpha) const {
  ValueQ w(0);
  for (size_t i = 0; i < alpha.size(); ++i) w = w + weights_[i].scaled(alpha[i]);
  return w;
}

void BSeries::accumulate(const std::vector<uint32_t>& alpha, const Fq& c) {
  if (field_->is_zero(c)) return;
  if (weight_of(alpha) > cutoff_) return;
  auto it = monos_.find(alpha);
  if (it == monos_.end()) {
    monos_.emplace(alpha, c);
  } else {
    it->second = field_->add(it->second, c);
    if (field_->is_zero(it->second)) monos_.erase(it);
  }
}

bool operator==(const BSeries& a, const BSeries& b) {
  return a.spec_ == b.spec_ && a.prec_ == b.prec_ && a.field_->same(*b.field_) &&
         a.weights_ == b.weights_ && a.cutoff_ == b.cutoff_ && a.monos_ == b.monos_;
}

nlohmann::ordered_json BSeries::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = "b-series";
  j["p"] = spec_->p();
  j["precision"] = prec_;
  j["field"] = {{"p", field_->p()}, {"irred", field_->irreducible()}};
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : weights_) ws.push_back(w.str());
  j["weights"] = ws;
  j["cutoff"] = cutoff_.str();
  auto ms = nlohmann::ordered_json::array();
  for (const auto& [alpha, c] : monos_)
    ms.push_back({{"alpha", alpha}, {"coeff", c}});
  j["monomials"] = ms;
  return j;
}

static ValueQ valueq_from_str(const std::string& s) {
  if (s == "inf") return ValueQ::infinity();
  auto slash = s.find('/');
  if (slash == std::string::npos) return ValueQ(std::stoll(s));
  return ValueQ::frac(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

BSeries BSeries::from_json(GroupSpecPtr spec, const nlohmann::json& j) {
  try {
    if (j.at("p").get<uint64_t>() != spec->p())
      throw ConfigInvalid("series prime differs from the spec");
    auto field = std::make_shared<const FieldSpec>(
        j.at("field").at("p").get<uint64_t>(),
        j.at("field").at("irred").get<std::vector<uint32_t>>());
    std::vector<ValueQ> weights;
    for (const auto& w : j.at("weights"))
      weights.push_back(valueq_from_str(w.get<std::string>()));
    BSeries s(spec, field, j.at("precision").get<uint32_t>(), weights,
              valueq_from_str(j.at("cutoff").get<std::string>()));
    for (const auto& m : j.at("monomials"))
      s.accumulate(m.at("alpha").get<std::vector<uint32_t>>(), m.at("coeff").get<Fq>());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("b-series document: ") + e.what());
  }
}

std::string BSeries::str() const {
  if (monos_.empty()) return "0";
  // Sorted by weight, then lexicographically; b_i is named after g_i.
  std::vector<const Monomials::value_type*> items;
  for (const auto& kv : monos_) items.push_back(&kv);
  std::sort(items.begin(), items.end(), [&](auto* a, auto* b) {
    ValueQ wa = weight_of(a->first), wb = weight_of(b->first);
    if (wa != wb) return wa < wb;
    return a->first < b->first;
  });
  std::ostringstream os;
  bool first = true;
  for (auto* kv : items) {
    if (!first) os << " + ";
    first = false;
    const Fq& c = kv->second;
    bool trivial_coeff =
        c.size() >= 1 && c[0] == 1 &&
        std::all_of(c.begin() + 1, c.end(), [](uint32_t v) { return v == 0; });
    bool any = false;
    if (!trivial_coeff) {
      os << c[0];
      for (size_t i = 1; i < c.size(); ++i) os << "," << c[i];
      any = true;
    }
    for (uint32_t i = 0; i < kv->first.size(); ++i) {
      uint32_t e = kv->first[i];
      if (e == 0) continue;
      if (any) os << "*";
      any = true;
      std::string nm = spec_->generator_name(i);
      if (nm.size() == 1)
        nm[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(nm[0])));
      else
        nm = "B_" + nm;
      os << nm;
      if (e > 1) os << "^" << e;
    }
    if (!any) os << "1";
  }
  return os.str();
}

// --- expansion and w -------------------------------------------------------

BSeries expand_b_form(const AlgebraElement& x, const PValuation& omega,
                      const ValueQ& cutoff) {
  if (omega.spec() != x.spec()) throw SpecMismatch("valuation spec differs");
  const auto& t = certified_weights(omega);
  const uint32_t n = x.spec()->rank();
  BSeries out(x.spec(), x.field(), x.precision(), t, cutoff);
  const FieldSpec& k = *x.field();

  std::vector<uint32_t> alpha(n, 0);
  // DFS over exponent choices per coordinate within the weight budget.
  std::function<void(const std::vector<uint64_t>&, uint32_t, ValueQ, const Fq&)> rec =
      [&](const std::vector<uint64_t>& coords, uint32_t i, ValueQ used, const Fq& acc) {
        if (i == n) {
          out.accumulate(alpha, acc);
          return;
        }
        PAdicInt lam(x.spec()->p(), x.precision(), static_cast<int64_t>(coords[i]));
        for (uint64_t e = 0;; ++e) {
          ValueQ w = used + t[i].scaled(e);
          if (w > cutoff) break;
          uint64_t c = binom_mod_p(lam, e);
          if (c != 0) {
            alpha[i] = static_cast<uint32_t>(e);
            rec(coords, i + 1, w, k.mul(acc, k.from_int(static_cast<int64_t>(c))));
            alpha[i] = 0;
          }
        }
      };

  for (const auto& [coords, coeff] : x.terms()) rec(coords, 0, ValueQ(0), coeff);
  return out;
}

ValueBound w_value(const AlgebraElement& x, const PValuation& omega,
                   const ValueQ& cutoff) {
  BSeries s = expand_b_form(x, omega, cutoff);
  if (s.empty()) return ValueBound::greater(cutoff);
  std::optional<ValueQ> best;
  for (const auto& [alpha, c] : s.monomials()) {
    ValueQ w = s.weight_of(alpha);
    if (!best || w < *best) best = w;
  }
  return ValueBound::exact(*best);
}

namespace {

// The ordered monomial b^alpha as an exact algebra element.
AlgebraElement b_monomial_element(const GroupSpecPtr& spec, uint32_t prec,
                                  const std::shared_ptr<const FieldSpec>& field,
                                  const std::vector<uint32_t>& alpha) {
  AlgebraElement out = AlgebraElement::one(spec, prec, field);
  for (uint32_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    AlgebraElement bi = AlgebraElement::b_element(spec, prec, i, field);
    out = alg_mul(out, bi.pow_nat(alpha[i]));
  }
  return out;
}

}  // namespace

BSeries bseries_mul(const BSeries& a, const BSeries& b) {
  if (a.spec() != b.spec() || a.precision() != b.precision() ||
      !a.field()->same(*b.field()) || a.weights() != b.weights() ||
      a.cutoff() != b.cutoff())
    throw SpecMismatch("series contexts differ");
  BSeries out(a.spec(), a.field(), a.precision(), a.weights(), a.cutoff());
  const FieldSpec& k = *a.field();

  std::map<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>, BSeries> memo;
  PValuation omega = PValuation::diagonal(a.spec(), a.weights());

  for (const auto& [alpha, ca] : a.monomials()) {
    for (const auto& [beta, cb] : b.monomials()) {
      if (a.weight_of(alpha) + b.weight_of(beta) > a.cutoff()) continue;
      // Ordered concatenation is already normal when alpha's support ends
      // no later than beta's begins.
      int last_a = -1, first_b = static_cast<int>(beta.size());
      for (int i = 0; i < static_cast<int>(alpha.size()); ++i)
        if (alpha[i]) last_a = i;
      for (int i = static_cast<int>(beta.size()); i-- > 0;)
        if (beta[i]) first_b = i;
      Fq c = k.mul(ca, cb);
      if (last_a <= first_b) {
        std::vector<uint32_t> merged(alpha);
        for (size_t i = 0; i < beta.size(); ++i) merged[i] += beta[i];
        out.accumulate(merged, c);
        continue;
      }
      auto key = std::make_pair(alpha, beta);
      auto it = memo.find(key);
      if (it == memo.end()) {
        AlgebraElement prod =
            alg_mul(b_monomial_element(a.spec(), a.precision(), a.field(), alpha),
                    b_monomial_element(a.spec(), a.precision(), a.field(), beta));
        it = memo.emplace(key, expand_b_form(prod, omega, a.cutoff())).first;
      }
      for (const auto& [gamma, cg] : it->second.monomials())
        out.accumulate(gamma, k.mul(c, cg));
    }
  }
  return out;
}

// --- standard form ---------------------------------------------------------

namespace {

StandardForm standard_form_impl(const AlgebraElement& x,
                                const std::vector<ValueQ>* head_weights,
                                const ValueQ* cutoff) {
  const auto& spec = x.spec();
  const uint32_t n = spec->rank();
  const uint32_t m = spec->central_start();
  const FieldSpec& k = *x.field();
  StandardForm sf;
  sf.noncentral_rank = m;

  std::vector<uint32_t> gamma(m, 0);
  std::function<void(const std::vector<uint64_t>&, const GroupElement&, uint32_t,
                     ValueQ, const Fq&)>
      rec = [&](const std::vector<uint64_t>& coords, const GroupElement& z, uint32_t i,
                ValueQ used, const Fq& acc) {
        if (i == m) {
          auto it = sf.entries.find(gamma);
          if (it == sf.entries.end())
            it = sf.entries
                     .emplace(gamma,
                              AlgebraElement::zero(spec, x.precision(), x.field()))
                     .first;
          it->second.add_term(z, acc);
          return;
        }
        PAdicInt lam(spec->p(), x.precision(), static_cast<int64_t>(coords[i]));
        if (cutoff) {
          for (uint64_t e = 0;; ++e) {
            ValueQ w = used + (*head_weights)[i].scaled(e);
            if (w > *cutoff) break;
            uint64_t c = binom_mod_p(lam, e);
            if (c == 0) continue;
            gamma[i] = static_cast<uint32_t>(e);
            rec(coords, z, i + 1, w, k.mul(acc, k.from_int(static_cast<int64_t>(c))));
            gamma[i] = 0;
          }
        } else {
          for (uint64_t e : nonzero_binomial_exponents(coords[i], spec->p())) {
            uint64_t c = binom_mod_p(lam, e);
            gamma[i] = static_cast<uint32_t>(e);
            rec(coords, z, i + 1, used, k.mul(acc, k.from_int(static_cast<int64_t>(c))));
            gamma[i] = 0;
          }
        }
      };

  for (const auto& [coords, coeff] : x.terms()) {
    // Central cofactor: the tail part of the normal form.
    std::vector<int64_t> zc(n, 0);
    for (uint32_t i = m; i < n; ++i) zc[i] = static_cast<int64_t>(coords[i]);
    GroupElement z = GroupElement::from_coords(spec, x.precision(), zc);
    if (!cutoff) {
      // Guard against blowing up on large coordinates; the bounded variant
      // is the tool for those.
      uint64_t entries = 1;
      for (uint32_t i = 0; i < m; ++i) {
        entries *= nonzero_binomial_exponents(coords[i], spec->p()).size();
        if (entries > (1ull << 22))
          throw Error("exact standard form too large; use the bounded variant");
      }
    }
    rec(coords, z, 0, ValueQ(0), coeff);
  }

  // Entries whose central cofactor cancelled to zero disappear.
  for (auto it = sf.entries.begin(); it != sf.entries.end();)
    it = it->second.is_zero() ? sf.entries.erase(it) : std::next(it);
  return sf;
}

}  // namespace

StandardForm standard_form(const AlgebraElement& x) {
  return standard_form_impl(x, nullptr, nullptr);
}

StandardForm standard_form_bounded(const AlgebraElement& x, const PValuation& omega,
                                   const ValueQ& cutoff) {
  const auto& t = certified_weights(omega);
  return standard_form_impl(x, &t, &cutoff);
}

// --- filtration f ----------------------------------------------------------

std::vector<CentralValuation> default_central_family(const PValuation& omega) {
  certified_weights(omega);
  PValuation w = omega;
  return {[w](const AlgebraElement& central, const ValueQ& cutoff) {
    return w_value(central, w, cutoff);
  }};
}

ValueBound f_value(const AlgebraElement& x, const std::vector<CentralValuation>& family,
                   const PValuation& omega, const ValueQ& cutoff) {
  if (family.empty()) throw ConfigInvalid("f needs at least one central valuation");
  const auto& t = certified_weights(omega);
  StandardForm sf = standard_form_bounded(x, omega, cutoff);

  std::optional<ValueBound> acc;
  for (const auto& [gamma, r] : sf.entries) {
    ValueQ base(0);
    for (size_t i = 0; i < gamma.size(); ++i) base = base + t[i].scaled(gamma[i]);
    std::optional<ValueBound> v;
    for (const auto& vi : family) {
      ValueBound b = vi(r, cutoff - base);
      v = v ? vb_min(*v, b) : b;
    }
    ValueBound term = vb_add(ValueBound::exact(base), *v);
    acc = acc ? vb_min(*acc, term) : term;
  }
  // Everything not enumerated sits strictly above the cutoff.
  if (!acc || acc->value > cutoff) return ValueBound::greater(cutoff);
  return *acc;
}

ValueBound f_value(const AlgebraElement& x, const PValuation& omega,
                   const ValueQ& cutoff) {
  return f_value(x, default_central_family(omega), omega, cutoff);
}

AlgSymbol graded_symbol_alg(const AlgebraElement& x, AlgFiltration which,
                            const PValuation& omega, const ValueQ& cutoff) {
  const auto& t = certified_weights(omega);
  const uint32_t n = x.spec()->rank();
  std::map<std::vector<uint32_t>, Fq> expansion;
  std::map<std::vector<uint32_t>, ValueQ> weight;

  if (which == AlgFiltration::W) {
    BSeries s = expand_b_form(x, omega, cutoff);
    for (const auto& [alpha, c] : s.monomials()) {
      expansion.emplace(alpha, c);
      weight.emplace(alpha, s.weight_of(alpha));
    }
  } else {
    // Through the standard form: merge head exponents with the expansion
    // of the central cofactor.
    StandardForm sf = standard_form_bounded(x, omega, cutoff);
    for (const auto& [gamma, r] : sf.entries) {
      ValueQ base(0);
      for (size_t i = 0; i < gamma.size(); ++i) base = base + t[i].scaled(gamma[i]);
      BSeries rs = expand_b_form(r, omega, cutoff - base);
      for (const auto& [delta, c] : rs.monomials()) {
        std::vector<uint32_t> full(n, 0);
        for (size_t i = 0; i < gamma.size(); ++i) full[i] = gamma[i];
        for (size_t i = 0; i < n; ++i) full[i] += delta[i];
        auto it = expansion.find(full);
        if (it == expansion.end()) {
          expansion.emplace(full, c);
          weight.emplace(full, base + rs.weight_of(delta));
        } else {
          it->second = x.field()->add(it->second, c);
          if (x.field()->is_zero(it->second)) {
            expansion.erase(it);
            weight.erase(full);
          }
        }
      }
    }
  }

  if (expansion.empty())
    throw ValueBeyondCutoff("no surviving monomial at the cutoff");
  std::optional<ValueQ> level;
  for (const auto& [alpha, w] : weight)
    if (!level || w < *level) level = w;
  AlgSymbol sym;
  sym.level = *level;
  for (const auto& [alpha, c] : expansion)
    if (weight.at(alpha) == *level) sym.slice.emplace(alpha, c);
  return sym;
}

}  // namespace pvg
