#include "pvg/pval.hpp"

#include <algorithm>

namespace pvg {

namespace {

ValueBound diagonal_eval(const std::vector<ValueQ>& values, const GroupElement& x) {
  std::optional<ValueBound> acc;
  for (uint32_t i = 0; i < x.spec()->rank(); ++i) {
    Vp v = x.coord(i).vp();
    ValueBound c = v.exact ? ValueBound::exact(values[i] + ValueQ(v.k))
                           : ValueBound::at_least(values[i] + ValueQ(v.k));
    acc = acc ? vb_min(*acc, c) : c;
  }
  return *acc;
}

ValueQ one_over_p_minus_1(uint64_t p) {
  return ValueQ::frac(1, static_cast<int64_t>(p) - 1);
}

}  // namespace

PValuation PValuation::diagonal(GroupSpecPtr spec, std::vector<ValueQ> values) {
  if (values.size() != spec->rank())
    throw SpecMismatch("diagonal certificate needs one value per generator");
  for (const auto& v : values)
    if (!(ValueQ(0) < v)) throw InvalidT("diagonal values must be positive");
  PValuation w;
  w.spec_ = std::move(spec);
  w.cert_ = DiagonalCertificate{values};
  w.eval_ = [values](const GroupElement& x) { return diagonal_eval(values, x); };
  return w;
}

PValuation PValuation::from_evaluator(GroupSpecPtr spec, Evaluator eval) {
  PValuation w;
  w.spec_ = std::move(spec);
  w.eval_ = std::move(eval);
  return w;
}

ValueBound PValuation::eval(const GroupElement& x) const {
  if (x.spec() != spec_) throw SpecMismatch("element and valuation specs differ");
  return eval_(x);
}

PValuation tp_filtration(const ValueQ& t, GroupSpecPtr abelian_spec) {
  if (!abelian_spec->is_abelian())
    throw NotAbelian("the (t,p)-filtration lives on a free abelian group");
  if (!(t > one_over_p_minus_1(abelian_spec->p())))
    throw InvalidT("need t > 1/(p-1), got t = " + t.str());
  std::vector<ValueQ> values(abelian_spec->rank(), t);
  return PValuation::diagonal(std::move(abelian_spec), std::move(values));
}

PValuation quotient_pval(const PValuation& omega, Subgroup along) {
  if (along == Subgroup::Trivial) return omega;
  if (!omega.certificate())
    throw NoCertificate("quotient valuation needs an adapted diagonal certificate");
  auto qspec = omega.spec()->quotient_spec(along);
  uint32_t r = omega.spec()->quotient_rank(along);
  std::vector<ValueQ> values(omega.certificate()->values.begin(),
                             omega.certificate()->values.begin() + r);
  return PValuation::diagonal(std::move(qspec), std::move(values));
}

ValueBound quotient_eval_by_search(const PValuation& omega, Subgroup along,
                                   const GroupElement& quotient_elem, Rng& rng,
                                   uint32_t samples) {
  const auto& spec = omega.spec();
  uint32_t r = spec->quotient_rank(along);
  uint32_t n = spec->rank();
  uint32_t prec = quotient_elem.precision();
  // Representative with the subgroup coordinates zeroed.
  std::vector<int64_t> coords(n, 0);
  for (uint32_t i = 0; i < r; ++i)
    coords[i] = static_cast<int64_t>(quotient_elem.raw_coords()[i]);
  GroupElement x0 = GroupElement::from_coords(spec, prec, coords);
  ValueBound best = omega.eval(x0);
  uint64_t mod = pow_u64(spec->p(), prec);
  for (uint32_t s = 0; s < samples; ++s) {
    std::vector<int64_t> lc(n, 0);
    for (uint32_t i = r; i < n; ++i) lc[i] = static_cast<int64_t>(rng.below(mod));
    GroupElement ell = GroupElement::from_coords(spec, prec, lc);
    ValueBound v = omega.eval(collect_mul(x0, ell));
    // Running sup over the sample.
    if (definitely_gt(v, best) || (!best.is_exact() && v.value > best.value))
      best = v;
  }
  return best;
}

PValuation act_by(const PValuation& omega,
                  std::function<GroupElement(const GroupElement&)> map) {
  PValuation w = omega;
  // The domain spec is whatever the map accepts; record the map's codomain
  // valuation and let eval() check specs at the inner call.
  return PValuation::from_evaluator(
      omega.spec(), [w, map](const GroupElement& x) { return w.eval(map(x)); });
}

PValuation inf_lift(const PValuation& alpha, const PValuation& beta_bar,
                    Subgroup along) {
  const auto& spec = alpha.spec();
  uint32_t r = spec->quotient_rank(along);
  if (beta_bar.spec()->rank() != r || beta_bar.spec()->p() != spec->p())
    throw SpecMismatch("quotient valuation rank/prime does not match the chain member");
  if (!beta_bar.spec()->is_abelian())
    throw NonAbelianQuotient("lift along a chain member with non-abelian quotient");

  if (alpha.certificate() && beta_bar.certificate()) {
    std::vector<ValueQ> merged = alpha.certificate()->values;
    for (uint32_t i = 0; i < r; ++i)
      merged[i] = ValueQ::min(merged[i], beta_bar.certificate()->values[i]);
    return PValuation::diagonal(spec, std::move(merged));
  }
  auto qspec = beta_bar.spec();
  PValuation a = alpha;
  PValuation b = beta_bar;
  return PValuation::from_evaluator(spec, [a, b, qspec, r](const GroupElement& x) {
    std::vector<int64_t> coords(r);
    for (uint32_t i = 0; i < r; ++i)
      coords[i] = static_cast<int64_t>(x.raw_coords()[i]);
    GroupElement xq = GroupElement::from_coords(qspec, x.precision(), coords);
    return vb_min(a.eval(x), b.eval(xq));
  });
}

PValuation orbit_inf_by(
    const PValuation& omega,
    std::vector<std::function<GroupElement(const GroupElement&)>> maps) {
  if (maps.empty()) return omega;
  PValuation w = omega;
  return PValuation::from_evaluator(omega.spec(), [w, maps](const GroupElement& x) {
    std::optional<ValueBound> acc;
    for (const auto& m : maps) {
      ValueBound v = w.eval(m(x));
      acc = acc ? vb_min(*acc, v) : v;
    }
    return *acc;
  });
}

PValuation omega_with_property_L(const PValuation& alpha, std::optional<ValueQ> t) {
  if (!alpha.certificate())
    throw NoCertificate("the construction starts from a certified valuation");
  const auto& vals = alpha.certificate()->values;
  ValueQ tv = t ? *t : *std::min_element(vals.begin(), vals.end());
  auto qspec = alpha.spec()->quotient_spec(Subgroup::L);
  PValuation beta_bar = tp_filtration(tv, qspec);
  return inf_lift(alpha, beta_bar, Subgroup::L);
}

bool check_omega_L(const PValuation& omega) {
  if (!omega.certificate())
    throw NoCertificate("property (omega_L) is read off a diagonal certificate");
  const auto& vals = omega.certificate()->values;
  uint32_t l = omega.spec()->head_count();
  for (uint32_t i = 1; i < l; ++i)
    if (vals[i] != vals[0]) return false;
  for (uint32_t i = l; i < omega.spec()->rank(); ++i)
    if (!(vals[0] < vals[i])) return false;
  return true;
}

namespace {

struct AxiomCheck {
  AxiomReport* rep;

  void violated(const std::string& what) {
    ++rep->checks;
    ++rep->violations;
    if (rep->first_violation.empty()) rep->first_violation = what;
  }
  void ok() { ++rep->checks; }
  void unknown() {
    ++rep->checks;
    ++rep->inconclusive;
  }
};

}  // namespace

AxiomReport check_axioms(const PValuation& omega,
                         const std::vector<std::pair<GroupElement, GroupElement>>& pairs) {
  AxiomReport rep;
  AxiomCheck c{&rep};
  const auto& spec = omega.spec();
  ValueQ bound = one_over_p_minus_1(spec->p());

  for (const auto& [x, y] : pairs) {
    ++rep.pairs;
    ValueBound wx = omega.eval(x);
    ValueBound wy = omega.eval(y);

    // (i) omega(x y^{-1}) >= min(omega(x), omega(y))
    ValueBound lhs = omega.eval(collect_mul(x, group_inverse(y)));
    if (definitely_lt(lhs, vb_min(wx, wy)))
      c.violated("subadditivity fails at (" + x.str() + ", " + y.str() + ")");
    else
      c.ok();

    // (ii) omega([x, y]) >= omega(x) + omega(y)
    ValueBound wc = omega.eval(commutator(x, y));
    if (definitely_lt(wc, vb_add(wx, wy)))
      c.violated("commutator inequality fails at (" + x.str() + ", " + y.str() + ")");
    else
      c.ok();

    // (iii) finiteness away from the identity (at precision)
    for (const GroupElement* e : {&x, &y}) {
      if (e->is_identity_at_precision()) continue;
      ValueBound v = omega.eval(*e);
      if (v.is_exact() && v.value.is_infinity())
        c.violated("infinite value off the identity at " + e->str());
      else if (v.is_exact())
        c.ok();
      else
        c.unknown();
    }

    // (iv) omega > 1/(p-1)
    for (const ValueBound* v : {&wx, &wy}) {
      bool fine = v->kind == ValueBound::Kind::Greater ? v->value >= bound
                                                       : v->value > bound;
      if (fine)
        c.ok();
      else if (v->is_exact())
        c.violated("value " + v->str() + " not above 1/(p-1)");
      else
        c.unknown();
    }

    // (v) omega(x^p) = omega(x) + 1
    for (const GroupElement* e : {&x, &y}) {
      if (e->is_identity_at_precision()) continue;
      ValueBound base = omega.eval(*e);
      if (!base.is_exact()) {
        c.unknown();
        continue;
      }
      ValueBound up = omega.eval(
          zp_power(*e, PAdicInt(spec->p(), e->precision(),
                                static_cast<int64_t>(spec->p()))));
      ValueQ want = base.value + ValueQ(1);
      if (up.is_exact() ? up.value != want : up.value > want)
        c.violated("omega(x^p) != omega(x) + 1 at " + e->str());
      else if (up.is_exact())
        c.ok();
      else
        c.unknown();
    }
  }
  return rep;
}

GradedGroupSymbol graded_symbol_group(const PValuation& omega, const GroupElement& x) {
  if (x.is_identity_at_precision())
    throw IdentityElement("the identity has no principal symbol");
  ValueBound v = omega.eval(x);
  if (!v.is_exact())
    throw InsufficientPrecision("symbol level not determined at precision");
  return {v.value, x};
}

bool symbols_equal(const PValuation& omega, const GradedGroupSymbol& a,
                   const GradedGroupSymbol& b) {
  if (a.level != b.level) return false;
  ValueBound d =
      omega.eval(collect_mul(a.representative, group_inverse(b.representative)));
  return definitely_gt(d, ValueBound::exact(a.level));
}

}  // namespace pvg
