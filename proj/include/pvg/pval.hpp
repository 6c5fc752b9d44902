#pragma once

// p-valuations as first-class objects: evaluation with truncation-aware
// bounds, the (t,p)-filtration, quotient valuations along the distinguished
// chain, the inf-lift from a torsion-free quotient, orbit infima under
// automorphism actions, axiom checking and graded symbols.

#include <functional>
#include <optional>
#include <vector>

#include "pvg/nilgroup.hpp"
#include "pvg/valueq.hpp"

namespace pvg {

// Witnesses the ordered-basis law omega(g^lambda) = min_i(t_i + v_p(lambda_i)).
struct DiagonalCertificate {
  std::vector<ValueQ> values;  // t_i per basis index
};

class PValuation {
public:
  using Evaluator = std::function<ValueBound(const GroupElement&)>;

  // Diagonal valuation from basis values. Values must be positive; whether
  // the result is a genuine p-valuation is the business of check_axioms
  // (the p = 2 boundary example deliberately sits outside the axioms).
  static PValuation diagonal(GroupSpecPtr spec, std::vector<ValueQ> values);
  static PValuation from_evaluator(GroupSpecPtr spec, Evaluator eval);

  const GroupSpecPtr& spec() const { return spec_; }
  const std::optional<DiagonalCertificate>& certificate() const { return cert_; }

  // Evaluate. Values past the precision horizon come back as flagged lower
  // bounds; in particular the identity at precision evaluates to
  // AtLeast(min_i t_i + N) rather than a claimed infinity.
  ValueBound eval(const GroupElement& x) const;

private:
  GroupSpecPtr spec_;
  Evaluator eval_;
  std::optional<DiagonalCertificate> cert_;
};

// The (t,p)-filtration on a free abelian spec: value t + n on A^{p^n}
// minus A^{p^{n-1}}. Requires t > 1/(p-1) (InvalidT) and an abelian spec
// (NotAbelian).
PValuation tp_filtration(const ValueQ& t, GroupSpecPtr abelian_spec);

// Quotient valuation along a distinguished chain member, computed by the
// adapted-basis closed form Omega(gK) = min_{i <= r}(t_i + v_p(lambda_i)).
// Requires a diagonal certificate (NoCertificate); the quotient must be
// free abelian (NonAbelianQuotient).
PValuation quotient_pval(const PValuation& omega, Subgroup along);

// Search-based evaluation of the quotient valuation for uncertified inputs
// (test use): max of omega(x0 * ell) over sampled ell in the subgroup,
// always including ell = 1.
ValueBound quotient_eval_by_search(const PValuation& omega, Subgroup along,
                                   const GroupElement& quotient_elem, Rng& rng,
                                   uint32_t samples);

// Pointwise min(alpha, beta_bar o projection): the lift of a quotient
// valuation against a base valuation. Carries the merged diagonal
// certificate when both inputs are certified.
PValuation inf_lift(const PValuation& alpha, const PValuation& beta_bar,
                    Subgroup along);

// Pullback along a coordinate map (x -> omega(map(x))), the building block
// for automorphism actions. No certificate in general.
PValuation act_by(const PValuation& omega,
                  std::function<GroupElement(const GroupElement&)> map);

// Pointwise infimum of omega over a finite family of pullback maps.
PValuation orbit_inf_by(
    const PValuation& omega,
    std::vector<std::function<GroupElement(const GroupElement&)>> maps);

// inf{alpha, (t,p)-filtration pulled back from G/L} with
// t = min_i alpha(g_i) by default; the result is diagonal and satisfies
// property (omega_L).
PValuation omega_with_property_L(const PValuation& alpha,
                                 std::optional<ValueQ> t = {});

// Head basis values all equal and strictly below every value on L.
// Requires a diagonal certificate (NoCertificate).
bool check_omega_L(const PValuation& omega);

struct AxiomReport {
  uint64_t pairs = 0;
  uint64_t checks = 0;
  uint64_t violations = 0;
  uint64_t inconclusive = 0;
  std::string first_violation;

  bool passed() const { return violations == 0; }
};

// Checks the five p-valuation axioms on every supplied pair: subadditivity
// on xy^{-1}, the commutator inequality, finiteness off the identity, the
// 1/(p-1) lower bound, and omega(x^p) = omega(x) + 1. Only definite
// violations count; bound-limited comparisons are tallied as inconclusive.
AxiomReport check_axioms(const PValuation& omega,
                         const std::vector<std::pair<GroupElement, GroupElement>>& pairs);

struct GradedGroupSymbol {
  ValueQ level;
  GroupElement representative;
};

// Principal symbol of x (IdentityElement if x is the identity at precision).
GradedGroupSymbol graded_symbol_group(const PValuation& omega, const GroupElement& x);

// Two symbols at the same level are equal iff omega(x y^{-1}) > level.
bool symbols_equal(const PValuation& omega, const GradedGroupSymbol& a,
                   const GradedGroupSymbol& b);

}  // namespace pvg
