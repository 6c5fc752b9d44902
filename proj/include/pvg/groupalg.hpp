#pragma once

// The completed group algebra kH at desk scale, in dual representation:
// exact group-basis combinations for ring arithmetic, truncated b-adic
// series for the valuation w, plus the standard form over the centre and
// the filtration f built from central valuations.

#include <functional>
#include <map>
#include <vector>

#include "pvg/fq.hpp"
#include "pvg/nilgroup.hpp"
#include "pvg/pval.hpp"

#include <json.hpp>

namespace pvg {

// Finite k-linear combination of group elements in normal form.
class AlgebraElement {
public:
  using Terms = std::map<std::vector<uint64_t>, Fq>;

  static AlgebraElement zero(GroupSpecPtr spec, uint32_t precision,
                             std::shared_ptr<const FieldSpec> field = nullptr);
  static AlgebraElement one(GroupSpecPtr spec, uint32_t precision,
                            std::shared_ptr<const FieldSpec> field = nullptr);
  static AlgebraElement from_group(const GroupElement& g,
                                   std::shared_ptr<const FieldSpec> field = nullptr);
  // b_i = g_i - 1
  static AlgebraElement b_element(GroupSpecPtr spec, uint32_t precision, uint32_t i,
                                  std::shared_ptr<const FieldSpec> field = nullptr);

  const GroupSpecPtr& spec() const { return spec_; }
  const std::shared_ptr<const FieldSpec>& field() const { return field_; }
  uint32_t precision() const { return prec_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  AlgebraElement& add_term(const GroupElement& g, const Fq& c);

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  AlgebraElement operator-() const;
  AlgebraElement scaled(const Fq& c) const;
  AlgebraElement pow_nat(uint64_t e) const;

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) {
    return !(a == b);
  }

  nlohmann::ordered_json to_json() const;
  static AlgebraElement from_json(GroupSpecPtr spec, const nlohmann::json& j);

  std::string str() const;

private:
  GroupSpecPtr spec_;
  std::shared_ptr<const FieldSpec> field_;
  uint32_t prec_ = 0;
  Terms terms_;
};

// Exact product (collection on group terms, k-bilinear).
AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b);

// Truncated b-adic series: the monomials b^alpha of weight
// <alpha, omega(g)> <= cutoff, with field coefficients.
class BSeries {
public:
  using Monomials = std::map<std::vector<uint32_t>, Fq>;

  BSeries(GroupSpecPtr spec, std::shared_ptr<const FieldSpec> field,
          uint32_t precision, std::vector<ValueQ> weights, ValueQ cutoff);

  const GroupSpecPtr& spec() const { return spec_; }
  const std::shared_ptr<const FieldSpec>& field() const { return field_; }
  uint32_t precision() const { return prec_; }
  const std::vector<ValueQ>& weights() const { return weights_; }
  const ValueQ& cutoff() const { return cutoff_; }
  const Monomials& monomials() const { return monos_; }
  bool empty() const { return monos_.empty(); }

  ValueQ weight_of(const std::vector<uint32_t>& alpha) const;
  void accumulate(const std::vector<uint32_t>& alpha, const Fq& c);

  friend bool operator==(const BSeries& a, const BSeries& b);
  friend bool operator!=(const BSeries& a, const BSeries& b) { return !(a == b); }

  nlohmann::ordered_json to_json() const;
  static BSeries from_json(GroupSpecPtr spec, const nlohmann::json& j);

  std::string str() const;

private:
  GroupSpecPtr spec_;
  std::shared_ptr<const FieldSpec> field_;
  uint32_t prec_ = 0;
  std::vector<ValueQ> weights_;
  ValueQ cutoff_;
  Monomials monos_;
};

// Rewrites every group term g^lambda as prod_i (1 + b_i)^{lambda_i} and
// expands with Lucas binomial coefficients, discarding monomials of weight
// beyond the cutoff. Requires a diagonal certificate on omega.
BSeries expand_b_form(const AlgebraElement& x, const PValuation& omega,
                      const ValueQ& cutoff);

// Truncated product of truncated series: monomial pairs are re-expanded
// exactly through the group algebra, so the result matches the expansion
// of the exact product up to the cutoff.
BSeries bseries_mul(const BSeries& a, const BSeries& b);

// Minimum weight of a surviving monomial; Greater(cutoff) when the
// truncated expansion is empty.
ValueBound w_value(const AlgebraElement& x, const PValuation& omega,
                   const ValueQ& cutoff);

// Standard form over the centre: x = sum_gamma r_gamma c^gamma with
// exponents gamma on the non-central basis images c_1..c_m and central
// cofactors r_gamma in kZ (group-basis form).
struct StandardForm {
  using Entries = std::map<std::vector<uint32_t>, AlgebraElement>;

  uint32_t noncentral_rank = 0;  // m
  Entries entries;
};

// Exact standard form (finite since coordinates are residues).
StandardForm standard_form(const AlgebraElement& x);

// Standard form restricted to exponents gamma with head weight
// <gamma, omega(g)> <= cutoff; used by the filtration f.
StandardForm standard_form_bounded(const AlgebraElement& x, const PValuation& omega,
                                   const ValueQ& cutoff);

// A valuation on the central subalgebra kZ, evaluated with a cutoff.
using CentralValuation =
    std::function<ValueBound(const AlgebraElement& central, const ValueQ& cutoff)>;

// The default family {v_1} with v_1 = w restricted to kZ.
std::vector<CentralValuation> default_central_family(const PValuation& omega);

// f(x) = inf over standard-form entries of (min_i v_i(r_gamma) + w(c^gamma)),
// with truncation-aware bounds.
ValueBound f_value(const AlgebraElement& x, const std::vector<CentralValuation>& family,
                   const PValuation& omega, const ValueQ& cutoff);
ValueBound f_value(const AlgebraElement& x, const PValuation& omega,
                   const ValueQ& cutoff);

enum class AlgFiltration { W, F };

struct AlgSymbol {
  ValueQ level;
  std::map<std::vector<uint32_t>, Fq> slice;  // minimal-weight monomials
};

// Minimal-weight slice of the b-expansion under w or f; throws
// ValueBeyondCutoff when the value is not finite at the cutoff.
AlgSymbol graded_symbol_alg(const AlgebraElement& x, AlgFiltration which,
                            const PValuation& omega, const ValueQ& cutoff);

}  // namespace pvg
