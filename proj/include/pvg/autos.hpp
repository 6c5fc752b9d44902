#pragma once

// Automorphisms of the built-in groups: construction with relation and
// chain-preservation checks, extension to the group algebra, the induced
// matrix on H/L, the first-congruence-subgroup test, and the hypothesis
// checkers for the valuation-increase conditions.

#include <optional>

#include "pvg/groupalg.hpp"
#include "pvg/nilgroup.hpp"
#include "pvg/pval.hpp"

#include <json.hpp>

namespace pvg {

class Automorphism {
public:
  // Validates: images respect all defining relations (RelationViolation),
  // the induced map on coordinates is invertible mod p (NotBijective), the
  // distinguished L and Z are preserved (SubgroupNotPreserved), and any
  // declared finite order holds at precision (OrderMismatch).
  static Automorphism make(GroupSpecPtr spec, std::vector<GroupElement> images,
                           std::optional<uint32_t> declared_order = {});

  static Automorphism identity(GroupSpecPtr spec, uint32_t precision);
  // Conjugation x -> h^{-1} x h.
  static Automorphism inner(const GroupElement& h);
  // a then b: x -> b(a(x)).
  static Automorphism compose(const Automorphism& a, const Automorphism& b);

  const GroupSpecPtr& spec() const { return spec_; }
  uint32_t precision() const { return prec_; }
  const GroupElement& image(uint32_t i) const { return images_[i]; }
  const std::optional<uint32_t>& declared_order() const { return order_; }

  GroupElement apply(const GroupElement& x) const;

  bool is_identity_at_precision() const;

  nlohmann::ordered_json to_json() const;
  static Automorphism from_json(GroupSpecPtr spec, const nlohmann::json& j);

private:
  Automorphism() = default;
  GroupSpecPtr spec_;
  uint32_t prec_ = 0;
  std::vector<GroupElement> images_;
  std::optional<uint32_t> order_;
};

// Term-wise extension to the group algebra (a ring map).
AlgebraElement apply_to_algebra(const Automorphism& sigma, const AlgebraElement& x);

// Matrix of the induced automorphism of H/L: column j holds the head
// coordinates of sigma(g_j).
MatrixZp induced_matrix(const Automorphism& sigma);

// M - 1 has every entry divisible by p.
bool in_gamma1(const MatrixZp& m);

// The automorphism action on valuations: (sigma . omega)(x) = omega(sigma(x)).
PValuation act(const Automorphism& sigma, const PValuation& omega);

// Pointwise infimum of omega over the listed automorphisms.
PValuation orbit_inf(const PValuation& omega, const std::vector<Automorphism>& family);

struct Condition11Report {
  struct Entry {
    GroupElement x;
    ValueBound moved;  // omega(sigma(x) x^{-1})
    ValueBound base;   // omega(x)
    bool pass;
  };
  std::vector<Entry> entries;
  bool all_pass = true;
};

// omega(sigma(x) x^{-1}) > omega(x) for each supplied element
// (default: the head generators g_1..g_l).
Condition11Report check_condition_1_1(const Automorphism& sigma, const PValuation& omega,
                                      const std::vector<GroupElement>& elements = {});

struct FContext {
  PValuation omega;                       // certified diagonal valuation
  std::vector<CentralValuation> family;   // empty = default {w | kZ}
  ValueQ cutoff;
  std::shared_ptr<const FieldSpec> field; // null = F_p
};

struct FIncreaseReport {
  struct Entry {
    uint32_t index;
    ValueBound moved;  // f(sigma(b_i) - b_i)
    ValueBound base;   // f(b_i)
    bool increase;
    bool conclusive;
  };
  std::vector<Entry> entries;
  bool all_increase = true;  // false as well when any entry is inconclusive
  bool conclusive = true;
};

// f(sigma(b_i) - b_i) > f(b_i) for i = 1..upto (default: the head block).
// A truncation flag "> D" counts as a strict increase only when the base
// value is exact and at least 1 below the cutoff; otherwise the entry is
// marked inconclusive and the check errs to false.
FIncreaseReport check_f_increase(const Automorphism& sigma, const FContext& ctx,
                                 std::optional<uint32_t> upto = {});

// Random valid automorphism: for class-2 specs with a 2-generator head the
// full image family, otherwise compositions of inner automorphisms and
// torus rescalings. When head_congruent is set, head images are congruent
// to the generators mod p (so condition (1.1) style hypotheses hold).
Automorphism random_automorphism(GroupSpecPtr spec, uint32_t precision, Rng& rng,
                                 bool head_congruent = false);

// Deterministic pool of finite-order automorphisms (identity, inversions,
// order-3 rotations, and inner twists of these where the order survives).
std::vector<Automorphism> finite_order_pool(GroupSpecPtr spec, uint32_t precision,
                                            Rng& rng, uint32_t inner_twists);

}  // namespace pvg
