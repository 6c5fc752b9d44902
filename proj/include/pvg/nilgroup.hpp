#pragma once

// Nilpotent p-valuable groups of finite rank in Mal'cev coordinates.
// Multiplication is collection against structure constants; a faithful
// unipotent matrix representation serves as an independent oracle.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pvg/padic.hpp"
#include "pvg/rng.hpp"

#include <json.hpp>

namespace pvg {

class GroupElement;

// Distinguished members of the subgroup chain 1 <= Z <= L < H. The basis
// is adapted: generators l+1..n span L, generators m+1..n span Z.
enum class Subgroup { Trivial, L, Z };

// Integer matrix used to hold the defining representation of a generator.
struct IntMat {
  uint32_t dim = 0;
  std::vector<int64_t> a;  // row-major

  int64_t at(uint32_t i, uint32_t j) const { return a[i * dim + j]; }
};

class GroupSpec : public std::enable_shared_from_this<GroupSpec> {
public:
  struct Data {
    std::string name;
    uint64_t p = 0;
    uint32_t rank = 0;            // n
    std::vector<std::string> names;
    uint32_t head = 0;            // l: generators 1..l are a basis of H/L
    uint32_t central_start = 0;   // m: generators m+1..n span Z
    // comm[i][j] for 0 <= i < j < n: exponent vector of [g_{i+1}, g_{j+1}]
    // as a normal-form word supported on indices > j.
    std::vector<std::vector<std::vector<int64_t>>> comm;
    std::vector<IntMat> rep;      // unipotent representation of each generator
  };

  // Validates the presentation (shape, adapted chain, centrality,
  // collection-friendliness, structure constants vs matrix oracle,
  // coordinate round-trip) and throws SpecInvalid on failure.
  static std::shared_ptr<const GroupSpec> create(Data data);

  // Built-in catalogue.
  static std::shared_ptr<const GroupSpec> heisenberg(uint64_t p);
  static std::shared_ptr<const GroupSpec> unipotent3(uint64_t p);  // = Heisenberg
  static std::shared_ptr<const GroupSpec> unipotent4(uint64_t p);
  // Free abelian of the given rank, with an optional distinguished suffix
  // chain (defaults to the trivial chain l = m = rank).
  static std::shared_ptr<const GroupSpec> abelian(uint64_t p, uint32_t rank,
                                                  std::optional<uint32_t> l = {},
                                                  std::optional<uint32_t> m = {});

  static std::shared_ptr<const GroupSpec> from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  const std::string& name() const { return d_.name; }
  uint64_t p() const { return d_.p; }
  uint32_t rank() const { return d_.rank; }
  uint32_t head_count() const { return d_.head; }
  uint32_t central_start() const { return d_.central_start; }
  const std::string& generator_name(uint32_t i) const { return d_.names[i]; }
  bool is_abelian() const { return abelian_; }

  // Exponent word of [g_i, g_j] (0-based i < j), empty when they commute.
  const std::vector<int64_t>& comm_word(uint32_t i, uint32_t j) const {
    return d_.comm[i][j];
  }
  bool generators_commute(uint32_t i, uint32_t j) const;

  uint32_t rep_dim() const { return d_.rep.empty() ? 0 : d_.rep[0].dim; }
  MatrixZp rep_generator(uint32_t i, uint32_t precision) const;
  // Position of the single off-diagonal entry of rep(g_i).
  std::pair<uint32_t, uint32_t> rep_position(uint32_t i) const { return pos_[i]; }

  // Free abelian spec for the quotient along the given chain member;
  // throws NonAbelianQuotient when relations survive in the quotient.
  std::shared_ptr<const GroupSpec> quotient_spec(Subgroup which) const;
  uint32_t quotient_rank(Subgroup which) const;

  // When true, collect_mul re-checks every product against the matrix
  // representation. Enabled by tests and validation.
  bool oracle_checks() const { return oracle_checks_; }
  void set_oracle_checks(bool on) const { oracle_checks_ = on; }

private:
  friend class GroupElement;
  GroupSpec() = default;
  void validate() const;

  Data d_;
  bool abelian_ = false;
  std::vector<std::pair<uint32_t, uint32_t>> pos_;
  mutable bool oracle_checks_ = false;
};

using GroupSpecPtr = std::shared_ptr<const GroupSpec>;

// An element in normal form: the coordinate vector of the ordered product
// g_1^{c_1} ... g_n^{c_n}, coordinates truncated at a common precision.
class GroupElement {
public:
  static GroupElement identity(GroupSpecPtr spec, uint32_t precision);
  static GroupElement from_coords(GroupSpecPtr spec, uint32_t precision,
                                  const std::vector<int64_t>& coords);
  static GroupElement generator(GroupSpecPtr spec, uint32_t precision,
                                uint32_t index, int64_t exponent = 1);

  const GroupSpecPtr& spec() const { return spec_; }
  uint32_t precision() const { return prec_; }
  const std::vector<uint64_t>& raw_coords() const { return coords_; }
  PAdicInt coord(uint32_t i) const {
    return PAdicInt(spec_->p(), prec_, static_cast<int64_t>(coords_[i]));
  }

  bool is_identity_at_precision() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b);
  friend bool operator!=(const GroupElement& a, const GroupElement& b) {
    return !(a == b);
  }

  std::string str() const;

private:
  friend GroupElement collect_word(const GroupSpecPtr&, uint32_t,
                                   std::vector<std::pair<uint32_t, uint64_t>>);
  GroupSpecPtr spec_;
  uint32_t prec_ = 0;
  std::vector<uint64_t> coords_;
};

// Normal-form product by collection; cross-checked against the matrix
// representation when the spec has oracle checks enabled.
GroupElement collect_mul(const GroupElement& a, const GroupElement& b);

// Continuous power a^s for s in Z_p, evaluated digit-by-digit in base p on
// the residue of s at the working precision.
GroupElement zp_power(const GroupElement& a, const PAdicInt& s);
GroupElement zp_power(const GroupElement& a, int64_t s);

GroupElement group_inverse(const GroupElement& a);

// a^{-1} b^{-1} a b in normal form.
GroupElement commutator(const GroupElement& a, const GroupElement& b);

// First l (resp. m) coordinates; valid because the basis is adapted.
std::vector<PAdicInt> coords_mod(const GroupElement& a, Subgroup subgroup);

// The ordered product of generator representation powers.
MatrixZp rep_matrix(const GroupElement& a);

// Recover coordinates from a represented matrix (the independent path used
// by the oracle suites); throws SpecInvalid if the matrix does not lie in
// the image of the coordinate chart.
GroupElement element_from_matrix(GroupSpecPtr spec, uint32_t precision,
                                 const MatrixZp& m);

// Coordinate sampler with a mixed valuation profile.
GroupElement random_element(GroupSpecPtr spec, uint32_t precision, Rng& rng);

}  // namespace pvg
