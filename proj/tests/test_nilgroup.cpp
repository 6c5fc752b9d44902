#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvg/nilgroup.hpp"
#include "support.hpp"

using namespace pvg;

namespace {
const uint32_t N = 6;
}

TEST_CASE("collection: pinned Heisenberg products") {
  auto h = GroupSpec::heisenberg(3);
  h->set_oracle_checks(true);
  auto x = GroupElement::generator(h, N, 0);
  auto y = GroupElement::generator(h, N, 1);
  auto id = GroupElement::identity(h, N);

  CHECK(collect_mul(x, id) == x);
  CHECK(collect_mul(y, x) == GroupElement::from_coords(h, N, {1, 1, -1}));
  CHECK(collect_mul(x, x) == GroupElement::from_coords(h, N, {2, 0, 0}));
}

TEST_CASE("zp_power: pinned values and the matrix oracle") {
  auto h = GroupSpec::heisenberg(3);
  h->set_oracle_checks(true);
  auto x = GroupElement::generator(h, N, 0);
  auto xy = GroupElement::from_coords(h, N, {1, 1, 0});

  CHECK(zp_power(x, PAdicInt(3, N, 0)) == GroupElement::identity(h, N));
  CHECK(zp_power(x, PAdicInt(3, N, 3)) == GroupElement::from_coords(h, N, {3, 0, 0}));
  auto cube = zp_power(xy, PAdicInt(3, N, 3));
  CHECK(cube == GroupElement::from_coords(h, N, {3, 3, -3}));
  // independent route: through the representation
  CHECK(element_from_matrix(h, N, rep_matrix(xy).pow(3)) == cube);
}

TEST_CASE("commutators") {
  auto h = GroupSpec::heisenberg(3);
  auto x = GroupElement::generator(h, N, 0);
  auto y = GroupElement::generator(h, N, 1);
  auto z = GroupElement::generator(h, N, 2);

  CHECK(commutator(x, x) == GroupElement::identity(h, N));
  CHECK(commutator(x, y) == z);
  CHECK(commutator(group_inverse(x), group_inverse(y)) == z);
}

TEST_CASE("coords_mod truncates along the adapted basis") {
  auto h = GroupSpec::heisenberg(3);
  auto id = GroupElement::identity(h, N);
  auto xz5 = GroupElement::from_coords(h, N, {1, 0, 5});
  auto yx = collect_mul(GroupElement::generator(h, N, 1), GroupElement::generator(h, N, 0));

  auto zero = coords_mod(id, Subgroup::L);
  CHECK(zero.size() == 2);
  CHECK(zero[0].residue() == 0);
  CHECK(zero[1].residue() == 0);
  auto a = coords_mod(xz5, Subgroup::L);
  CHECK(a[0].residue() == 1);
  CHECK(a[1].residue() == 0);
  auto b = coords_mod(yx, Subgroup::L);
  CHECK(b[0].residue() == 1);
  CHECK(b[1].residue() == 1);
}

TEST_CASE("group laws against the matrix oracle") {
  Rng rng(99);
  for (auto spec : {GroupSpec::heisenberg(5), GroupSpec::unipotent4(3)}) {
    spec->set_oracle_checks(true);
    for (int i = 0; i < 150; ++i) {
      auto a = random_element(spec, N, rng);
      auto b = random_element(spec, N, rng);
      auto c = random_element(spec, N, rng);
      CHECK(collect_mul(collect_mul(a, b), c) == collect_mul(a, collect_mul(b, c)));
      CHECK(collect_mul(a, group_inverse(a)).is_identity_at_precision());
      CHECK(zp_power(a, PAdicInt(spec->p(), N, 1)) == a);
      // commutator words land past the head block
      auto k = commutator(a, b);
      for (uint32_t j = 0; j < spec->head_count(); ++j)
        CHECK(k.raw_coords()[j] == 0);
    }
  }
}

TEST_CASE("zp_power is additive on non-overflowing exponents") {
  Rng rng(7);
  auto spec = GroupSpec::unipotent4(3);
  uint64_t mod = pow_u64(3, N);
  for (int i = 0; i < 100; ++i) {
    auto a = random_element(spec, N, rng);
    PAdicInt s(3, N, static_cast<int64_t>(rng.below(mod / 2)));
    PAdicInt t(3, N, static_cast<int64_t>(rng.below(mod / 2)));
    CHECK(zp_power(a, s + t) == collect_mul(zp_power(a, s), zp_power(a, t)));
  }
}

TEST_CASE("built-in specs validate; tampered ones do not") {
  CHECK(GroupSpec::heisenberg(2)->rank() == 3);
  CHECK(GroupSpec::unipotent3(7)->name() == "heisenberg");
  CHECK(GroupSpec::unipotent4(2)->head_count() == 3);
  CHECK(GroupSpec::abelian(3, 4)->is_abelian());

  // [x, y] = z^2 disagrees with the representation.
  auto bad = GroupSpec::heisenberg(3)->to_json();
  bad["commutators"][0]["word"] = std::vector<int64_t>{0, 0, 2};
  CHECK_THROWS_AS(GroupSpec::from_json(nlohmann::json::parse(bad.dump())), SpecInvalid);

  // A central generator with a nontrivial commutator is rejected.
  auto bad2 = GroupSpec::heisenberg(3)->to_json();
  bad2["central_start"] = 1;
  CHECK_THROWS_AS(GroupSpec::from_json(nlohmann::json::parse(bad2.dump())), SpecInvalid);

  CHECK_THROWS_AS(GroupSpec::abelian(4, 2), SpecInvalid);
}

TEST_CASE("spec documents round-trip") {
  for (auto spec : {GroupSpec::unipotent4(3), GroupSpec::abelian(5, 2, 1, 1)}) {
    auto j = spec->to_json();
    auto back = GroupSpec::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back->to_json().dump() == j.dump());
    CHECK(back->rank() == spec->rank());
    CHECK(back->head_count() == spec->head_count());
  }
  CHECK_THROWS_AS(GroupSpec::from_json(nlohmann::json::parse("{\"p\": 3}")),
                  ConfigInvalid);
}

TEST_CASE("elements from different specs do not mix") {
  auto h1 = GroupSpec::heisenberg(3);
  auto h2 = GroupSpec::heisenberg(3);  // distinct instance
  auto a = GroupElement::generator(h1, N, 0);
  auto b = GroupElement::generator(h2, N, 0);
  CHECK_THROWS_AS(collect_mul(a, b), SpecMismatch);
  auto c = GroupElement::generator(h1, 4, 0);
  CHECK_THROWS_AS(collect_mul(a, c), SpecMismatch);
}

TEST_CASE("quotient specs") {
  auto u4 = GroupSpec::unipotent4(3);
  auto q = u4->quotient_spec(Subgroup::L);
  CHECK(q->is_abelian());
  CHECK(q->rank() == 3);
  CHECK_THROWS_AS(u4->quotient_spec(Subgroup::Z), NonAbelianQuotient);
  auto h = GroupSpec::heisenberg(3);
  CHECK(h->quotient_spec(Subgroup::Z)->rank() == 2);  // l = m for Heisenberg
  CHECK(h->quotient_spec(Subgroup::Trivial) == h);
}

TEST_CASE("coordinate chart round-trip and off-chart rejection") {
  Rng rng(31);
  auto u4 = GroupSpec::unipotent4(5);
  for (int i = 0; i < 100; ++i) {
    auto a = random_element(u4, N, rng);
    CHECK(element_from_matrix(u4, N, rep_matrix(a)) == a);
  }
  MatrixZp off(5, N, 4);  // not unipotent: zero matrix
  CHECK_THROWS_AS(element_from_matrix(u4, N, off), SpecInvalid);
}
