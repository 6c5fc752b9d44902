#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvg/autos.hpp"
#include "support.hpp"

using namespace pvg;

namespace {
const uint32_t N = 6;

Automorphism inversion(const GroupSpecPtr& h) {
  return Automorphism::make(h, {GroupElement::from_coords(h, N, {-1, 0, 0}),
                                GroupElement::from_coords(h, N, {0, -1, 0}),
                                GroupElement::from_coords(h, N, {0, 0, 1})},
                            2);
}

PValuation heis_112(const GroupSpecPtr& h) {
  return PValuation::diagonal(h, {ValueQ(1), ValueQ(1), ValueQ(2)});
}
}  // namespace

TEST_CASE("construction and validation") {
  auto h = GroupSpec::heisenberg(3);
  CHECK(Automorphism::identity(h, N).is_identity_at_precision());
  CHECK_NOTHROW(inversion(h));  // [x^{-1}, y^{-1}] = z

  // x -> x^{-1} with y fixed sends [x, y] to z^{-1}, not z.
  CHECK_THROWS_AS(Automorphism::make(h, {GroupElement::from_coords(h, N, {-1, 0, 0}),
                                         GroupElement::from_coords(h, N, {0, 1, 0}),
                                         GroupElement::from_coords(h, N, {0, 0, 1})}),
                  RelationViolation);

  // x -> x^p respects relations only if z -> z^p, and is then singular mod p.
  CHECK_THROWS_AS(Automorphism::make(h, {GroupElement::from_coords(h, N, {3, 0, 0}),
                                         GroupElement::from_coords(h, N, {0, 1, 0}),
                                         GroupElement::from_coords(h, N, {0, 0, 3})}),
                  NotBijective);

  // Swapping the factors of a rank-2 abelian group moves L = <a_2>.
  auto a2 = GroupSpec::abelian(3, 2, 1, 1);
  CHECK_THROWS_AS(Automorphism::make(a2, {GroupElement::from_coords(a2, N, {0, 1}),
                                          GroupElement::from_coords(a2, N, {1, 0})}),
                  SubgroupNotPreserved);

  // Declared order is verified at precision.
  CHECK_THROWS_AS(Automorphism::make(h, {GroupElement::from_coords(h, N, {-1, 0, 0}),
                                         GroupElement::from_coords(h, N, {0, -1, 0}),
                                         GroupElement::from_coords(h, N, {0, 0, 1})},
                                     3),
                  OrderMismatch);
}

TEST_CASE("algebra extension is a ring map") {
  auto h = GroupSpec::heisenberg(2);
  auto sigma = inversion(h);
  CHECK(apply_to_algebra(sigma, AlgebraElement::one(h, N)) == AlgebraElement::one(h, N));

  // sigma(X) = x^{-1} - 1
  auto X = AlgebraElement::b_element(h, N, 0);
  AlgebraElement expect =
      AlgebraElement::from_group(GroupElement::from_coords(h, N, {-1, 0, 0})) -
      AlgebraElement::one(h, N);
  CHECK(apply_to_algebra(sigma, X) == expect);

  Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    AlgebraElement a = AlgebraElement::zero(h, N);
    AlgebraElement b = AlgebraElement::zero(h, N);
    for (int t = 0; t < 2; ++t) {
      a.add_term(random_element(h, N, rng), a.field()->one());
      b.add_term(random_element(h, N, rng), b.field()->one());
    }
    CHECK(apply_to_algebra(sigma, alg_mul(a, b)) ==
          alg_mul(apply_to_algebra(sigma, a), apply_to_algebra(sigma, b)));
  }
}

TEST_CASE("induced matrix on H/L") {
  auto h2 = GroupSpec::heisenberg(2);
  CHECK(induced_matrix(Automorphism::identity(h2, N)).is_identity());

  MatrixZp m = induced_matrix(inversion(h2));
  MatrixZp expect(2, N, 2);
  expect.set(0, 0, -1);
  expect.set(1, 1, -1);
  CHECK(m == expect);

  Rng rng(43);
  auto x = GroupElement::generator(h2, N, 0);
  CHECK(induced_matrix(Automorphism::inner(x)).is_identity());
  CHECK(induced_matrix(Automorphism::inner(random_element(h2, N, rng))).is_identity());
}

TEST_CASE("first congruence subgroup membership") {
  CHECK(in_gamma1(MatrixZp::identity(3, N, 2)));
  MatrixZp m2(2, N, 2);
  m2.set(0, 0, -1);
  m2.set(1, 1, -1);
  CHECK(in_gamma1(m2));  // -1 = 1 mod 2
  MatrixZp m3(3, N, 2);
  m3.set(0, 0, -1);
  m3.set(1, 1, -1);
  CHECK_FALSE(in_gamma1(m3));  // -2 is a unit mod 3
}

TEST_CASE("condition: omega(sigma(x) x^{-1}) > omega(x)") {
  auto h3 = GroupSpec::heisenberg(3);
  PValuation omega = heis_112(h3);

  CHECK(check_condition_1_1(Automorphism::identity(h3, N), omega).all_pass);

  auto h2 = GroupSpec::heisenberg(2);
  PValuation omega2 = heis_112(h2);
  Condition11Report r2 = check_condition_1_1(inversion(h2), omega2);
  CHECK(r2.all_pass);  // sigma(x) x^{-1} = x^{-2}, value 2 > 1

  // Swap automorphism: sigma(x) x^{-1} = y x^{-1} at value 1, not above 1.
  auto swap = Automorphism::make(h3, {GroupElement::from_coords(h3, N, {0, 1, 0}),
                                      GroupElement::from_coords(h3, N, {1, 0, 0}),
                                      GroupElement::from_coords(h3, N, {0, 0, -1})});
  Condition11Report rs = check_condition_1_1(swap, omega);
  CHECK_FALSE(rs.all_pass);
}

TEST_CASE("f-increase test") {
  auto h3 = GroupSpec::heisenberg(3);
  PValuation omega = heis_112(h3);
  FContext ctx{omega, {}, ValueQ(6), nullptr};

  // identity: the difference vanishes, "> D" counts as an increase.
  FIncreaseReport rid = check_f_increase(Automorphism::identity(h3, N), ctx);
  CHECK(rid.all_increase);
  CHECK(rid.conclusive);
  CHECK(rid.entries[0].moved.kind == ValueBound::Kind::Greater);

  auto h2 = GroupSpec::heisenberg(2);
  FContext ctx2{heis_112(h2), {}, ValueQ(8), nullptr};
  CHECK(check_f_increase(inversion(h2), ctx2).all_increase);

  auto swap = Automorphism::make(h3, {GroupElement::from_coords(h3, N, {0, 1, 0}),
                                      GroupElement::from_coords(h3, N, {1, 0, 0}),
                                      GroupElement::from_coords(h3, N, {0, 0, -1})});
  FIncreaseReport rs = check_f_increase(swap, ctx);
  CHECK_FALSE(rs.all_increase);
  CHECK(rs.conclusive);  // a definite non-increase, not a cutoff artifact
}

TEST_CASE("induced matrices are multiplicative") {
  Rng rng(47);
  auto h = GroupSpec::heisenberg(3);
  for (int i = 0; i < 40; ++i) {
    Automorphism a = random_automorphism(h, N, rng);
    Automorphism b = random_automorphism(h, N, rng);
    CHECK(induced_matrix(Automorphism::compose(a, b)) ==
          induced_matrix(b) * induced_matrix(a));
  }
}

TEST_CASE("random automorphisms validate and split by the condition") {
  Rng rng(53);
  auto h = GroupSpec::heisenberg(3);
  PValuation omega = heis_112(h);
  int congruent_pass = 0;
  for (int i = 0; i < 40; ++i) {
    Automorphism s = random_automorphism(h, N, rng, true);
    if (check_condition_1_1(s, omega).all_pass) ++congruent_pass;
  }
  CHECK(congruent_pass == 40);  // head-congruent images always satisfy it

  auto u4 = GroupSpec::unipotent4(3);
  for (int i = 0; i < 20; ++i) CHECK_NOTHROW(random_automorphism(u4, N, rng));
  auto a3 = GroupSpec::abelian(5, 3);
  for (int i = 0; i < 20; ++i) CHECK_NOTHROW(random_automorphism(a3, N, rng));
}

TEST_CASE("w is stable under valuation-preserving automorphisms") {
  Rng rng(59);
  auto h = GroupSpec::heisenberg(3);
  PValuation omega = heis_112(h);
  auto sigma = inversion(h);
  PValuation acted = act(sigma, omega);
  ValueQ D(6);
  for (int i = 0; i < 60; ++i) {
    GroupElement g = random_element(h, N, rng);
    CHECK(acted.eval(g).str() == omega.eval(g).str());
    AlgebraElement x = AlgebraElement::zero(h, N);
    for (int t = 0; t < 2; ++t) x.add_term(random_element(h, N, rng), x.field()->one());
    CHECK(w_value(apply_to_algebra(sigma, x), omega, D).str() ==
          w_value(x, omega, D).str());
  }
}

TEST_CASE("finite order pools") {
  Rng rng(61);
  auto h3 = GroupSpec::heisenberg(3);
  auto pool = finite_order_pool(h3, N, rng, 2);
  CHECK(pool.size() >= 3);  // identity, inversion, rotation at least
  bool has_order3 = false;
  for (const auto& s : pool) {
    REQUIRE(s.declared_order().has_value());
    if (*s.declared_order() == 3) has_order3 = true;
  }
  CHECK(has_order3);

  auto u4 = GroupSpec::unipotent4(3);
  auto pool4 = finite_order_pool(u4, N, rng, 1);
  CHECK(pool4.size() >= 2);
}

TEST_CASE("serialization round-trip") {
  auto h = GroupSpec::heisenberg(2);
  auto sigma = inversion(h);
  auto j = sigma.to_json();
  Automorphism back = Automorphism::from_json(h, nlohmann::json::parse(j.dump()));
  CHECK(back.to_json().dump() == j.dump());
  for (uint32_t i = 0; i < 3; ++i) CHECK(back.image(i) == sigma.image(i));
}

TEST_CASE("an f-increase on the head block forces a w-increase") {
  Rng rng(67);
  auto h = GroupSpec::heisenberg(3);
  PValuation omega = heis_112(h);
  ValueQ D(6);
  FContext ctx{omega, {}, D, nullptr};
  int seen = 0;
  for (int i = 0; i < 60; ++i) {
    Automorphism s = random_automorphism(h, N, rng, rng.coin());
    FIncreaseReport r = check_f_increase(s, ctx);
    if (!r.all_increase) continue;
    ++seen;
    for (uint32_t j = 0; j < h->head_count(); ++j) {
      AlgebraElement bj = AlgebraElement::b_element(h, N, j);
      AlgebraElement diff = apply_to_algebra(s, bj) - bj;
      CHECK(definitely_gt(w_value(diff, omega, D), w_value(bj, omega, D)));
    }
  }
  CHECK(seen > 0);
}
