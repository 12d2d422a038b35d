#include <doctest.h>

#include <numeric>
#include <set>

#include "helpers.hpp"
#include "ptes/errors.hpp"
#include "ptes/unfolding.hpp"

using namespace ptes;
using testing_helpers::poly;

TEST_CASE("unfold") {
  auto F = FieldDesc::make(3, 1);
  UnfoldSpec s12({1, 2});
  auto f = poly(F, 2, {{{1, 1}, 1}, {{1, -1}, 1}});
  auto U = unfold(f, s12, F);
  std::set<IntVec> got;
  for (const auto& t : U.merged.terms) {
    got.insert(t.exp);
    CHECK(t.coeff == F.one());
  }
  CHECK(got == std::set<IntVec>{{1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}});
  CHECK(U.unmerged.terms.size() == 4);

  UnfoldSpec ones({1, 1});
  auto g = poly(F, 2, {{{2, 0}, 1}, {{0, 1}, 2}});
  CHECK(unfold(g, ones, F).merged.terms.size() == 2);
  auto Ug = unfold(g, ones, F).merged;
  auto gm = merge_terms(g, F);
  for (std::size_t i = 0; i < gm.terms.size(); ++i) CHECK(Ug.terms[i].exp == gm.terms[i].exp);

  UnfoldSpec s2({2});
  auto x = poly(F, 1, {{{1}, 1}});
  auto Ux = unfold(x, s2, F).merged;
  REQUIRE(Ux.terms.size() == 2);
  CHECK(Ux.terms[0].exp == IntVec{0, 1});
  CHECK(Ux.terms[1].exp == IntVec{1, 0});

  CHECK_THROWS_AS(unfold(poly(F, 1, {{{1}, 3}}), s2, F), SpecError);
}

TEST_CASE("G is shift invariant") {
  auto F = FieldDesc::make(2, 1);
  for (auto d : {std::vector<unsigned>{1, 2}, {2, 3}, {3, 2, 1}}) {
    UnfoldSpec s(d);
    LaurentPoly f;
    f.nvars = d.size();
    IntVec e1(d.size(), 1), e2(d.size(), 0);
    e2[0] = 1;
    e2.back() = -1;
    f.terms = {{e1, F.one()}, {e2, F.one()}};
    auto G = unfold(f, s, F).merged;
    std::set<IntVec> supp;
    for (const auto& t : G.terms) supp.insert(t.exp);
    for (const auto& t : G.terms) CHECK(supp.count(sigma_act(t.exp, s, 1)));
  }
}

TEST_CASE("sigma action and permutation") {
  UnfoldSpec s({1, 2});
  IntVec u{4, 5, 6};
  CHECK(sigma_act(u, s, 0) == u);
  CHECK(sigma_act(u, s, 1) == IntVec{4, 6, 5});
  UnfoldSpec s23({2, 3});
  IntVec v{1, 2, 3, 4, 5};
  CHECK(sigma_act(v, s23, 6) == v);
  CHECK(sigma_act(sigma_act(v, s23, 1), s23, -1) == v);
  // P^b blocks have order d_i for b coprime to d.
  for (std::int64_t b : {1, 5}) {
    auto w = sigma_act(v, s23, b);
    CHECK(w != v);
    CHECK(sigma_act(v, s23, 2 * b)[0] == v[0]);
    CHECK(sigma_act(v, s23, 3 * b)[2] == v[2]);
  }
  CHECK(perm_cycles(s) == "(0)(1 2)");
}

TEST_CASE("characteristic polynomial of P^b") {
  UnfoldSpec s({1, 2});
  auto r = char_poly_Pb(s, 1);
  CHECK(r.match);
  CHECK(r.product_formula == std::vector<BigInt>{1, -1, -1, 1});
  CHECK(fixed_point_count(s, 3, 1) == 16);
  CHECK_THROWS_AS(char_poly_Pb(s, 2), std::invalid_argument);
  for (auto d : {std::vector<unsigned>{1, 3}, {2, 3}, {2, 2, 3}})
    for (std::int64_t b = 1; b < 7; ++b) {
      UnfoldSpec sp(d);
      if (std::gcd(b, static_cast<std::int64_t>(sp.lcm)) != 1) continue;
      CHECK(char_poly_Pb(sp, b).match);
    }
}

TEST_CASE("fixed points") {
  TowerDesc tower(FieldDesc::make(3, 1));
  UnfoldSpec s({1, 2});
  auto W = fixed_points(s, tower, 1, 1, 1u << 20);
  CHECK(W.points.size() == 16);
  // rho: projection to (y_{1,0}, y_{2,0}) is injective with values in F_3^* x F_9^*.
  std::set<std::pair<FieldElem, FieldElem>> proj;
  for (const auto& y : W.points) {
    proj.insert({y[0], y[1]});
    CHECK(W.field.pow(y[0], 3) == y[0]);
    CHECK(W.field.pow(y[1], 9) == y[1]);
  }
  CHECK(proj.size() == 16);

  UnfoldSpec ones({1, 1});
  auto W1 = fixed_points(ones, tower, 2, 1, 1u << 20);
  CHECK(W1.points.size() == 64);
  for (const auto& y : W1.points)
    for (const auto& c : y) CHECK(W1.field.pow(c, 9) == c);

  CHECK_THROWS_AS(fixed_points(s, tower, 1, 2, 1u << 20), std::invalid_argument);
  CHECK_THROWS_AS(fixed_points(s, tower, 3, 1, 100), CapExceeded);
}

TEST_CASE("character orthogonality") {
  TowerDesc tower(FieldDesc::make(3, 1));
  UnfoldSpec s({1, 2});
  auto W = fixed_points(s, tower, 1, 1, 1u << 20);
  auto v0 = character_sum_check(s, W, 3, {0, 0, 0});
  CHECK(v0.full);
  CHECK(v0.in_lattice);
  // (3 P^{-1} - I) e_1 with e_1 the second coordinate: P^{-1} e_{(2,0)} = e_{(2,1)}.
  auto v1 = character_sum_check(s, W, 3, {0, -1, 3});
  CHECK(v1.full);
  CHECK(v1.in_lattice);
  auto v2 = character_sum_check(s, W, 3, {1, 0, 0});
  CHECK(v2.zero);
  CHECK(!v2.in_lattice);
  for (std::int64_t a = -2; a <= 2; ++a)
    for (std::int64_t b = -2; b <= 2; ++b)
      for (std::int64_t c = -2; c <= 2; ++c) CHECK(character_sum_check(s, W, 3, {a, b, c}).agree());
}

TEST_CASE("exterior traces and the Koszul identity") {
  UnfoldSpec s({1, 2});
  auto tr = exterior_traces(s, 1);
  CHECK(tr == std::vector<BigInt>{1, 1, -1, -1});
  // Read-off from the characteristic polynomial: Tr(wedge^m) = (-1)^m [t^{N-m}].
  for (auto d : {std::vector<unsigned>{1, 2}, {1, 3}, {2, 3}, {1}, {3, 2, 2}}) {
    UnfoldSpec sp(d);
    auto cp = char_poly_Pb(sp, 1).explicit_matrix;
    auto et = exterior_traces(sp, 1);
    for (std::size_t m = 0; m <= sp.N; ++m) CHECK(et[m] == (m % 2 ? -cp[sp.N - m] : cp[sp.N - m]));
    for (unsigned k = 1; k <= 3; ++k) {
      auto [lhs, rhs] = koszul_sides(sp, 1, boost::multiprecision::pow(BigInt(3), k));
      CHECK(lhs == rhs);
      CHECK(rhs == fixed_point_count(sp, 3, k));
    }
  }
}

TEST_CASE("degeneracy witness") {
  auto F = FieldDesc::make(3, 1);
  TowerDesc tower(F);
  UnfoldSpec s({1, 2});
  auto G = unfold(poly(F, 2, {{{1, 1}, 1}, {{1, -1}, 1}}), s, F).merged;
  std::vector<IntVec> supp;
  for (const auto& t : G.terms) supp.push_back(t.exp);
  auto P = newton_polytope(supp, 3);
  auto w = degeneracy_witness(G, P, tower, 2, 1u << 20);
  REQUIRE(w);
  // Re-verify the certificate independently.
  const auto& Fm = w->field;
  for (std::size_t k = 0; k < 3; ++k) {
    FieldElem acc = Fm.zero();
    for (const auto& t : G.terms) {
      bool on_face = false;
      for (std::size_t i = 0; i < P.points.size(); ++i) on_face |= (w->face.points >> i & 1) && P.points[i] == t.exp;
      if (!on_face) continue;
      FieldElem m = Fm.from_int(t.exp[k]);
      for (std::size_t c = 0; c < 3; ++c) {
        if (t.exp[c] > 0) m = Fm.mul(m, Fm.pow(w->point[c], t.exp[c]));
        if (t.exp[c] < 0) m = Fm.mul(m, Fm.pow(Fm.inv(w->point[c]), -t.exp[c]));
      }
      acc = Fm.add(acc, m);
    }
    CHECK(Fm.is_zero(acc));
  }

  UnfoldSpec one({1});
  auto mono = unfold(poly(F, 1, {{{1}, 1}}), one, F).merged;
  CHECK(!degeneracy_witness(mono, newton_polytope({{1}}, 1), tower, 2, 1u << 20));

  UnfoldSpec ones({1, 1});
  auto diag = unfold(poly(F, 2, {{{2, 0}, 1}, {{0, 2}, 1}}), ones, F).merged;
  CHECK(!degeneracy_witness(diag, newton_polytope({{2, 0}, {0, 2}}, 2), tower, 2, 1u << 20));
}
