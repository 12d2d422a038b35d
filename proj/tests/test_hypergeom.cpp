#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "ptes/dwork.hpp"
#include "ptes/hypergeom.hpp"

using namespace ptes;
using testing_helpers::poly;

namespace {
constexpr std::uint64_t kCap = 1u << 24;
}

TEST_CASE("A_v coefficients") {
  auto F3 = FieldDesc::make(3, 1);
  auto ring = make_ring(F3, 8);
  const RingData& r = *ring;
  auto a0 = a_v_coeffs({{1}}, {0}, 5, r, kCap);
  CHECK(a0.c.size() == 1);
  CHECK(a0.at({0}, r).equals(r.one()));
  for (unsigned m = 1; m <= 5; ++m) {
    auto am = a_v_coeffs({{1}}, {static_cast<std::int64_t>(m)}, 5, r, kCap);
    CHECK(am.c.size() == 1);
    CHECK(am.at({static_cast<std::int64_t>(m)}, r).equals(r.gamma_pow_over_factorial(m)));
  }
  auto kl = a_v_coeffs({{1}, {-1}}, {0}, 12, r, kCap);
  CHECK(kl.c.size() == 7);
  for (std::int64_t k = 0; k <= 6; ++k) {
    RingElem g = r.gamma_pow_over_factorial(static_cast<unsigned>(k));
    CHECK(kl.at({k, k}, r).equals(g * g));
  }
}

TEST_CASE("balanced tuples") {
  std::vector<IntVec> supp{{1, 0}, {-1, 0}, {0, 1}};
  auto equal = balanced_tuples(UnfoldSpec({2, 2}), supp, 6, kCap);
  REQUIRE(equal.size() == 1);
  CHECK(equal[0].w == std::vector<IntVec>{{0, 0}, {0, 0}});

  auto t = balanced_tuples(UnfoldSpec({1, 2}), supp, 6, kCap);
  CHECK(t.size() == 7);
  CHECK(t[0].w == std::vector<IntVec>{{0, 0}, {0, 0}});
  std::set<std::int64_t> ks;
  for (const auto& x : t) {
    CHECK(is_balanced(x, UnfoldSpec({1, 2})));
    CHECK(x.w[0][1] == 0);
    CHECK(x.w[1] == IntVec{-x.w[0][0], 0});
    ks.insert(x.w[0][0]);
  }
  CHECK(ks == std::set<std::int64_t>{-3, -2, -1, 0, 1, 2, 3});

  auto t3 = balanced_tuples(UnfoldSpec({1, 3}), {{1, 1}, {0, -1}, {-1, 0}}, 4, kCap);
  for (const auto& x : t3) CHECK(is_balanced(x, UnfoldSpec({1, 3})));
  CHECK(t3.size() > 1);
}

TEST_CASE("G_0 series") {
  auto F3 = FieldDesc::make(3, 1);
  auto ring = make_ring(F3, 8);
  const RingData& r = *ring;
  std::vector<IntVec> supp{{1, 0}, {-1, 1}, {0, -1}};
  auto g00 = g0_series(UnfoldSpec({1, 2}), supp, 0, r, kCap);
  CHECK(g00.c.size() == 1);
  CHECK(g00.at({0, 0, 0}, r).equals(r.one()));

  auto g = g0_series(UnfoldSpec({2, 2}), supp, 9, r, kCap);
  auto a0 = a_v_coeffs(supp, {0, 0}, 9, r, kCap);
  auto sq = lambda_mul(a0, a0, r);
  CHECK(g.c.size() == sq.c.size());
  for (const auto& [k, c] : sq.c) CHECK(g.at(k, r).equals(c));

  // The degenerate example: every A_{(k,0)} A_{(-k,0)} vanishes except k = 0.
  auto g8 = g0_series(UnfoldSpec({1, 2}), {{1, 1}, {1, -1}}, 12, r, kCap);
  CHECK(g8.c.size() == 1);
}

TEST_CASE("ratio series identities") {
  auto F3 = FieldDesc::make(3, 1);
  auto ring = make_ring(F3, 8);
  const RingData& r = *ring;
  std::vector<IntVec> supp{{1}, {-1}};
  auto g0 = g0_series(UnfoldSpec({1}), supp, 36, r, kCap);
  auto F = ratio_series(g0, r);
  // F(L) F(L^p) = G_0(L) / G_0(L^{p^2}) as truncated series.
  auto lhs = lambda_mul(F, lambda_dilate(F, 3, 36), r);
  LambdaSeries low = g0;
  low.deg = 4;
  for (auto it = low.c.begin(); it != low.c.end();)
    it = it->first[0] + it->first[1] > 4 ? low.c.erase(it) : std::next(it);
  auto rhs = lambda_mul(g0, lambda_dilate(lambda_inverse(low, r), 9, 36), r);
  CHECK(lhs.c.size() == rhs.c.size());
  for (const auto& [k, c] : rhs.c) CHECK(lhs.at(k, r).equals(c));

  // Inside the open disk G_0 converges, and the ratio of values matches the ratio series.
  // At Lambda = pi the degree-k terms have pi-order >= k, so Deg >= (p-1)M is exact.
  auto big = g0_series(UnfoldSpec({1}), supp, 20, r, kCap);
  auto Fbig = ratio_series(big, r);
  std::vector<RingElem> at{r.pi(), r.pi()}, atp{r.pi().pow(3), r.pi().pow(3)};
  RingElem quotient = lambda_eval(big, at, r) * lambda_eval(big, atp, r).inverse();
  CHECK(quotient.equals(lambda_eval(Fbig, at, r)));
}

TEST_CASE("unit root by the hypergeometric formula") {
  auto F3 = FieldDesc::make(3, 1);
  auto ring = make_ring(F3, 8);
  const RingData& r = *ring;
  auto x = unit_root_hypergeom(poly(F3, 1, {{{1}, 1}}), UnfoldSpec({1}), r, 6, 3, kCap);
  CHECK(x.lambda.equals(r.one()));

  auto kl = unit_root_hypergeom(poly(F3, 1, {{{1}, 1}, {{-1}, 1}}), UnfoldSpec({1}), r, 16, 3, kCap);
  CHECK(kl.one_unit);
  CHECK((kl.lambda * kl.lambda - kl.lambda + r.from_int(3)).ord_pi() >= 10);
  CHECK(kl.trace.size() == 2);

  auto deg = unit_root_hypergeom(poly(F3, 2, {{{1, 1}, 1}, {{1, -1}, 1}}), UnfoldSpec({1, 2}), r, 12, 3, kCap);
  CHECK(deg.lambda.equals(r.one()));

  // a = 2: Kloosterman over F_4 against power iteration.
  auto F4 = FieldDesc::make(2, 2);
  LaurentPoly k4;
  k4.nvars = 1;
  k4.terms = {{{1}, F4.one()}, {{-1}, F4.gen()}};
  auto ctx = make_context(k4, UnfoldSpec({1}), F4, 8, kCap);
  auto pi = unit_root_power_iteration(build_op(ctx, Rational(8), kCap), ctx.spec);
  auto h = unit_root_hypergeom(k4, UnfoldSpec({1}), *ctx.ring, 32, 2, kCap);
  CHECK((h.lambda - pi.lambda).ord_pi() >= 4);
  CHECK(h.one_unit);
}
