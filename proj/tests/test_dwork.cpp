#include <doctest.h>

#include "helpers.hpp"
#include "ptes/dwork.hpp"
#include "ptes/errors.hpp"

using namespace ptes;
using testing_helpers::poly;

namespace {

constexpr std::uint64_t kCap = 1u << 24;

LaurentPoly degenerate_example(const FieldDesc& F) { return poly(F, 2, {{{1, 1}, 1}, {{1, -1}, 1}}); }

}  // namespace

TEST_CASE("coefficients of F") {
  auto F3 = FieldDesc::make(3, 1);
  // Single term 2x: B_m = theta_m (-1)^m since the Teichmuller lift of 2 is -1.
  auto ctx1 = make_context(poly(F3, 1, {{{1}, 2}}), UnfoldSpec({1}), F3, 6, kCap);
  const RingData& r1 = *ctx1.ring;
  for (std::size_t m = 0; m < r1.theta.size(); ++m) {
    RingElem expect = m % 2 ? -r1.theta[m] : r1.theta[m];
    CHECK(ctx1.F.at({static_cast<std::int64_t>(m)}, r1).equals(expect));
  }
  CHECK(ctx1.F.at({-1}, r1).is_zero());

  auto ctx = make_context(degenerate_example(F3), UnfoldSpec({1, 2}), F3, 6, kCap);
  const RingData& ring = *ctx.ring;
  CHECK((ctx.F.at({0, 0, 0}, ring) - ring.one()).ord_pi() >= 1);
  for (const auto& [u, c] : ctx.F.c) {
    auto w = weight(ctx.delta, u);
    REQUIRE(w);
    CHECK(Rational(c.ord_pi()) >= *w);
    auto pu = sigma_act(u, ctx.spec, 1);
    CHECK(ctx.F.at(pu, ring).canonical() == c.canonical());
  }
  CHECK(fa_coeffs(ctx.F, 1, ring, kCap).c.size() == ctx.F.c.size());
}

TEST_CASE("F_a over F_4 for a single monomial") {
  auto F4 = FieldDesc::make(2, 2);
  FieldElem c = F4.gen();
  LaurentPoly f;
  f.nvars = 1;
  f.terms = {{{1}, c}};
  auto ctx = make_context(f, UnfoldSpec({1}), F4, 8, kCap);
  const RingData& ring = *ctx.ring;
  RingElem ch = ring.teichmuller(c), ch2 = ch.frobenius();
  // C_n = sum_{m + 2m' = n} theta_m theta_{m'} c^m (c^tau)^{m'}.
  for (std::int64_t n = 0; n < 7; ++n) {
    RingElem expect = ring.zero();
    for (std::int64_t mp = 0; 2 * mp <= n; ++mp) {
      std::int64_t m = n - 2 * mp;
      expect += ring.theta[m] * ring.theta[mp] * ch.pow(m) * ch2.pow(mp);
    }
    CHECK(ctx.Fa.at({n}, ring).equals(expect));
  }
  CHECK((ctx.Fa.at({0}, ring) - ring.one()).ord_pi() >= 1);
}

TEST_CASE("alpha matrix") {
  auto F3 = FieldDesc::make(3, 1);
  auto ctx = make_context(poly(F3, 1, {{{1}, 1}}), UnfoldSpec({1}), F3, 6, kCap);
  const RingData& ring = *ctx.ring;
  auto op = build_op(ctx, Rational(1), kCap);
  REQUIRE(op.basis.size() == 2);
  CHECK(op.A.get(0, 0).equals(ring.theta[0]));
  CHECK(op.A.get(0, 1).is_zero());
  CHECK(op.A.get(1, 0).equals(ring.theta[3]));
  CHECK(op.A.get(1, 1).equals(ring.theta[2]));

  auto ctx2 = make_context(degenerate_example(F3), UnfoldSpec({1, 2}), F3, 6, kCap);
  auto op2 = build_op(ctx2, Rational(4), kCap);
  CHECK((op2.A.get(0, 0) - ctx2.ring->one()).ord_pi() >= 1);
  for (std::size_t v = 0; v < op2.basis.size(); ++v)
    for (auto u : op2.A.rows[v].cols) {
      Rational bound = Rational(3) * op2.basis.weights[v] - op2.basis.weights[u];
      CHECK(Rational(op2.A.get(v, u).ord_pi()) >= bound);
    }
}

TEST_CASE("twisted trace formula") {
  auto F3 = FieldDesc::make(3, 1);
  TowerDesc T3(F3);
  UnfoldSpec s12({1, 2});
  auto f = degenerate_example(F3);
  auto ctx = make_context(f, s12, F3, 6, kCap);
  auto op = build_op(ctx, Rational(6), kCap);
  for (unsigned k = 1; k <= 3; ++k) {
    auto S = brute_sum(f, s12, T3, k, kCap).S;
    auto c = trace_formula_check(op, s12, 1, k, S);
    CHECK(c.zero);
    CHECK(c.prec >= 6);
    if (k <= 2) CHECK(trace_by_coefficients(ctx, 1, k, kCap).equals(c.trace));
  }
  CHECK(twist_det(s12, 3, 2, 1) == BigInt(8 * 80));

  // d = (1,3) over F_2, both units b = 1, 2 modulo 3.
  auto F2 = FieldDesc::make(2, 1);
  TowerDesc T2(F2);
  UnfoldSpec s13({1, 3});
  auto g = poly(F2, 2, {{{1, 1}, 1}, {{0, -1}, 1}});
  auto ctx2 = make_context(g, s13, F2, 6, kCap);
  auto op2 = build_op(ctx2, Rational(6), kCap);
  for (unsigned k = 1; k <= 2; ++k) {
    auto S = brute_sum(g, s13, T2, k, kCap).S;
    auto c1 = trace_formula_check(op2, s13, 1, k, S);
    auto c2 = trace_formula_check(op2, s13, 2, k, S);
    CHECK(c1.zero);
    CHECK(c2.zero);
    CHECK(c1.trace.equals(c2.trace));
    CHECK(trace_by_coefficients(ctx2, 2, k, kCap).equals(c2.trace));
  }
  CHECK_THROWS_AS(twisted_trace(op2, s13, 3, 1), std::invalid_argument);

  // a = 2: Kloosterman over F_4.
  auto F4 = FieldDesc::make(2, 2);
  TowerDesc T4(F4);
  LaurentPoly kl;
  kl.nvars = 1;
  kl.terms = {{{1}, F4.one()}, {{-1}, F4.gen()}};
  auto ctx4 = make_context(kl, UnfoldSpec({1}), F4, 8, kCap);
  auto op4 = build_op(ctx4, Rational(8), kCap);
  for (unsigned k = 1; k <= 2; ++k) {
    auto S = brute_sum(kl, UnfoldSpec({1}), T4, k, kCap).S;
    CHECK(trace_formula_check(op4, UnfoldSpec({1}), 1, k, S).zero);
  }
}

TEST_CASE("twisted Fredholm determinant and the factorization") {
  auto F3 = FieldDesc::make(3, 1);
  TowerDesc T3(F3);
  struct Case {
    LaurentPoly f;
    std::vector<unsigned> d;
  };
  std::vector<Case> cases = {{poly(F3, 1, {{{1}, 1}}), {1}}, {poly(F3, 2, {{{1, 0}, 1}, {{0, 1}, 1}}), {1, 1}}};
  for (const auto& c : cases) {
    UnfoldSpec spec(c.d);
    auto ctx = make_context(c.f, spec, F3, 6, kCap);
    auto op = build_op(ctx, Rational(6), kCap);
    std::vector<RingElem> traces;
    std::vector<CyclotomicInt> S;
    for (unsigned k = 1; k <= 3; ++k) {
      traces.push_back(twisted_trace(op, spec, 1, k));
      S.push_back(brute_sum(c.f, spec, T3, k, kCap).S);
    }
    auto det = twisted_fredholm(traces);
    REQUIRE(det.size() == 4);
    CHECK(det[0].equals(ctx.ring->one()));
    CHECK(det[1].equals(-traces[0]));
    auto rep = verify_factorization(l_series(S), det, c.d, 3, *ctx.ring);
    CHECK(rep.zero);
    CHECK(rep.min_prec >= 5);
    // Both examples have L^{(-1)^{n-1}} = 1 - T.
    CHECK(rep.lhs[1].equals(-ctx.ring->one()));
    CHECK(rep.lhs[2].is_zero());
  }
}

TEST_CASE("unit root by power iteration") {
  auto F3 = FieldDesc::make(3, 1);
  auto ctx = make_context(poly(F3, 1, {{{1}, 1}}), UnfoldSpec({1}), F3, 6, kCap);
  auto pi = unit_root_power_iteration(build_op(ctx, Rational(6), kCap), ctx.spec);
  CHECK(pi.structure_ok);
  CHECK(pi.lambda.equals(ctx.ring->one()));

  auto kctx = make_context(poly(F3, 1, {{{1}, 1}, {{-1}, 1}}), UnfoldSpec({1}), F3, 8, kCap);
  const RingData& ring = *kctx.ring;
  auto a = unit_root_power_iteration(build_op(kctx, Rational(8), kCap), kctx.spec);
  auto b = unit_root_power_iteration(build_op(kctx, Rational(12), kCap), kctx.spec);
  CHECK(a.one_unit);
  CHECK(a.lambda.equals(b.lambda));
  CHECK((a.lambda * a.lambda - a.lambda + ring.from_int(3)).is_zero());
  CHECK(a.eigvec[0].equals(ring.one()));

  auto dctx = make_context(poly(F3, 2, {{{1, 1}, 1}, {{1, -1}, 1}}), UnfoldSpec({1, 2}), F3, 6, kCap);
  auto d = unit_root_power_iteration(build_op(dctx, Rational(6), kCap), dctx.spec);
  CHECK(d.structure_ok);
  CHECK(d.sigma_fixed);
  CHECK(d.lambda.equals(dctx.ring->one()));
}

TEST_CASE("shift commutes with alpha") {
  auto F3 = FieldDesc::make(3, 1);
  auto ctx = make_context(degenerate_example(F3), UnfoldSpec({1, 2}), F3, 6, kCap);
  auto op = build_op(ctx, Rational(6), kCap);
  auto c = sigma_commutation_check(op, ctx.spec);
  CHECK(c.compared == op.A.nnz());
  CHECK(c.mismatches == 0);

  auto ctx1 = make_context(poly(F3, 2, {{{1, 2}, 1}, {{-1, 1}, 2}}), UnfoldSpec({1, 1}), F3, 4, kCap);
  auto c1 = sigma_commutation_check(build_op(ctx1, Rational(4), kCap), ctx1.spec);
  CHECK(c1.mismatches == 0);
}

TEST_CASE("differential operators") {
  auto F3 = FieldDesc::make(3, 1);
  auto ctx = make_context(degenerate_example(F3), UnfoldSpec({1, 2}), F3, 6, kCap);
  const RingData& ring = *ctx.ring;
  for (std::size_t var = 0; var < 3; ++var) {
    auto h = log_derivative_H(ctx, var);
    SeriesCoeffs one;
    one.c.emplace(IntVec{0, 0, 0}, ring.one());
    auto d1 = differential_apply(ctx, var, one, Rational(100));
    CHECK(d1.size() == h.size());
    for (const auto& [w, c] : h.c) CHECK(d1.at(w, ring).equals(c));
    // gamma_0 = gamma at the support of G.
    for (const auto& t : ctx.lifted)
      if (t.exp[var]) CHECK(h.c.count(t.exp));

    IntVec u{2, 1, 0};
    SeriesCoeffs mono;
    mono.c.emplace(u, ring.one());
    auto du = differential_apply(ctx, var, mono, Rational(100));
    CHECK(du.at(u, ring).equals(ring.from_int(u[var])));
    for (const auto& [e, c] : du.c)
      if (e != u) CHECK(*weight(ctx.delta, e) > *weight(ctx.delta, u) - 1);
  }
  auto op = build_op(ctx, Rational(8), kCap);
  for (std::size_t var = 0; var < 3; ++var) {
    auto c = commutation_check(ctx, op, var);
    CHECK(c.compared > 0);
    CHECK(c.zero);
    CHECK(c.residual >= 6);
  }
}

TEST_CASE("sum over Teichmuller points of W") {
  auto F3 = FieldDesc::make(3, 1);
  TowerDesc T3(F3);
  UnfoldSpec s12({1, 2});
  auto f = degenerate_example(F3);
  auto S1 = brute_sum(f, s12, T3, 1, kCap).S;
  auto r = w_set_sum(f, s12, T3, 1, 6, S1, kCap);
  CHECK(r.points == 16);
  CHECK(r.zero);

  auto F2 = FieldDesc::make(2, 1);
  TowerDesc T2(F2);
  auto g = poly(F2, 2, {{{1, 1}, 1}, {{-1, 0}, 1}});
  for (unsigned k = 1; k <= 2; ++k) {
    auto S = brute_sum(g, s12, T2, k, kCap).S;
    CHECK(w_set_sum(g, s12, T2, k, 6, S, kCap).zero);
  }
}
