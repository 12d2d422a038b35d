#include "ptes/report.hpp"

#include <algorithm>
#include <map>

#include "ptes/dwork.hpp"
#include "ptes/errors.hpp"
#include "ptes/hypergeom.hpp"
#include "ptes/padics.hpp"
#include "ptes/polytope.hpp"
#include "ptes/sums_l.hpp"
#include "ptes/unfolding.hpp"

namespace ptes {

using nlohmann::json;

namespace {

json big(const BigInt& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(n);
  return n.str();
}

json rat(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return big(boost::multiprecision::numerator(r));
  return to_string(r);
}

json big_vec(const std::vector<BigInt>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(big(x));
  return out;
}

json rat_vec(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(rat(x));
  return out;
}

json field_elem(const FieldDesc& F, const FieldElem& x) {
  json out = json::array();
  for (unsigned i = 0; i < F.degree(); ++i) out.push_back(x.c[i]);
  return out;
}

json ring_elem(const RingElem& x) {
  json coords = json::array();
  for (auto v : x.canonical()) coords.push_back(v);
  return {{"coords", coords}, {"prec_pi", x.prec()}};
}

json cyclo_int(const CyclotomicInt& x) { return big_vec(x.coords()); }

// Rational coordinates over a common denominator.
json cyclo_num(const CycloNum& x) {
  BigInt den = 1;
  for (const auto& c : x.coords()) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(c));
  json num = json::array();
  for (const auto& c : x.coords()) num.push_back(big(boost::multiprecision::numerator(c * Rational(den))));
  return {{"num", num}, {"den", big(den)}};
}

json cyclo_poly(const std::vector<CycloNum>& p) {
  json out = json::array();
  for (const auto& c : p) out.push_back(cyclo_num(c));
  return out;
}

json poly_terms(const LaurentPoly& f, const FieldDesc& F) {
  json out = json::array();
  for (const auto& t : f.terms) out.push_back({{"exponents", t.exp}, {"coeff", field_elem(F, t.coeff)}});
  return out;
}

Rational prec_p(const RingElem& x) { return Rational(x.prec(), static_cast<long long>(x.ring()->e)); }

// ord_p(x - y), capped at the common precision.
Rational agreement(const RingElem& x, const RingElem& y) { return (x - y).ord_p(); }

json header(const ProblemSpec& s) {
  return {{"name", s.name},
          {"p", s.p},
          {"a", s.a},
          {"q", s.field.order()},
          {"modulus", s.field.modulus()},
          {"d", s.d},
          {"f", poly_terms(s.f, s.field)},
          {"legend",
           {{"field", "little-endian coordinates over the generator of the residue field"},
            {"cyclotomic", "coordinates over 1, zeta, ..., zeta^(p-2)"},
            {"ring", "coords[j*a+i] multiplies pi^j x^i, each modulo p^M; prec_pi is the precision in pi-units"}}}};
}

void log(const RunOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

std::vector<CyclotomicInt> sums_upto(const ProblemSpec& s, TowerDesc& tower, unsigned K, const RunOptions& o) {
  std::vector<CyclotomicInt> S;
  auto spec = s.unfold_spec();
  for (unsigned k = 1; k <= K; ++k) {
    log(o, "brute_sum k=" + std::to_string(k));
    S.push_back(brute_sum(s.f, spec, tower, k, s.cap).S);
  }
  return S;
}

json l_coeffs(const LSeries& L) {
  json out = json::array();
  for (const auto& c : L) out.push_back(cyclo_num(c));
  return out;
}

json slopes(const NewtonSlopes& n) { return {{"slopes", rat_vec(n.slopes)}, {"unit_count", n.unit_count}}; }

struct OpBundle {
  DworkContext ctx;
  TruncOp op;
};

OpBundle build(const ProblemSpec& s, const RunOptions& o) {
  log(o, "building F_a and the alpha matrix");
  auto ctx = make_context(s.f, s.unfold_spec(), s.field, s.precision, s.cap);
  auto op = build_op(ctx, s.effective_w_cut(), s.cap);
  log(o, "basis " + std::to_string(op.basis.size()) + ", nnz " + std::to_string(op.A.nnz()));
  return {std::move(ctx), std::move(op)};
}

json op_info(const ProblemSpec& s, const OpBundle& b) {
  return {{"M", s.precision},
          {"w_cut", rat(s.effective_w_cut())},
          {"basis_size", b.op.basis.size()},
          {"nnz", b.op.A.nnz()},
          {"series_terms", b.ctx.Fa.size()},
          {"matrix_prec_pi", b.op.A.prec},
          {"tail_prec_pi", b.op.tail_prec}};
}

}  // namespace

Report run_unfold(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  auto G = unfold(s.f, spec, s.field);
  TowerDesc tower(s.field);
  r.body["N"] = spec.N;
  r.body["lcm"] = spec.lcm;
  r.body["G"] = poly_terms(G.merged, s.field);
  r.body["P_cycles"] = perm_cycles(spec);
  json twists = json::array();
  for (auto b : s.twists()) {
    auto cp = char_poly_Pb(spec, b);
    json jb = {{"b", b},
               {"char_poly", {{"product_formula", big_vec(cp.product_formula)},
                              {"explicit", big_vec(cp.explicit_matrix)},
                              {"match", cp.match}}},
               {"exterior_traces", big_vec(exterior_traces(spec, b))}};
    if (!cp.match) r.status = kIdentityFailure;
    json koszul = json::array(), fixed = json::array();
    for (unsigned k = 1; k <= s.kmax; ++k) {
      auto [alt, det] = koszul_sides(spec, b, BigInt(ipow(s.field.order(), k)));
      koszul.push_back({{"k", k}, {"alternating", big(alt)}, {"det", big(det)}, {"match", alt == det}});
      if (alt != det) r.status = kIdentityFailure;
      BigInt count = fixed_point_count(spec, s.field.order(), k);
      json row = {{"k", k}, {"formula", big(count)}};
      if (count <= s.cap) {
        log(o, "fixed points k=" + std::to_string(k) + " b=" + std::to_string(b));
        auto W = fixed_points(spec, tower, k, b, s.cap);
        row["enumerated"] = W.points.size();
        row["match"] = BigInt(W.points.size()) == count;
        if (BigInt(W.points.size()) != count) r.status = kIdentityFailure;
      } else {
        row["enumerated"] = nullptr;
        row["skipped"] = "count exceeds cap";
      }
      fixed.push_back(row);
    }
    jb["koszul"] = koszul;
    jb["fixed_points"] = fixed;
    twists.push_back(jb);
  }
  r.body["twists"] = twists;
  return r;
}

Report run_polytope_info(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  auto G = unfold(s.f, spec, s.field);
  std::vector<IntVec> supp;
  for (const auto& t : G.merged.terms) supp.push_back(t.exp);
  auto P = newton_polytope(supp, spec.N);
  json verts = json::array();
  for (auto i : P.vertices) verts.push_back(P.points[i]);
  json facets = json::array();
  for (const auto& f : P.facets) facets.push_back({{"normal", rat_vec(f.normal)}, {"offset", f.offset}});
  auto vol = normalized_volume(P);
  r.body["N"] = spec.N;
  r.body["dim"] = P.dim;
  r.body["vertices"] = verts;
  r.body["facets"] = facets;
  r.body["D"] = denominator_D(P);
  r.body["normalized_volume"] = {{"value", big(vol.value)}, {"lower_dimensional", vol.lower_dimensional}};
  log(o, "enumerating the monoid");
  auto basis = enumerate_monoid(P, s.effective_w_cut(), s.cap);
  std::map<Rational, std::size_t> shells;
  for (const auto& w : basis.weights) ++shells[w];
  json js = json::array();
  for (const auto& [w, c] : shells) js.push_back({{"weight", rat(w)}, {"count", c}});
  r.body["w_cut"] = rat(s.effective_w_cut());
  r.body["shells"] = js;
  return r;
}

Report run_sums(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  TowerDesc tower(s.field);
  json rows = json::array();
  for (unsigned k = 1; k <= s.kmax; ++k) {
    log(o, "brute_sum k=" + std::to_string(k));
    auto bs = brute_sum(s.f, spec, tower, k, s.cap);
    BigInt total = 0;
    for (auto h : bs.histogram) total += h;
    BigInt expected = 1;
    for (auto di : s.d) expected *= BigInt(ipow(s.field.order(), k * di)) - 1;
    bool ok = total == bs.count && bs.count == expected;
    if (!ok) r.status = kIdentityFailure;
    rows.push_back({{"k", k},
                    {"histogram", bs.histogram},
                    {"S", cyclo_int(bs.S)},
                    {"count", big(bs.count)},
                    {"conservation", ok}});
  }
  r.body["sums"] = rows;
  return r;
}

Report run_lfunc(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  TowerDesc tower(s.field);
  auto S = sums_upto(s, tower, s.kmax, o);
  json js = json::array();
  for (const auto& x : S) js.push_back(cyclo_int(x));
  r.body["S"] = js;
  auto L = l_series(S);
  r.body["l_series"] = l_coeffs(L);
  auto rf = reconstruct_rational(L, s.kmax / 2);
  if (!rf) {
    r.body["rational"] = nullptr;
    r.body["note"] = "no [m/m] approximant with 2m+1 <= K reproduces the series";
    return r;
  }
  r.body["rational"] = {{"num", cyclo_poly(rf->num)}, {"den", cyclo_poly(rf->den)}};
  unsigned kp = s.kmax + 1;
  try {
    log(o, "prediction check k=" + std::to_string(kp));
    auto oracle = brute_sum(s.f, spec, tower, kp, s.cap).S;
    bool ok = predict_and_check(*rf, kp, oracle);
    r.body["prediction"] = {{"k", kp}, {"predicted", cyclo_num(predict_sum(*rf, kp))}, {"oracle", cyclo_int(oracle)},
                            {"match", ok}};
    if (!ok) r.status = kIdentityFailure;
  } catch (const CapExceeded& e) {
    r.body["prediction"] = {{"k", kp}, {"skipped", e.what()}};
  }
  auto ring = make_ring(s.field, s.precision);
  auto ur = unit_reciprocal_roots(*rf, *ring, s.d.size());
  json u = {{"num", slopes(ur.num)}, {"den", slopes(ur.den)}, {"in_numerator", ur.in_numerator},
            {"one_unit", ur.one_unit}};
  u["unit_root"] = ur.unit_root ? ring_elem(*ur.unit_root) : json(nullptr);
  r.body["newton"] = u;
  return r;
}

Report run_trace_check(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  TowerDesc tower(s.field);
  auto b = build(s, o);
  r.body["operator"] = op_info(s, b);
  auto S = sums_upto(s, tower, s.kmax, o);
  json checks = json::array();
  std::map<unsigned, std::vector<RingElem>> by_k;
  for (auto tw : s.twists()) {
    for (unsigned k = 1; k <= s.kmax; ++k) {
      log(o, "trace k=" + std::to_string(k) + " b=" + std::to_string(tw));
      auto tc = trace_formula_check(b.op, spec, tw, k, S[k - 1]);
      by_k[k].push_back(tc.trace);
      json row = {{"k", k},
                  {"b", tw},
                  {"det", big(twist_det(spec, s.field.order(), k, tw))},
                  {"trace", ring_elem(tc.trace)},
                  {"lhs", ring_elem(tc.lhs)},
                  {"rhs", ring_elem(tc.rhs)},
                  {"residual_p", rat(tc.residual)},
                  {"prec_p", rat(tc.prec)},
                  {"pass", tc.zero}};
      if (!tc.zero) r.status = kIdentityFailure;
      try {
        auto tcoef = trace_by_coefficients(b.ctx, tw, k, s.cap);
        auto ag = agreement(tcoef, tc.trace);
        bool ok = (tcoef - tc.trace).is_zero();
        row["coefficient_route"] = {{"trace", ring_elem(tcoef)}, {"agreement_p", rat(ag)}, {"match", ok}};
        if (!ok) r.status = kIdentityFailure;
      } catch (const CapExceeded& e) {
        row["coefficient_route"] = {{"skipped", e.what()}};
      }
      checks.push_back(row);
    }
  }
  r.body["checks"] = checks;

  json indep = json::array();
  for (const auto& [k, ts] : by_k) {
    bool same = true;
    Rational worst = prec_p(ts[0]);
    for (const auto& t : ts) {
      same = same && (t - ts[0]).is_zero();
      worst = std::min(worst, agreement(t, ts[0]));
    }
    indep.push_back({{"k", k}, {"identical", same}, {"agreement_p", rat(worst)}});
    if (!same) r.status = kIdentityFailure;
  }
  r.body["b_independence"] = indep;

  auto sc = sigma_commutation_check(b.op, spec);
  r.body["sigma_commutation"] = {{"compared", sc.compared}, {"mismatches", sc.mismatches}};
  if (sc.mismatches) r.status = kIdentityFailure;
  json comm = json::array();
  for (std::size_t var = 0; var < spec.N; ++var) {
    log(o, "commutation var=" + std::to_string(var));
    auto cc = commutation_check(b.ctx, b.op, var);
    comm.push_back({{"var", var},
                    {"interior", rat(cc.interior)},
                    {"compared", cc.compared},
                    {"residual_p", rat(cc.residual)},
                    {"prec_p", rat(cc.prec)},
                    {"pass", cc.zero}});
    if (!cc.zero) r.status = kIdentityFailure;
  }
  r.body["differential_commutation"] = comm;

  if (o.wset) {
    json ws = json::array();
    for (unsigned k = 1; k <= s.kmax; ++k) {
      log(o, "W-set sum k=" + std::to_string(k));
      auto w = w_set_sum(s.f, spec, tower, k, s.precision, S[k - 1], s.cap);
      ws.push_back({{"k", k},
                    {"points", w.points},
                    {"value", ring_elem(w.value)},
                    {"expected", ring_elem(w.expected)},
                    {"residual_p", rat(w.residual)},
                    {"pass", w.zero}});
      if (!w.zero) r.status = kIdentityFailure;
    }
    r.body["w_set_sums"] = ws;
  }
  return r;
}

Report run_fredholm(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  TowerDesc tower(s.field);
  auto b = build(s, o);
  r.body["operator"] = op_info(s, b);
  std::vector<RingElem> traces;
  for (unsigned k = 1; k <= s.kmax; ++k) traces.push_back(twisted_trace(b.op, spec, 1, k));
  auto det = twisted_fredholm(traces);
  json jd = json::array();
  for (const auto& c : det) jd.push_back(ring_elem(c));
  r.body["fredholm"] = jd;
  auto S = sums_upto(s, tower, s.kmax, o);
  auto L = l_series(S);
  r.body["l_series"] = l_coeffs(L);
  auto rep = verify_factorization(L, det, s.d, s.field.order(), *b.ctx.ring);
  json lhs = json::array(), rhs = json::array();
  for (const auto& x : rep.lhs) lhs.push_back(ring_elem(x));
  for (const auto& x : rep.rhs) rhs.push_back(ring_elem(x));
  r.body["factorization"] = {{"sign", s.d.size() % 2 == 1 ? 1 : -1},
                             {"lhs", lhs},
                             {"rhs", rhs},
                             {"residual_p", rat_vec(rep.residual)},
                             {"prec_p", rat_vec(rep.prec)},
                             {"min_prec_p", rat(rep.min_prec)},
                             {"pass", rep.zero}};
  if (!rep.zero) r.status = kIdentityFailure;
  return r;
}

Report run_unit_root(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  const auto& uo = o.unit_root;
  static const std::vector<std::string> kMethods = {"hypergeom", "power-iter", "rational"};
  if (std::find(kMethods.begin(), kMethods.end(), uo.method) == kMethods.end())
    throw SpecError("unknown unit-root method '" + uo.method + "'");
  auto spec = s.unfold_spec();
  auto wanted = [&](const std::string& m) { return uo.cross_check || uo.method == m; };

  std::optional<OpBundle> bundle;
  if (wanted("power-iter")) bundle = build(s, o);
  Ring ring = bundle ? bundle->ctx.ring : make_ring(s.field, s.precision);

  std::map<std::string, RingElem> roots;
  json methods = json::object();
  if (wanted("hypergeom")) {
    log(o, "hypergeometric unit root at Deg " + std::to_string(s.deg));
    auto h = unit_root_hypergeom(s.f, spec, *ring, s.deg, uo.step ? uo.step : static_cast<unsigned>(s.p), s.cap);
    json tr = json::array();
    for (const auto& [deg, l] : h.trace) tr.push_back({{"deg", deg}, {"lambda", ring_elem(l)}});
    methods["hypergeom"] = {{"lambda", ring_elem(h.lambda)},
                            {"stabilization", tr},
                            {"stable_digits_pi", h.stable_digits},
                            {"one_unit", h.one_unit}};
    if (!h.one_unit) r.status = kIdentityFailure;
    roots.emplace("hypergeom", h.lambda.with_prec(h.stable_digits));
  }
  if (wanted("power-iter")) {
    log(o, "power iteration");
    auto pi = unit_root_power_iteration(bundle->op, spec);
    methods["power-iter"] = {{"lambda", ring_elem(pi.lambda)},
                             {"iterations", pi.iterations},
                             {"structure_ok", pi.structure_ok},
                             {"sigma_fixed", pi.sigma_fixed},
                             {"one_unit", pi.one_unit},
                             {"operator", op_info(s, *bundle)}};
    if (!pi.one_unit || !pi.structure_ok || !pi.sigma_fixed) r.status = kIdentityFailure;
    roots.emplace("power-iter", pi.lambda);
  }
  if (wanted("rational")) {
    TowerDesc tower(s.field);
    json jr;
    try {
      auto S = sums_upto(s, tower, s.kmax, o);
      auto rf = reconstruct_rational(l_series(S), s.kmax / 2);
      if (!rf) {
        jr = {{"available", false}, {"reason", "reconstruction failed at this K"}};
      } else {
        auto ur = unit_reciprocal_roots(*rf, *ring, s.d.size());
        jr = {{"available", ur.unit_root.has_value()},
              {"num", slopes(ur.num)},
              {"den", slopes(ur.den)},
              {"in_numerator", ur.in_numerator},
              {"one_unit", ur.one_unit}};
        if (ur.unit_root) {
          jr["lambda"] = ring_elem(*ur.unit_root);
          roots.emplace("rational", *ur.unit_root);
          if (!ur.one_unit) r.status = kIdentityFailure;
        }
      }
    } catch (const CapExceeded& e) {
      if (!uo.cross_check) throw;
      jr = {{"available", false}, {"reason", e.what()}};
    }
    methods["rational"] = jr;
  }
  r.body["methods"] = methods;

  if (uo.cross_check) {
    Rational tol = uo.tol != 0 ? uo.tol : Rational((s.precision + 1) / 2);
    json pairs = json::array();
    for (auto i = roots.begin(); i != roots.end(); ++i)
      for (auto j = std::next(i); j != roots.end(); ++j) {
        auto ag = agreement(i->second, j->second);
        bool ok = ag >= tol;
        pairs.push_back({{"a", i->first}, {"b", j->first}, {"agreement_p", rat(ag)}, {"pass", ok}});
        if (!ok) r.status = kIdentityFailure;
      }
    r.body["cross_check"] = {{"tolerance_p", rat(tol)}, {"pairs", pairs}, {"methods_compared", roots.size()}};
    if (roots.size() < 2) r.status = kIdentityFailure;
  }
  return r;
}

Report run_degeneracy(const ProblemSpec& s, const RunOptions& o) {
  Report r{header(s), kPass};
  auto spec = s.unfold_spec();
  auto G = unfold(s.f, spec, s.field);
  std::vector<IntVec> supp;
  for (const auto& t : G.merged.terms) supp.push_back(t.exp);
  auto P = newton_polytope(supp, spec.N);
  TowerDesc tower(s.field);
  log(o, "searching for a degeneracy witness, m <= " + std::to_string(s.m_max));
  auto w = degeneracy_witness(G.merged, P, tower, s.m_max, s.cap);
  r.body["m_max"] = s.m_max;
  r.body["semantics"] = "semi-decision: a witness certifies degeneracy, its absence proves nothing";
  if (!w) {
    r.body["witness"] = nullptr;
    return r;
  }
  json face = json::array();
  for (std::size_t i = 0; i < P.points.size(); ++i)
    if (w->face.points >> i & 1) face.push_back(P.points[i]);
  json pt = json::array();
  for (const auto& y : w->point) pt.push_back(field_elem(w->field, y));
  r.body["witness"] = {{"face_points", face},
                       {"face_dim", w->face.dim},
                       {"m", w->m},
                       {"field_modulus", w->field.modulus()},
                       {"point", pt}};
  return r;
}

Report run(const ProblemSpec& s, const std::string& sub, const RunOptions& o) {
  if (sub == "unfold") return run_unfold(s, o);
  if (sub == "polytope-info") return run_polytope_info(s, o);
  if (sub == "sums") return run_sums(s, o);
  if (sub == "lfunc") return run_lfunc(s, o);
  if (sub == "trace-check") return run_trace_check(s, o);
  if (sub == "fredholm") return run_fredholm(s, o);
  if (sub == "unit-root") return run_unit_root(s, o);
  if (sub == "degeneracy") return run_degeneracy(s, o);
  throw SpecError("unknown subcommand '" + sub + "'");
}

}  // namespace ptes
