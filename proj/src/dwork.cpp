#include "ptes/dwork.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "ptes/errors.hpp"

namespace ptes {

namespace {

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (n < 64) threads = 1;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n ? n : 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned id = 0; id < threads; ++id)
    pool.emplace_back([&, id] {
      for (std::size_t i = id; i < n; i += threads) fn(i);
    });
  for (auto& t : pool) t.join();
}

Rational ord_p_of(const RingElem& x) { return Rational(x.ord_pi(), static_cast<long>(x.ring()->e)); }
Rational prec_p_of(const RingElem& x) { return Rational(x.prec(), static_cast<long>(x.ring()->e)); }

int ceil_int(const Rational& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;
  if (q * d < n) ++q;
  return static_cast<int>(q);
}

int min_prec(const SeriesCoeffs& s, int cap) {
  int p = cap;
  for (const auto& [w, c] : s.c) p = std::min(p, c.prec());
  return p;
}

void drop_zeros(SeriesCoeffs& s) {
  for (auto it = s.c.begin(); it != s.c.end();) {
    if (it->second.is_zero())
      it = s.c.erase(it);
    else
      ++it;
  }
}

// Product of sparse series; a pair is skipped only when its product vanishes modulo p^M.
SeriesCoeffs sparse_mul(const SeriesCoeffs& x, const SeriesCoeffs& y, const RingData& ring, std::uint64_t cap) {
  std::vector<std::pair<const IntVec*, std::pair<const RingElem*, int>>> ys;
  for (const auto& [w, c] : y.c) ys.push_back({&w, {&c, c.ord_pi()}});
  SeriesCoeffs out;
  for (const auto& [w1, c1] : x.c) {
    int o1 = c1.ord_pi();
    for (const auto& [w2, cv] : ys) {
      if (o1 + cv.second >= ring.cap) continue;
      IntVec w = w1;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += (*w2)[i];
      auto it = out.c.find(w);
      if (it == out.c.end()) {
        out.c.emplace(std::move(w), c1 * *cv.first);
        if (out.c.size() > cap) throw CapExceeded("series support exceeds cap");
      } else {
        it->second += c1 * *cv.first;
      }
    }
  }
  drop_zeros(out);
  out.prec = min_prec(out, ring.cap);
  return out;
}

IntVec scaled(const IntVec& v, std::int64_t s) {
  IntVec r = v;
  for (auto& x : r) x *= s;
  return r;
}

}  // namespace

std::vector<LiftedTerm> lift_terms(const LaurentPoly& unmerged, const RingData& ring) {
  std::vector<LiftedTerm> out;
  for (const auto& t : unmerged.terms) out.push_back({t.exp, ring.teichmuller(t.coeff)});
  return out;
}

RingElem SeriesCoeffs::at(const IntVec& w, const RingData& ring) const {
  auto it = c.find(w);
  return it == c.end() ? ring.zero() : it->second;
}

SeriesCoeffs f_coeffs(const std::vector<LiftedTerm>& terms, const RingData& ring, std::uint64_t cap) {
  if (terms.empty()) throw SpecError("no terms");
  SeriesCoeffs cur;
  cur.c.emplace(IntVec(terms[0].exp.size(), 0), ring.one());
  for (const auto& t : terms) {
    SeriesCoeffs factor;
    RingElem cpow = ring.one();
    for (std::size_t i = 0; i < ring.theta.size(); ++i, cpow *= t.coeff) {
      RingElem v = ring.theta[i] * cpow;
      if (v.is_zero()) continue;
      IntVec e = scaled(t.exp, static_cast<std::int64_t>(i));
      auto it = factor.c.find(e);
      if (it == factor.c.end())
        factor.c.emplace(e, v);
      else
        it->second += v;
    }
    cur = sparse_mul(cur, factor, ring, cap);
  }
  return cur;
}

SeriesCoeffs fa_coeffs(const SeriesCoeffs& F, unsigned a, const RingData& ring, std::uint64_t cap) {
  if (a == 0) throw std::invalid_argument("a must be positive");
  SeriesCoeffs out = F;
  std::int64_t pj = 1;
  for (unsigned j = 1; j < a; ++j) {
    pj *= static_cast<std::int64_t>(ring.p);
    SeriesCoeffs g;
    for (const auto& [w, c] : F.c) g.c.emplace(scaled(w, pj), c.frobenius(j));
    out = sparse_mul(out, g, ring, cap);
  }
  return out;
}

SeriesCoeffs frobenius_product(const SeriesCoeffs& Fa, std::uint64_t q, unsigned k, const RingData& ring,
                               std::uint64_t cap) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  SeriesCoeffs out = Fa;
  std::int64_t qi = 1;
  for (unsigned i = 1; i < k; ++i) {
    qi *= static_cast<std::int64_t>(q);
    SeriesCoeffs g;
    for (const auto& [w, c] : Fa.c) g.c.emplace(scaled(w, qi), c);
    out = sparse_mul(out, g, ring, cap);
  }
  return out;
}

RingElem OpMatrix::get(std::size_t r, std::size_t c) const {
  const auto& row = rows[r];
  auto it = std::lower_bound(row.cols.begin(), row.cols.end(), static_cast<std::uint32_t>(c));
  if (it == row.cols.end() || *it != c) return ring->zero().with_prec(prec);
  std::size_t k = static_cast<std::size_t>(it - row.cols.begin());
  const unsigned nc = ring->ncoords;
  Coords co(row.vals.begin() + static_cast<std::ptrdiff_t>(k * nc),
            row.vals.begin() + static_cast<std::ptrdiff_t>((k + 1) * nc));
  return make_elem(ring, std::move(co), prec);
}

std::size_t OpMatrix::nnz() const {
  std::size_t s = 0;
  for (const auto& r : rows) s += r.cols.size();
  return s;
}

OpMatrix op_mul(const OpMatrix& x, const OpMatrix& y) {
  if (x.n != y.n || x.ring != y.ring) throw std::invalid_argument("op_mul: shape mismatch");
  OpMatrix out;
  out.ring = x.ring;
  out.n = x.n;
  out.prec = std::min(x.prec, y.prec);
  out.rows.resize(x.n);
  const RingData& ring = *x.ring;
  const unsigned nc = ring.ncoords;
  parallel_for(x.n, [&](std::size_t r) {
    thread_local std::vector<__int128> acc;
    thread_local std::vector<std::uint8_t> mark;
    acc.assign(x.n * nc, 0);
    mark.assign(x.n, 0);
    std::vector<std::uint32_t> touched;
    const auto& xr = x.rows[r];
    for (std::size_t e = 0; e < xr.cols.size(); ++e) {
      const std::int64_t* xv = &xr.vals[e * nc];
      const auto& yr = y.rows[xr.cols[e]];
      for (std::size_t f = 0; f < yr.cols.size(); ++f) {
        std::uint32_t c = yr.cols[f];
        ring.mul_acc(xv, &yr.vals[f * nc], &acc[c * nc]);
        if (!mark[c]) {
          mark[c] = 1;
          touched.push_back(c);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& orow = out.rows[r];
    for (auto c : touched) {
      bool nz = false;
      std::size_t base = orow.vals.size();
      for (unsigned k = 0; k < nc; ++k) {
        std::int64_t v = ring.reduce(acc[c * nc + k]);
        nz |= v != 0;
        orow.vals.push_back(v);
      }
      if (nz)
        orow.cols.push_back(c);
      else
        orow.vals.resize(base);
    }
  });
  return out;
}

namespace {

OpMatrix from_triplets(const RingData& ring, std::size_t n, int prec,
                       std::vector<std::vector<std::pair<std::uint32_t, Coords>>>& rows) {
  OpMatrix m;
  m.ring = &ring;
  m.n = n;
  m.prec = prec;
  m.rows.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto& src = rows[r];
    std::sort(src.begin(), src.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (i + 1 < src.size() && src[i + 1].first == src[i].first) {
        // merge duplicates into the next slot
        for (unsigned k = 0; k < ring.ncoords; ++k)
          src[i + 1].second[k] = ring.reduce(static_cast<__int128>(src[i + 1].second[k]) + src[i].second[k]);
        continue;
      }
      bool nz = false;
      for (auto v : src[i].second) nz |= v != 0;
      if (!nz) continue;
      m.rows[r].cols.push_back(src[i].first);
      for (auto v : src[i].second) m.rows[r].vals.push_back(v);
    }
  }
  return m;
}

}  // namespace

TruncOp alpha_matrix(const SeriesCoeffs& Fa, WeightedBasis basis, std::uint64_t q, unsigned a, const RingData& ring) {
  TruncOp op;
  op.q = q;
  op.a = a;
  const std::size_t n = basis.size();
  std::vector<std::pair<const IntVec*, const RingElem*>> cs;
  for (const auto& [w, c] : Fa.c) cs.push_back({&w, &c});
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> cols(n);  // (row, coefficient id)
  const auto qq = static_cast<std::int64_t>(q);
  parallel_for(n, [&](std::size_t u) {
    const IntVec& uv = basis.points[u];
    IntVec v(uv.size());
    for (std::size_t t = 0; t < cs.size(); ++t) {
      const IntVec& w = *cs[t].first;
      bool ok = true;
      for (std::size_t i = 0; i < v.size() && ok; ++i) {
        std::int64_t s = w[i] + uv[i];
        if (s % qq != 0) ok = false;
        v[i] = s / qq;
      }
      if (!ok) continue;
      if (auto r = basis.find(v)) cols[u].push_back({static_cast<std::uint32_t>(*r), static_cast<std::uint32_t>(t)});
    }
  });
  std::vector<std::vector<std::pair<std::uint32_t, Coords>>> rows(n);
  for (std::size_t u = 0; u < n; ++u)
    for (auto [r, t] : cols[u]) rows[r].push_back({static_cast<std::uint32_t>(u), cs[t].second->canonical()});
  op.A = from_triplets(ring, n, Fa.prec, rows);
  op.tail_prec = ceil_int(basis.cut * Rational(static_cast<long>(ring.e)));
  op.basis = std::move(basis);
  return op;
}

DworkContext make_context(const LaurentPoly& f, const UnfoldSpec& spec, const FieldDesc& Fq, unsigned M,
                          std::uint64_t cap) {
  DworkContext ctx{make_ring(Fq, M), spec, Fq.order(), Fq.degree(), unfold(f, spec, Fq), {}, {}, {}, {}};
  ctx.lifted = lift_terms(ctx.G.unmerged, *ctx.ring);
  std::vector<IntVec> support;
  for (const auto& t : ctx.G.unmerged.terms)
    if (std::find(support.begin(), support.end(), t.exp) == support.end()) support.push_back(t.exp);
  ctx.delta = newton_polytope(support, spec.N);
  ctx.F = f_coeffs(ctx.lifted, *ctx.ring, cap);
  ctx.Fa = fa_coeffs(ctx.F, ctx.a, *ctx.ring, cap);
  return ctx;
}

TruncOp build_op(const DworkContext& ctx, const Rational& w_cut, std::uint64_t cap) {
  return alpha_matrix(ctx.Fa, enumerate_monoid(ctx.delta, w_cut, cap), ctx.q, ctx.a, *ctx.ring);
}

RingElem twisted_trace(const TruncOp& op, const UnfoldSpec& spec, std::int64_t b, unsigned k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  require_coprime(spec, b);
  OpMatrix pw = op.A;
  for (unsigned i = 1; i < k; ++i) pw = op_mul(pw, op.A);
  RingElem acc = op.A.ring->zero();
  for (std::size_t u = 0; u < op.basis.size(); ++u) {
    auto r = op.basis.find(sigma_act(op.basis.points[u], spec, -b));
    if (!r) throw std::logic_error("basis is not closed under the shift");
    acc += pw.get(*r, u);
  }
  return acc.with_prec(std::min(pw.prec, op.tail_prec));
}

RingElem trace_by_coefficients(const DworkContext& ctx, std::int64_t b, unsigned k, std::uint64_t cap) {
  require_coprime(ctx.spec, b);
  const RingData& ring = *ctx.ring;
  SeriesCoeffs Fk = frobenius_product(ctx.Fa, ctx.q, k, ring, cap);
  const std::size_t N = ctx.spec.N;
  BigInt qk = boost::multiprecision::pow(BigInt(ctx.q), k);
  IntMatrix Pm = perm_matrix(ctx.spec, -b);
  RatMatrix m(N, std::vector<Rational>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m[i][j] = Rational(qk * Pm[i][j]) - Rational(i == j ? 1 : 0);
  // Columns of the inverse.
  RatMatrix inv(N, std::vector<Rational>(N));
  for (std::size_t j = 0; j < N; ++j) {
    std::vector<Rational> e(N, Rational(0));
    e[j] = 1;
    auto s = solve_linear(m, e);
    if (!s) throw std::logic_error("q^k P^{-b} - I is singular");
    for (std::size_t i = 0; i < N; ++i) inv[i][j] = (*s)[i];
  }
  RingElem acc = ring.zero();
  for (const auto& [w, c] : Fk.c) {
    IntVec u(N);
    bool integral = true;
    for (std::size_t i = 0; i < N && integral; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < N; ++j) s += inv[i][j] * w[j];
      if (denominator(s) != 1) integral = false;
      else u[i] = static_cast<std::int64_t>(numerator(s));
    }
    if (integral && in_cone(ctx.delta, u)) acc += c;
  }
  return acc.with_prec(Fk.prec);
}

BigInt twist_det(const UnfoldSpec& spec, std::uint64_t q, unsigned k, std::int64_t b) {
  IntMatrix Pm = perm_matrix(spec, b);
  BigInt qk = boost::multiprecision::pow(BigInt(q), k);
  RatMatrix m(spec.N, std::vector<Rational>(spec.N));
  for (std::size_t i = 0; i < spec.N; ++i)
    for (std::size_t j = 0; j < spec.N; ++j) m[i][j] = Rational(i == j ? qk : BigInt(0)) - Rational(Pm[i][j]);
  return numerator(determinant(m));
}

TraceCheck trace_formula_check(const TruncOp& op, const UnfoldSpec& spec, std::int64_t b, unsigned k,
                               const CyclotomicInt& S) {
  const RingData& ring = *op.A.ring;
  TraceCheck c;
  c.k = k;
  c.b = b;
  c.trace = twisted_trace(op, spec, b, k);
  c.lhs = ring.from_bigint(twist_det(spec, op.q, k, b)) * c.trace;
  c.rhs = ring.zeta_embed(S);
  RingElem diff = c.lhs - c.rhs;
  c.residual = ord_p_of(diff);
  c.prec = prec_p_of(diff);
  c.zero = diff.is_zero();
  return c;
}

TruncSeries<RingElem> twisted_fredholm(const std::vector<RingElem>& traces) {
  if (traces.empty()) throw std::invalid_argument("twisted_fredholm needs T_1");
  const RingData& ring = *traces[0].ring();
  std::vector<RingElem> s{ring.zero()};
  for (const auto& t : traces) s.push_back(-t);
  return exp_power_sums(s, ring.one());
}

FactorizationReport verify_factorization(const LSeries& L, const TruncSeries<RingElem>& det,
                                         const std::vector<unsigned>& d, std::uint64_t q, const RingData& ring) {
  FactorizationReport r;
  LSeries signed_L = d.size() % 2 == 1 ? L : series_inverse(L);
  auto rhs = delta_d(det, d, BigInt(q));
  std::size_t K = std::min(signed_L.size(), rhs.size());
  r.min_prec = Rational(ring.cap, static_cast<long>(ring.e));
  for (std::size_t i = 0; i < K; ++i) {
    RingElem l = ring.zeta_embed(signed_L[i]);
    RingElem diff = l - rhs[i];
    r.lhs.push_back(l);
    r.rhs.push_back(rhs[i]);
    r.residual.push_back(ord_p_of(diff));
    r.prec.push_back(prec_p_of(diff));
    r.min_prec = std::min(r.min_prec, r.prec.back());
    r.zero = r.zero && diff.is_zero();
  }
  return r;
}

PowerIteration unit_root_power_iteration(const TruncOp& op, const UnfoldSpec& spec, unsigned max_iter) {
  const OpMatrix& A = op.A;
  const RingData& ring = *A.ring;
  const std::size_t n = A.n;
  const unsigned nc = ring.ncoords;
  if (n == 0) throw std::invalid_argument("empty basis");
  if (op.basis.weights[0] != 0) throw std::logic_error("basis does not start at the origin");
  PowerIteration res;
  // Structure modulo pi in the gamma-rescaled basis.
  res.structure_ok = (A.get(0, 0) - ring.one()).ord_pi() >= 1;
  for (std::size_t v = 0; v < n && res.structure_ok; ++v)
    for (std::size_t e = 0; e < A.rows[v].cols.size(); ++e) {
      std::size_t u = A.rows[v].cols[e];
      if (u == 0 && v == 0) continue;
      Rational o = Rational(A.get(v, u).ord_pi()) + op.basis.weights[u] - op.basis.weights[v];
      if (o <= 0) {
        res.structure_ok = false;
        break;
      }
    }
  int prec = std::min(A.prec, op.tail_prec);
  if (max_iter == 0) max_iter = static_cast<unsigned>(2 * (ring.cap + op.tail_prec) + 10);
  std::vector<std::int64_t> v(n * nc, 0), w(n * nc);
  v[0] = 1;
  std::vector<__int128> acc(n * nc);
  bool converged = false;
  for (unsigned it = 1; it <= max_iter; ++it) {
    std::fill(acc.begin(), acc.end(), 0);
    parallel_for(n, [&](std::size_t r) {
      const auto& row = A.rows[r];
      for (std::size_t e = 0; e < row.cols.size(); ++e) ring.mul_acc(&row.vals[e * nc], &v[row.cols[e] * nc], &acc[r * nc]);
    });
    for (std::size_t i = 0; i < n * nc; ++i) w[i] = ring.reduce(acc[i]);
    RingElem lead = make_elem(&ring, Coords(w.begin(), w.begin() + nc), ring.cap);
    RingElem inv = lead.inverse();
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t r = 0; r < n; ++r) ring.mul_acc(&w[r * nc], inv.raw().data(), &acc[r * nc]);
    for (std::size_t i = 0; i < n * nc; ++i) w[i] = ring.reduce(acc[i]);
    res.lambda = lead;
    res.iterations = it;
    if (w == v) {
      converged = true;
      break;
    }
    v.swap(w);
  }
  if (!converged) throw PrecisionExhausted("power iteration did not stabilize");
  res.lambda = res.lambda.with_prec(prec);
  for (std::size_t r = 0; r < n; ++r)
    res.eigvec.push_back(make_elem(&ring, Coords(v.begin() + r * nc, v.begin() + (r + 1) * nc), prec));
  res.sigma_fixed = true;
  for (std::size_t u = 0; u < n; ++u) {
    auto r = op.basis.find(sigma_act(op.basis.points[u], spec, 1));
    if (!r || !res.eigvec[*r].equals(res.eigvec[u])) res.sigma_fixed = false;
  }
  res.one_unit = (res.lambda - ring.one()).ord_pi() >= 1;
  return res;
}

SigmaCheck sigma_commutation_check(const TruncOp& op, const UnfoldSpec& spec) {
  const std::size_t n = op.basis.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto r = op.basis.find(sigma_act(op.basis.points[u], spec, 1));
    if (!r) throw std::logic_error("basis is not closed under the shift");
    perm[u] = *r;
  }
  SigmaCheck c;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t e = 0; e < op.A.rows[v].cols.size(); ++e) {
      std::size_t u = op.A.rows[v].cols[e];
      ++c.compared;
      if (op.A.get(v, u).canonical() != op.A.get(perm[v], perm[u]).canonical()) ++c.mismatches;
    }
  if (op.A.nnz() != c.compared) ++c.mismatches;
  return c;
}

SeriesCoeffs log_derivative_H(const DworkContext& ctx, std::size_t var) {
  const RingData& ring = *ctx.ring;
  SeriesCoeffs h;
  std::int64_t pm = 1;
  for (unsigned m = 0;; ++m) {
    // ord_pi(gamma_m p^m) = p^{m+1} - (p-1).
    if (static_cast<long double>(pm) * ring.p - ring.e >= ring.cap) break;
    RingElem g = ring.gamma_m(m).mul_int(pm);
    for (const auto& t : ctx.lifted) {
      if (t.exp[var] == 0) continue;
      RingElem c = g.mul_int(t.exp[var]) * t.coeff.frobenius(m);
      IntVec e = scaled(t.exp, pm);
      auto it = h.c.find(e);
      if (it == h.c.end())
        h.c.emplace(e, c);
      else
        it->second += c;
    }
    pm *= static_cast<std::int64_t>(ring.p);
  }
  drop_zeros(h);
  h.prec = min_prec(h, ring.cap);
  return h;
}

OpMatrix differential_matrix(const DworkContext& ctx, const TruncOp& op, std::size_t var) {
  const RingData& ring = *ctx.ring;
  SeriesCoeffs h = log_derivative_H(ctx, var);
  const std::size_t n = op.basis.size();
  std::vector<std::vector<std::pair<std::uint32_t, Coords>>> rows(n);
  for (std::size_t u = 0; u < n; ++u) {
    const IntVec& uv = op.basis.points[u];
    if (uv[var] != 0) rows[u].push_back({static_cast<std::uint32_t>(u), ring.from_int(uv[var]).canonical()});
    for (const auto& [w, c] : h.c) {
      IntVec v = uv;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
      if (auto r = op.basis.find(v)) rows[*r].push_back({static_cast<std::uint32_t>(u), c.canonical()});
    }
  }
  return from_triplets(ring, n, h.prec, rows);
}

SeriesCoeffs differential_apply(const DworkContext& ctx, std::size_t var, const SeriesCoeffs& xi,
                                const Rational& w_cut) {
  const RingData& ring = *ctx.ring;
  SeriesCoeffs h = log_derivative_H(ctx, var);
  SeriesCoeffs out;
  auto add = [&](const IntVec& e, const RingElem& c) {
    auto w = weight(ctx.delta, e);
    if (!w || *w > w_cut) return;
    auto it = out.c.find(e);
    if (it == out.c.end())
      out.c.emplace(e, c);
    else
      it->second += c;
  };
  for (const auto& [u, c] : xi.c) {
    if (u[var] != 0) add(u, c.mul_int(u[var]));
    for (const auto& [w, hc] : h.c) {
      IntVec e = u;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += w[i];
      add(e, hc * c);
    }
  }
  drop_zeros(out);
  out.prec = min_prec(out, ring.cap);
  return out;
}

CommutationCheck commutation_check(const DworkContext& ctx, const TruncOp& op, std::size_t var) {
  const RingData& ring = *ctx.ring;
  OpMatrix Dm = differential_matrix(ctx, op, var);
  OpMatrix DA = op_mul(Dm, op.A), AD = op_mul(op.A, Dm);
  CommutationCheck c;
  c.var = var;
  const Rational W = op.basis.cut;
  const Rational p(static_cast<long>(ring.p));
  Rational pa1 = 1;
  for (unsigned i = 1; i < op.a; ++i) pa1 *= p;
  // Truncated sums miss only terms of pi-order >= cap when both indices stay below this weight.
  c.interior = std::min(W - Rational(ring.cap + static_cast<long>(ring.e)) / p,
                        Rational(static_cast<long>(op.q)) * W - Rational(ring.cap) * pa1);
  c.residual = Rational(ring.cap, static_cast<long>(ring.e));
  c.prec = Rational(std::min(DA.prec, AD.prec), static_cast<long>(ring.e));
  const auto q = static_cast<std::int64_t>(op.q);
  for (std::size_t v = 0; v < op.basis.size(); ++v) {
    if (op.basis.weights[v] > c.interior) break;
    std::vector<std::uint32_t> cols = DA.rows[v].cols;
    cols.insert(cols.end(), AD.rows[v].cols.begin(), AD.rows[v].cols.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (auto u : cols) {
      if (op.basis.weights[u] > c.interior) continue;
      RingElem diff = DA.get(v, u).mul_int(q) - AD.get(v, u);
      ++c.compared;
      c.residual = std::min(c.residual, ord_p_of(diff));
      c.zero = c.zero && diff.is_zero();
    }
  }
  return c;
}

WSetSum w_set_sum(const LaurentPoly& f, const UnfoldSpec& spec, TowerDesc& tower, unsigned k, unsigned M,
                  const CyclotomicInt& S, std::uint64_t cap) {
  const FieldDesc& Fq = tower.base();
  FixedPointSet W = fixed_points(spec, tower, k, 1, cap);
  const FieldDesc& big = W.field;
  unsigned level = k * spec.lcm;
  WSetSum out;
  out.ring = make_ring(big, M);
  const RingData& ring = *out.ring;
  auto terms = unfold(f, spec, Fq).unmerged.terms;
  std::vector<FieldElem> coeffs;
  for (const auto& t : terms) coeffs.push_back(tower.embed(t.coeff, level));
  const unsigned steps = Fq.degree() * k;
  std::map<std::uint64_t, RingElem> cache;
  auto splitting = [&](const FieldElem& r) {
    auto key = big.index(r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    RingElem v = ring.one();
    FieldElem t = r;
    for (unsigned j = 0; j < steps; ++j, t = big.frobenius(t)) v *= ring.theta_eval(ring.teichmuller(t));
    cache.emplace(key, v);
    return v;
  };
  RingElem total = ring.zero();
  for (const auto& y : W.points) {
    RingElem prod = ring.one();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      FieldElem r = coeffs[t];
      for (std::size_t i = 0; i < y.size(); ++i) {
        std::int64_t e = terms[t].exp[i];
        if (e > 0) r = big.mul(r, big.pow(y[i], static_cast<std::uint64_t>(e)));
        if (e < 0) r = big.mul(r, big.pow(big.inv(y[i]), static_cast<std::uint64_t>(-e)));
      }
      prod *= splitting(r);
    }
    total += prod;
  }
  out.points = W.points.size();
  out.value = total;
  out.expected = ring.zeta_embed(S);
  RingElem diff = out.value - out.expected;
  out.residual = ord_p_of(diff);
  out.zero = diff.is_zero();
  return out;
}

}  // namespace ptes
