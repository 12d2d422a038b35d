#include "ptes/sums_l.hpp"

#include <algorithm>
#include <thread>

#include "ptes/errors.hpp"

namespace ptes {

BruteSum brute_sum(const LaurentPoly& f, const UnfoldSpec& spec, TowerDesc& tower, unsigned k, std::uint64_t cap,
                   unsigned threads) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (f.nvars != spec.n()) throw SpecError("f and d disagree on the number of variables");
  const FieldDesc& big = tower.level(k * spec.lcm);
  const std::uint64_t q = tower.base().order();
  const std::uint64_t Q1 = big.order() - 1;
  if (Q1 > cap) throw CapExceeded("common field F_{q^" + std::to_string(k * spec.lcm) + "} exceeds cap");
  const std::size_t n = spec.n();
  std::vector<std::uint64_t> sizes, steps;
  for (auto di : spec.d) {
    std::uint64_t s = checked_pow(q, k * di) - 1;
    if (s > cap) throw CapExceeded("F_{q^" + std::to_string(k * di) + "}^* exceeds cap");
    sizes.push_back(s);
    steps.push_back(Q1 / s);
  }
  // Discrete logs to base g and the absolute trace of g^j.
  const FieldElem& g = big.primitive();
  std::vector<std::uint32_t> dlog(big.order(), 0);
  std::vector<std::uint8_t> trtab(Q1);
  {
    FieldElem t = big.one();
    for (std::uint64_t j = 0; j < Q1; ++j, t = big.mul(t, g)) {
      dlog[big.index(t)] = static_cast<std::uint32_t>(j);
      trtab[j] = static_cast<std::uint8_t>(big.abs_trace(t));
    }
  }
  LaurentPoly fm = merge_terms(f, tower.base());
  struct TermData {
    std::uint64_t base;
    std::vector<std::uint64_t> step;  // per variable exponent increment
  };
  std::vector<TermData> terms;
  for (const auto& t : fm.terms) {
    TermData td;
    td.base = dlog[big.index(tower.embed(t.coeff, k * spec.lcm))];
    for (std::size_t i = 0; i < n; ++i) {
      auto e = static_cast<__int128>(t.exp[i]) * static_cast<__int128>(steps[i]);
      e %= static_cast<__int128>(Q1);
      if (e < 0) e += Q1;
      td.step.push_back(static_cast<std::uint64_t>(e));
    }
    terms.push_back(std::move(td));
  }
  const std::uint64_t p = big.p();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, sizes[0]));
  std::vector<std::vector<std::uint64_t>> hists(threads, std::vector<std::uint64_t>(p, 0));

  auto worker = [&](unsigned id) {
    auto& hist = hists[id];
    const std::size_t nt = terms.size();
    std::vector<std::uint64_t> expo(nt);
    std::vector<std::uint64_t> idx(n, 0);
    for (std::uint64_t e0 = id; e0 < sizes[0]; e0 += threads) {
      for (std::size_t t = 0; t < nt; ++t)
        expo[t] = static_cast<std::uint64_t>((terms[t].base + static_cast<unsigned __int128>(terms[t].step[0]) * e0) % Q1);
      std::fill(idx.begin(), idx.end(), 0);
      // Odometer over variables 1..n-1, exponents maintained incrementally.
      while (true) {
        std::uint64_t s = 0;
        for (std::size_t t = 0; t < nt; ++t) s += trtab[expo[t]];
        ++hist[s % p];
        std::size_t i = 1;
        for (; i < n; ++i) {
          if (++idx[i] < sizes[i]) {
            for (std::size_t t = 0; t < nt; ++t) {
              expo[t] += terms[t].step[i];
              if (expo[t] >= Q1) expo[t] -= Q1;
            }
            break;
          }
          // wrap: subtract (sizes[i]-1) steps
          for (std::size_t t = 0; t < nt; ++t) {
            auto back = static_cast<std::uint64_t>(static_cast<unsigned __int128>(terms[t].step[i]) * (sizes[i] - 1) % Q1);
            expo[t] = expo[t] >= back ? expo[t] - back : expo[t] + Q1 - back;
          }
          idx[i] = 0;
        }
        if (i == n) break;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
  for (auto& th : pool) th.join();

  BruteSum r;
  r.k = k;
  r.histogram.assign(p, 0);
  for (const auto& h : hists)
    for (std::uint64_t j = 0; j < p; ++j) r.histogram[j] += h[j];
  r.S = CyclotomicInt::from_histogram(p, r.histogram);
  r.count = fixed_point_count(spec, q, k);
  BigInt total = 0;
  for (auto c : r.histogram) total += c;
  if (total != r.count) throw std::logic_error("histogram does not account for every point");
  return r;
}

BruteSum sum_over_fixed_points(const LaurentPoly& G, const FixedPointSet& W, TowerDesc& tower) {
  const FieldDesc& big = W.field;
  unsigned level = big.degree() / tower.base().degree();
  unsigned sub = tower.base().degree() * W.k;  // F_{q^k} over F_p
  const std::uint64_t p = big.p();
  BruteSum r;
  r.k = W.k;
  r.histogram.assign(p, 0);
  auto embed = [&](const FieldElem& c) { return tower.embed(c, level); };
  for (const auto& y : W.points) {
    FieldElem v = evaluate(G, big, y, embed);
    FieldElem tr = big.zero(), t = v;
    for (unsigned j = 0; j < sub; ++j, t = big.frobenius(t)) tr = big.add(tr, t);
    for (unsigned i = 1; i < big.degree(); ++i)
      if (tr.c[i]) throw std::logic_error("G(y) does not lie in F_{q^k}");
    ++r.histogram[tr.c[0]];
  }
  r.S = CyclotomicInt::from_histogram(p, r.histogram);
  r.count = W.points.size();
  return r;
}

LSeries l_series(const std::vector<CyclotomicInt>& S) {
  if (S.empty()) throw std::invalid_argument("l_series needs S_1");
  const std::uint64_t p = S[0].p();
  std::vector<CycloNum> s{CycloNum(p)};
  for (const auto& x : S) s.push_back(to_num(x));
  return exp_power_sums(s, CycloNum::constant(p, 1));
}

LSeries expand(const RationalFn& r, std::size_t K) {
  const std::uint64_t p = r.num[0].p();
  LSeries a(K + 1, CycloNum(p)), b(K + 1, CycloNum(p));
  for (std::size_t i = 0; i < r.num.size() && i <= K; ++i) a[i] = r.num[i];
  for (std::size_t i = 0; i < r.den.size() && i <= K; ++i) b[i] = r.den[i];
  return series_mul(a, series_inverse(b));
}

namespace {

// Q-linear matrix of multiplication by x on the power basis.
RatMatrix mul_matrix(const CycloNum& x) {
  const std::size_t n = x.coords().size();
  RatMatrix m(n, std::vector<Rational>(n));
  for (std::size_t c = 0; c < n; ++c) {
    CycloNum col = x * CycloNum::zeta_pow(x.p(), static_cast<std::int64_t>(c));
    for (std::size_t r = 0; r < n; ++r) m[r][c] = col[r];
  }
  return m;
}

std::vector<CycloNum> trim(std::vector<CycloNum> v) {
  while (v.size() > 1 && v.back().is_zero()) v.pop_back();
  return v;
}

}  // namespace

std::optional<RationalFn> reconstruct_rational(const LSeries& L, unsigned max_deg) {
  if (L.empty()) return std::nullopt;
  const std::size_t K = L.size() - 1;
  const std::uint64_t p = L[0].p();
  const std::size_t w = p - 1;
  for (unsigned m = 0; m <= max_deg && K >= 2 * static_cast<std::size_t>(m) + 1; ++m) {
    // Unknown den coefficients Q_1..Q_m; equations (L Q)_t = 0 for m < t <= K.
    RatMatrix A;
    std::vector<Rational> rhs;
    for (std::size_t t = m + 1; t <= K; ++t) {
      std::vector<RatMatrix> blocks;
      for (std::size_t j = 1; j <= m; ++j) blocks.push_back(mul_matrix(L[t - j]));
      for (std::size_t r = 0; r < w; ++r) {
        std::vector<Rational> row;
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t c = 0; c < w; ++c) row.push_back(blocks[j][r][c]);
        A.push_back(std::move(row));
        rhs.push_back(-L[t][r]);
      }
    }
    std::vector<Rational> sol;
    if (m > 0) {
      auto s = solve_linear(A, rhs);
      if (!s) continue;
      sol = *s;
    } else {
      bool ok = true;
      for (const auto& v : rhs) ok &= v == 0;
      if (!ok) continue;
    }
    RationalFn r;
    r.den.push_back(CycloNum::constant(p, 1));
    for (std::size_t j = 0; j < m; ++j) {
      CycloNum qj(p);
      for (std::size_t c = 0; c < w; ++c) qj.add_zeta_pow(static_cast<std::int64_t>(c), sol[j * w + c]);
      r.den.push_back(qj);
    }
    for (std::size_t t = 0; t <= m; ++t) {
      CycloNum acc(p);
      for (std::size_t j = 0; j <= t && j <= m; ++j) acc += r.den[j] * L[t - j];
      r.num.push_back(acc);
    }
    r.num = trim(r.num);
    r.den = trim(r.den);
    if (expand(r, K) != L) continue;
    return r;
  }
  return std::nullopt;
}

CycloNum predict_sum(const RationalFn& r, unsigned k) {
  LSeries l = expand(r, k);
  const std::uint64_t p = r.num[0].p();
  std::vector<CycloNum> S(k + 1, CycloNum(p));
  for (unsigned m = 1; m <= k; ++m) {
    CycloNum acc = l[m] * Rational(m);
    for (unsigned i = 1; i < m; ++i) acc -= S[i] * l[m - i];
    S[m] = acc;
  }
  return S[k];
}

bool predict_and_check(const RationalFn& r, unsigned k, const CyclotomicInt& oracle) {
  return predict_sum(r, k) == to_num(oracle);
}

NewtonSlopes newton_slopes(const std::vector<CycloNum>& poly, const RingData& ring) {
  std::vector<std::pair<std::size_t, Rational>> pts;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i].is_zero()) continue;
    pts.emplace_back(i, ring.zeta_embed(poly[i]).ord_p());
  }
  NewtonSlopes out;
  if (pts.empty()) return out;
  // Lower convex hull from the first point.
  std::size_t cur = 0;
  while (cur + 1 < pts.size()) {
    std::size_t best = cur + 1;
    Rational best_slope = (pts[best].second - pts[cur].second) / Rational(pts[best].first - pts[cur].first);
    for (std::size_t j = cur + 2; j < pts.size(); ++j) {
      Rational s = (pts[j].second - pts[cur].second) / Rational(pts[j].first - pts[cur].first);
      if (s <= best_slope) {
        best = j;
        best_slope = s;
      }
    }
    for (std::size_t t = pts[cur].first; t < pts[best].first; ++t) out.slopes.push_back(best_slope);
    if (best_slope == 0) out.unit_count += static_cast<unsigned>(pts[best].first - pts[cur].first);
    cur = best;
  }
  return out;
}

namespace {

RingElem hensel_unit_root(const std::vector<CycloNum>& poly, const RingData& ring) {
  std::vector<RingElem> c;
  for (const auto& x : poly) c.push_back(ring.zeta_embed(x));
  auto eval = [&](const RingElem& t, bool deriv) {
    RingElem acc = ring.zero();
    for (std::size_t i = c.size(); i-- > 0;) {
      if (deriv) {
        if (i == 0) break;
        acc = acc * t + c[i].mul_int(static_cast<std::int64_t>(i));
      } else {
        acc = acc * t + c[i];
      }
    }
    return acc;
  };
  // Modulo pi the polynomial is 1 + a_1 T, so the root starts at -1/a_1.
  RingElem T = ring.lift(ring.residue.neg(ring.residue.inv(c[1].residue())));
  for (int it = 0; it < 2 * ring.cap + 2; ++it) T = T - eval(T, false) * eval(T, true).inverse();
  return T.inverse();
}

}  // namespace

UnitRootReport unit_reciprocal_roots(const RationalFn& r, const RingData& ring, std::size_t n) {
  const bool odd = n % 2 == 1;
  const auto& num = odd ? r.num : r.den;
  const auto& den = odd ? r.den : r.num;
  UnitRootReport rep;
  rep.num = newton_slopes(num, ring);
  rep.den = newton_slopes(den, ring);
  if (rep.num.unit_count == 1 && rep.den.unit_count == 0) {
    rep.unit_root = hensel_unit_root(num, ring);
    rep.in_numerator = true;
  } else if (rep.den.unit_count == 1 && rep.num.unit_count == 0) {
    rep.unit_root = hensel_unit_root(den, ring);
    rep.in_numerator = false;
  }
  if (rep.unit_root) rep.one_unit = (*rep.unit_root - ring.one()).ord_pi() >= 1;
  return rep;
}

}  // namespace ptes
