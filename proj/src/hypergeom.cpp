#include "ptes/hypergeom.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ptes/errors.hpp"

namespace ptes {

namespace {

unsigned total(const IntVec& k) {
  std::int64_t s = 0;
  for (auto x : k) s += x;
  return static_cast<unsigned>(s);
}

void add_to(std::map<IntVec, RingElem>& m, const IntVec& k, const RingElem& v) {
  auto it = m.find(k);
  if (it == m.end())
    m.emplace(k, v);
  else
    it->second += v;
}

void drop_zeros(LambdaSeries& s) {
  for (auto it = s.c.begin(); it != s.c.end();) {
    if (it->second.is_zero())
      it = s.c.erase(it);
    else
      ++it;
  }
}

LambdaSeries one_series(std::size_t nvars, unsigned deg, const RingData& ring) {
  LambdaSeries s;
  s.nvars = nvars;
  s.deg = deg;
  s.c.emplace(IntVec(nvars, 0), ring.one());
  return s;
}

// Calls fn(k) for every k in N^n with |k| <= deg.
void for_each_profile(std::size_t n, unsigned deg, const std::function<void(const IntVec&)>& fn) {
  IntVec k(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == n) {
      fn(k);
      return;
    }
    for (unsigned x = 0; x <= left; ++x) {
      k[i] = x;
      rec(i + 1, left - x);
    }
    k[i] = 0;
  };
  rec(0, deg);
}

}  // namespace

RingElem LambdaSeries::at(const IntVec& k, const RingData& ring) const {
  auto it = c.find(k);
  return it == c.end() ? ring.zero() : it->second;
}

LambdaSeries lambda_mul(const LambdaSeries& x, const LambdaSeries& y, const RingData& ring) {
  LambdaSeries out;
  out.nvars = x.nvars;
  out.deg = std::min(x.deg, y.deg);
  for (const auto& [k1, c1] : x.c) {
    unsigned d1 = total(k1);
    for (const auto& [k2, c2] : y.c) {
      if (d1 + total(k2) > out.deg) continue;
      IntVec k = k1;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] += k2[i];
      add_to(out.c, k, c1 * c2);
    }
  }
  drop_zeros(out);
  (void)ring;
  return out;
}

LambdaSeries lambda_inverse(const LambdaSeries& x, const RingData& ring) {
  IntVec zero(x.nvars, 0);
  if (!x.at(zero, ring).equals(ring.one())) throw std::invalid_argument("lambda_inverse needs constant term 1");
  // 1/x = sum_j (1 - x)^j; each factor raises the degree by at least one.
  LambdaSeries u = x;
  u.c.erase(zero);
  for (auto& [k, c] : u.c) c = -c;
  LambdaSeries inv = one_series(x.nvars, x.deg, ring);
  for (unsigned j = 0; j < x.deg; ++j) {
    LambdaSeries next = lambda_mul(u, inv, ring);
    add_to(next.c, zero, ring.one());
    inv = std::move(next);
  }
  return inv;
}

LambdaSeries lambda_dilate(const LambdaSeries& x, unsigned s, unsigned deg) {
  LambdaSeries out;
  out.nvars = x.nvars;
  out.deg = deg;
  for (const auto& [k, c] : x.c) {
    if (static_cast<std::uint64_t>(total(k)) * s > deg) continue;
    IntVec ks = k;
    for (auto& v : ks) v *= s;
    out.c.emplace(ks, c);
  }
  return out;
}

RingElem lambda_eval(const LambdaSeries& x, const std::vector<RingElem>& at, const RingData& ring) {
  RingElem acc = ring.zero();
  for (const auto& [k, c] : x.c) {
    RingElem t = c;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i]) t *= at[i].pow(static_cast<std::uint64_t>(k[i]));
    acc += t;
  }
  return acc;
}

std::map<IntVec, LambdaSeries> all_a_v(const std::vector<IntVec>& supp, unsigned deg, const RingData& ring,
                                       std::uint64_t cap) {
  if (supp.empty()) throw SpecError("empty support");
  const std::size_t n = supp[0].size();
  std::vector<RingElem> g;
  for (unsigned k = 0; k <= deg; ++k) g.push_back(ring.gamma_pow_over_factorial(k));
  std::map<IntVec, LambdaSeries> out;
  std::uint64_t count = 0;
  for_each_profile(supp.size(), deg, [&](const IntVec& k) {
    if (++count > cap) throw CapExceeded("A_v profile enumeration exceeds cap");
    IntVec v(n, 0);
    RingElem c = ring.one();
    for (std::size_t u = 0; u < supp.size(); ++u) {
      for (std::size_t i = 0; i < n; ++i) v[i] += k[u] * supp[u][i];
      if (k[u]) c *= g[k[u]];
    }
    auto it = out.find(v);
    if (it == out.end()) {
      LambdaSeries s;
      s.nvars = supp.size();
      s.deg = deg;
      it = out.emplace(v, std::move(s)).first;
    }
    add_to(it->second.c, k, c);
  });
  for (auto& [v, s] : out) drop_zeros(s);
  return out;
}

LambdaSeries a_v_coeffs(const std::vector<IntVec>& supp, const IntVec& v, unsigned deg, const RingData& ring,
                        std::uint64_t cap) {
  auto all = all_a_v(supp, deg, ring, cap);
  auto it = all.find(v);
  if (it != all.end()) return it->second;
  LambdaSeries s;
  s.nvars = supp.size();
  s.deg = deg;
  return s;
}

bool is_balanced(const BalancedTuple& t, const UnfoldSpec& spec) {
  if (t.w.size() != spec.lcm) return false;
  for (std::size_t i = 0; i < spec.n(); ++i)
    for (unsigned j = 0; j < spec.d[i]; ++j) {
      std::int64_t s = 0;
      for (unsigned m = 0; m < spec.lcm / spec.d[i]; ++m) s += t.w[j + m * spec.d[i]][i];
      if (s != 0) return false;
    }
  return true;
}

namespace {

std::map<IntVec, unsigned> min_degrees(const std::vector<IntVec>& supp, unsigned deg, std::uint64_t cap) {
  const std::size_t n = supp[0].size();
  std::map<IntVec, unsigned> md;
  std::uint64_t count = 0;
  for_each_profile(supp.size(), deg, [&](const IntVec& k) {
    if (++count > cap) throw CapExceeded("A_v profile enumeration exceeds cap");
    IntVec v(n, 0);
    for (std::size_t u = 0; u < supp.size(); ++u)
      for (std::size_t i = 0; i < n; ++i) v[i] += k[u] * supp[u][i];
    unsigned t = total(k);
    auto it = md.find(v);
    if (it == md.end())
      md.emplace(v, t);
    else
      it->second = std::min(it->second, t);
  });
  return md;
}

}  // namespace

std::vector<BalancedTuple> balanced_tuples(const UnfoldSpec& spec, const std::vector<IntVec>& supp, unsigned deg,
                                           std::uint64_t cap) {
  if (supp.empty()) throw SpecError("empty support");
  auto md = min_degrees(supp, deg, cap);
  std::vector<std::pair<IntVec, unsigned>> reach(md.begin(), md.end());
  const unsigned d = spec.lcm;
  std::vector<BalancedTuple> out;
  BalancedTuple cur;
  cur.w.resize(d);
  std::uint64_t visited = 0;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned l, unsigned used) {
    if (++visited > cap) throw CapExceeded("balanced tuple enumeration exceeds cap");
    if (l == d) {
      if (is_balanced(cur, spec)) {
        cur.min_degree = used;
        out.push_back(cur);
      }
      return;
    }
    for (const auto& [v, t] : reach) {
      if (used + t > deg) continue;
      cur.w[l] = v;
      rec(l + 1, used + t);
    }
  };
  rec(0, 0);
  std::stable_sort(out.begin(), out.end(),
                   [](const BalancedTuple& a, const BalancedTuple& b) { return a.min_degree < b.min_degree; });
  for (const auto& t : out)
    if (!is_balanced(t, spec)) throw std::logic_error("unbalanced tuple emitted");
  return out;
}

LambdaSeries g0_series(const UnfoldSpec& spec, const std::vector<IntVec>& supp, unsigned deg, const RingData& ring,
                       std::uint64_t cap) {
  auto A = all_a_v(supp, deg, ring, cap);
  LambdaSeries g0;
  g0.nvars = supp.size();
  g0.deg = deg;
  for (const auto& t : balanced_tuples(spec, supp, deg, cap)) {
    LambdaSeries prod = one_series(supp.size(), deg, ring);
    for (const auto& w : t.w) prod = lambda_mul(prod, A.at(w), ring);
    for (const auto& [k, c] : prod.c) add_to(g0.c, k, c);
  }
  drop_zeros(g0);
  return g0;
}

LambdaSeries ratio_series(const LambdaSeries& g0, const RingData& ring) {
  // 1/G_0(Lambda^p) is the dilation of 1/G_0 cut at deg/p.
  LambdaSeries low;
  low.nvars = g0.nvars;
  low.deg = g0.deg / static_cast<unsigned>(ring.p);
  for (const auto& [k, c] : g0.c)
    if (total(k) <= low.deg) low.c.emplace(k, c);
  LambdaSeries inv = lambda_dilate(lambda_inverse(low, ring), static_cast<unsigned>(ring.p), g0.deg);
  return lambda_mul(g0, inv, ring);
}

HypergeomUnitRoot unit_root_hypergeom(const LaurentPoly& f, const UnfoldSpec& spec, const RingData& ring, unsigned deg,
                                      unsigned step, std::uint64_t cap) {
  LaurentPoly fm = merge_terms(f, ring.residue);
  std::vector<IntVec> supp;
  std::vector<RingElem> c;
  for (const auto& t : fm.terms) {
    supp.push_back(t.exp);
    c.push_back(ring.teichmuller(t.coeff));
  }
  HypergeomUnitRoot res;
  for (unsigned D : {deg, deg + step}) {
    LambdaSeries F = ratio_series(g0_series(spec, supp, D, ring, cap), ring);
    RingElem lambda = ring.one();
    std::vector<RingElem> ci = c;
    for (unsigned i = 0; i < ring.a; ++i) {
      lambda *= lambda_eval(F, ci, ring);
      for (auto& x : ci) x = x.frobenius();
    }
    res.trace.emplace_back(D, lambda);
  }
  res.lambda = res.trace.back().second;
  res.stable_digits = (res.trace[0].second - res.trace[1].second).ord_pi();
  res.one_unit = (res.lambda - ring.one()).ord_pi() >= 1;
  return res;
}

}  // namespace ptes
