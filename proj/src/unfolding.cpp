#include "ptes/unfolding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ptes/errors.hpp"

namespace ptes {

namespace {

std::int64_t pmod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace

void require_coprime(const UnfoldSpec& spec, std::int64_t b) {
  if (std::gcd(pmod(b, spec.lcm), static_cast<std::int64_t>(spec.lcm)) != 1 && spec.lcm != 1)
    throw std::invalid_argument("b = " + std::to_string(b) + " is not coprime to d = " + std::to_string(spec.lcm));
}

LaurentPoly merge_terms(const LaurentPoly& f, const FieldDesc& F) {
  std::map<IntVec, FieldElem> acc;
  for (const auto& t : f.terms) {
    auto it = acc.find(t.exp);
    if (it == acc.end()) {
      acc.emplace(t.exp, t.coeff);
    } else {
      it->second = F.add(it->second, t.coeff);
    }
  }
  LaurentPoly out;
  out.nvars = f.nvars;
  for (auto& [e, c] : acc)
    if (!F.is_zero(c)) out.terms.push_back({e, c});
  return out;
}

UnfoldSpec::UnfoldSpec(std::vector<unsigned> dd) : d(std::move(dd)) {
  if (d.empty()) throw SpecError("d must be nonempty");
  for (auto x : d) {
    if (x == 0) throw SpecError("d_i must be positive");
    offset.push_back(N);
    N += x;
    lcm = static_cast<unsigned>(lcm_u64(lcm, x));
  }
}

std::size_t UnfoldSpec::index(std::size_t i, std::int64_t j) const {
  return offset[i] + static_cast<std::size_t>(pmod(j, d[i]));
}

Unfolded unfold(const LaurentPoly& f, const UnfoldSpec& spec, const FieldDesc& F) {
  if (f.nvars != spec.n()) throw SpecError("f has " + std::to_string(f.nvars) + " variables but d has " +
                                           std::to_string(spec.n()) + " entries");
  LaurentPoly fm = merge_terms(f, F);
  if (fm.terms.empty()) throw SpecError("f is the zero polynomial");
  Unfolded out;
  out.unmerged.nvars = spec.N;
  for (unsigned l = 0; l < spec.lcm; ++l)
    for (const auto& t : fm.terms) {
      IntVec v(spec.N, 0);
      for (std::size_t i = 0; i < spec.n(); ++i) v[spec.index(i, l)] = t.exp[i];
      out.unmerged.terms.push_back({v, t.coeff});
    }
  out.merged = merge_terms(out.unmerged, F);
  return out;
}

IntVec sigma_act(const IntVec& u, const UnfoldSpec& spec, std::int64_t power) {
  IntVec out(spec.N);
  for (std::size_t i = 0; i < spec.n(); ++i)
    for (unsigned j = 0; j < spec.d[i]; ++j) out[spec.index(i, j)] = u[spec.index(i, static_cast<std::int64_t>(j) - power)];
  return out;
}

IntMatrix perm_matrix(const UnfoldSpec& spec, std::int64_t power) {
  IntMatrix m(spec.N, IntVec(spec.N, 0));
  for (std::size_t i = 0; i < spec.n(); ++i)
    for (unsigned j = 0; j < spec.d[i]; ++j) m[spec.index(i, j)][spec.index(i, static_cast<std::int64_t>(j) - power)] = 1;
  return m;
}

std::string perm_cycles(const UnfoldSpec& spec) {
  std::ostringstream os;
  for (std::size_t i = 0; i < spec.n(); ++i) {
    os << '(';
    for (unsigned j = 0; j < spec.d[i]; ++j) os << (j ? " " : "") << spec.index(i, j);
    os << ')';
  }
  return os.str();
}

CharPolyReport char_poly_Pb(const UnfoldSpec& spec, std::int64_t b) {
  require_coprime(spec, b);
  CharPolyReport r;
  std::vector<BigInt> prod{1};
  for (auto di : spec.d) {
    std::vector<BigInt> next(prod.size() + di, 0);
    for (std::size_t k = 0; k < prod.size(); ++k) {
      next[k + di] += prod[k];
      next[k] -= prod[k];
    }
    prod = std::move(next);
  }
  r.product_formula = prod;
  r.explicit_matrix = char_poly(perm_matrix(spec, b));
  r.match = r.product_formula == r.explicit_matrix;
  return r;
}

BigInt fixed_point_count(const UnfoldSpec& spec, std::uint64_t q, unsigned k) {
  BigInt c = 1;
  for (auto di : spec.d) c *= boost::multiprecision::pow(BigInt(q), k * di) - 1;
  return c;
}

FieldElem subfield_generator(const FieldDesc& big, std::uint64_t sub_order) {
  if ((big.order() - 1) % (sub_order - 1)) throw std::invalid_argument("not a subfield order");
  return big.pow(big.primitive(), (big.order() - 1) / (sub_order - 1));
}

FixedPointSet fixed_points(const UnfoldSpec& spec, TowerDesc& tower, unsigned k, std::int64_t b, std::uint64_t cap) {
  require_coprime(spec, b);
  if (k == 0) throw std::invalid_argument("k must be positive");
  BigInt count = fixed_point_count(spec, tower.base().order(), k);
  if (count > cap) throw CapExceeded("|W_k^(b)| = " + count.str() + " exceeds cap");
  FixedPointSet W;
  W.k = k;
  W.b = b;
  W.field = tower.level(k * spec.lcm);
  const FieldDesc& big = W.field;
  const std::uint64_t q = tower.base().order();
  const std::uint64_t qk = checked_pow(q, k);
  const std::size_t n = spec.n();
  std::vector<FieldElem> gens;
  std::vector<std::uint64_t> orders;
  for (auto di : spec.d) {
    orders.push_back(checked_pow(q, k * di) - 1);
    gens.push_back(subfield_generator(big, orders.back() + 1));
  }
  std::vector<std::uint64_t> e(n, 0);
  std::vector<FieldElem> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = big.one();
  auto total = static_cast<std::uint64_t>(count);
  W.points.reserve(total);
  for (std::uint64_t t = 0; t < total; ++t) {
    std::vector<FieldElem> y(spec.N);
    for (std::size_t i = 0; i < n; ++i) {
      FieldElem cur = z[i];
      for (unsigned m = 0; m < spec.d[i]; ++m) {
        y[spec.index(i, static_cast<std::int64_t>(m) * b)] = cur;
        cur = big.pow(cur, qk);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned j = 0; j < spec.d[i]; ++j)
        if (big.pow(y[spec.index(i, j)], qk) != y[spec.index(i, static_cast<std::int64_t>(j) + b)])
          throw std::logic_error("constructed point violates the fixed-point recurrence");
    W.points.push_back(std::move(y));
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = big.mul(z[i], gens[i]);
      if (++e[i] < orders[i]) break;
      e[i] = 0;
      z[i] = big.one();
    }
  }
  return W;
}

bool in_orthogonality_lattice(const UnfoldSpec& spec, std::uint64_t q, unsigned k, std::int64_t b, const IntVec& u) {
  IntMatrix pb = perm_matrix(spec, -b);
  BigInt qk = boost::multiprecision::pow(BigInt(q), k);
  RatMatrix a(spec.N, std::vector<Rational>(spec.N));
  for (std::size_t r = 0; r < spec.N; ++r)
    for (std::size_t c = 0; c < spec.N; ++c) a[r][c] = Rational(qk * pb[r][c] - (r == c ? 1 : 0));
  std::vector<Rational> rhs(u.begin(), u.end());
  auto x = solve_linear(a, rhs);
  if (!x) return false;
  for (const auto& v : *x)
    if (boost::multiprecision::denominator(v) != 1) return false;
  return true;
}

CharSumVerdict character_sum_check(const UnfoldSpec& spec, const FixedPointSet& W, std::uint64_t q, const IntVec& u) {
  const FieldDesc& big = W.field;
  FieldElem s = big.zero();
  for (const auto& y : W.points) {
    FieldElem m = big.one();
    for (std::size_t k = 0; k < spec.N; ++k) {
      if (u[k] > 0) m = big.mul(m, big.pow(y[k], static_cast<std::uint64_t>(u[k])));
      if (u[k] < 0) m = big.mul(m, big.pow(big.inv(y[k]), static_cast<std::uint64_t>(-u[k])));
    }
    s = big.add(s, m);
  }
  CharSumVerdict v;
  auto size_mod_p = static_cast<std::int64_t>(W.points.size() % big.p());
  v.full = s == big.from_int(size_mod_p);
  v.zero = big.is_zero(s);
  v.in_lattice = in_orthogonality_lattice(spec, q, W.k, W.b, u);
  return v;
}

std::vector<BigInt> exterior_traces(const UnfoldSpec& spec, std::int64_t b) {
  require_coprime(spec, b);
  IntMatrix a = perm_matrix(spec, b);
  const std::size_t N = spec.N;
  std::vector<BigInt> tr(N + 1, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < N; ++i)
      if (mask >> i & 1) idx.push_back(i);
    RatMatrix minor(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) minor[r][c] = a[idx[r]][idx[c]];
    tr[idx.size()] += boost::multiprecision::numerator(idx.empty() ? Rational(1) : determinant(minor));
  }
  return tr;
}

std::pair<BigInt, BigInt> koszul_sides(const UnfoldSpec& spec, std::int64_t b, const BigInt& t) {
  auto tr = exterior_traces(spec, b);
  const std::size_t N = spec.N;
  BigInt lhs = 0;
  for (std::size_t m = 0; m <= N; ++m) {
    BigInt term = boost::multiprecision::pow(t, static_cast<unsigned>(N - m)) * tr[m];
    lhs += m % 2 ? -term : term;
  }
  IntMatrix a = perm_matrix(spec, b);
  RatMatrix tm(N, std::vector<Rational>(N));
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) tm[r][c] = Rational((r == c ? t : BigInt(0)) - a[r][c]);
  BigInt rhs = boost::multiprecision::numerator(determinant(tm));
  return {lhs, rhs};
}

std::optional<DegeneracyWitness> degeneracy_witness(const LaurentPoly& G, const Polytope& delta, TowerDesc& tower,
                                                    unsigned m_max, std::uint64_t cap) {
  const std::size_t N = G.nvars;
  for (unsigned m = 1; m <= m_max; ++m) {
    const FieldDesc& F = tower.level(m);
    BigInt size = boost::multiprecision::pow(BigInt(F.order() - 1), static_cast<unsigned>(N));
    if (size > cap) throw CapExceeded("degeneracy search over F_{q^" + std::to_string(m) + "} exceeds cap");
    auto units = F.units(cap);
    for (const auto& face : delta.faces) {
      if (face.points & 1) continue;  // contains the origin
      LaurentPoly gt;
      gt.nvars = N;
      for (const auto& t : G.terms)
        for (std::size_t i = 0; i < delta.points.size(); ++i)
          if ((face.points >> i & 1) && delta.points[i] == t.exp) gt.terms.push_back(t);
      if (gt.terms.empty()) continue;
      std::vector<FieldElem> coeffs;
      for (const auto& t : gt.terms) coeffs.push_back(tower.embed(t.coeff, m));
      std::vector<std::size_t> idx(N, 0);
      auto total = static_cast<std::uint64_t>(size);
      std::vector<FieldElem> y(N, units[0]);
      for (std::uint64_t s = 0; s < total; ++s) {
        std::vector<FieldElem> mono;
        for (std::size_t t = 0; t < gt.terms.size(); ++t) {
          FieldElem v = coeffs[t];
          for (std::size_t k = 0; k < N; ++k) {
            auto e = gt.terms[t].exp[k];
            if (e > 0) v = F.mul(v, F.pow(y[k], static_cast<std::uint64_t>(e)));
            if (e < 0) v = F.mul(v, F.pow(F.inv(y[k]), static_cast<std::uint64_t>(-e)));
          }
          mono.push_back(v);
        }
        bool all_zero = true;
        for (std::size_t k = 0; k < N && all_zero; ++k) {
          FieldElem acc = F.zero();
          for (std::size_t t = 0; t < gt.terms.size(); ++t)
            acc = F.add(acc, F.mul(F.from_int(gt.terms[t].exp[k]), mono[t]));
          all_zero = F.is_zero(acc);
        }
        if (all_zero) return DegeneracyWitness{face, m, y, F};
        for (std::size_t k = 0; k < N; ++k) {
          if (++idx[k] < units.size()) {
            y[k] = units[idx[k]];
            break;
          }
          idx[k] = 0;
          y[k] = units[0];
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace ptes
