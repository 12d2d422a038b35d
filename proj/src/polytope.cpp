#include "ptes/polytope.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "ptes/errors.hpp"

namespace ptes {

namespace {

Rational dot(const std::vector<Rational>& a, const IntVec& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (x[i]) s += a[i] * x[i];
  return s;
}

Rational dotr(const std::vector<Rational>& a, const std::vector<Rational>& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

std::size_t affine_rank(const std::vector<IntVec>& pts, std::uint64_t mask) {
  RatMatrix rows;
  const IntVec* base = nullptr;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(mask >> i & 1)) continue;
    if (!base) {
      base = &pts[i];
      continue;
    }
    std::vector<Rational> r;
    for (std::size_t k = 0; k < pts[i].size(); ++k) r.emplace_back(pts[i][k] - (*base)[k]);
    rows.push_back(std::move(r));
  }
  return rows.empty() ? 0 : rank(rows);
}

// Visits every size-k subset of {0..n-1} in lex order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Polytope newton_polytope(const std::vector<IntVec>& support, std::size_t ambient) {
  if (ambient > 8) throw CapExceeded("newton_polytope: ambient dimension above 8");
  Polytope P;
  P.ambient = ambient;
  std::set<IntVec> uniq;
  P.points.push_back(IntVec(ambient, 0));
  uniq.insert(P.points[0]);
  for (const auto& v : support) {
    if (v.size() != ambient) throw std::invalid_argument("support vector of wrong length");
    if (uniq.insert(v).second) P.points.push_back(v);
  }
  const std::size_t np = P.points.size();
  if (np > 63) throw CapExceeded("newton_polytope: more than 63 points");

  // Coordinates in a basis B of the linear span (the origin is a point, so span = affine hull).
  RatMatrix all;
  for (const auto& v : P.points) {
    std::vector<Rational> r(v.begin(), v.end());
    all.push_back(r);
  }
  std::vector<std::size_t> basis_idx;
  {
    RatMatrix cur;
    for (std::size_t i = 1; i < np; ++i) {
      cur.push_back(all[i]);
      if (rank(cur) == cur.size()) {
        basis_idx.push_back(i);
      } else {
        cur.pop_back();
      }
    }
  }
  const std::size_t r = basis_idx.size();
  P.dim = r;
  // Equations of the span: null space of the basis rows.
  {
    RatMatrix b;
    for (auto i : basis_idx) b.push_back(all[i]);
    if (r == 0) {
      for (std::size_t k = 0; k < ambient; ++k) {
        std::vector<Rational> e(ambient, Rational(0));
        e[k] = 1;
        P.equations.push_back(e);
      }
    } else {
      P.equations = nullspace(b, ambient);
    }
  }
  // Span coordinates: solve B^T lambda = x for every point.
  RatMatrix bt(ambient, std::vector<Rational>(r));
  for (std::size_t k = 0; k < ambient; ++k)
    for (std::size_t j = 0; j < r; ++j) bt[k][j] = all[basis_idx[j]][k];
  std::vector<std::vector<Rational>> lam(np);
  for (std::size_t i = 0; i < np; ++i) {
    auto s = solve_linear(bt, all[i]);
    if (!s) throw std::logic_error("point outside its own span");
    lam[i] = *s;
  }
  // Left inverse L (r x ambient) with L B^T = I: lambda(x) = L x on the span. Taking r independent
  // rows of B^T suffices.
  RatMatrix left(r, std::vector<Rational>(ambient, Rational(0)));
  if (r > 0) {
    std::vector<std::size_t> rows;
    RatMatrix cur;
    for (std::size_t k = 0; k < ambient && rows.size() < r; ++k) {
      cur.push_back(bt[k]);
      if (rank(cur) == cur.size()) {
        rows.push_back(k);
      } else {
        cur.pop_back();
      }
    }
    for (std::size_t j = 0; j < r; ++j) {
      // Column j of the inverse of the square submatrix cur.
      std::vector<Rational> e(r, Rational(0));
      e[j] = 1;
      RatMatrix ct(r, std::vector<Rational>(r));
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) ct[a][b] = cur[b][a];
      // Row j of inv(cur) solves cur^T y = e_j.
      auto y = solve_linear(ct, e);
      for (std::size_t a = 0; a < r; ++a) left[j][rows[a]] = (*y)[a];
    }
  }

  // Facets in span coordinates.
  std::set<std::vector<Rational>> seen;
  std::vector<std::pair<std::vector<Rational>, int>> span_facets;
  if (r >= 1) {
    for_each_subset(np, r, [&](const std::vector<std::size_t>& sub) {
      RatMatrix m;
      for (auto i : sub) {
        auto row = lam[i];
        row.emplace_back(-1);
        m.push_back(std::move(row));
      }
      auto ns = nullspace(m, r + 1);
      if (ns.size() != 1) return;
      std::vector<Rational> l(ns[0].begin(), ns[0].begin() + static_cast<std::ptrdiff_t>(r));
      Rational c = ns[0][r];
      bool all_zero = true;
      for (auto& x : l) all_zero &= x == 0;
      if (all_zero) return;
      int off;
      if (c != 0) {
        for (auto& x : l) x /= c;
        off = 1;
      } else {
        off = 0;
        // Sign fixed below from the other points; scale to a primitive form for deduplication.
        auto prim = primitive_integer_vector(l);
        for (std::size_t k = 0; k < r; ++k) l[k] = prim[k];
      }
      bool le = true, ge = true;
      for (std::size_t i = 0; i < np; ++i) {
        Rational v = dotr(l, lam[i]);
        if (v > off) le = false;
        if (v < off) ge = false;
      }
      if (off == 1 && !le) return;  // origin lies on the <= side, so the other side is not valid
      if (off == 0) {
        if (!le && !ge) return;
        if (!le)
          for (auto& x : l) x = -x;
      }
      if (seen.insert(l).second) span_facets.emplace_back(l, off);
    });
  }
  // Ambient functionals: l . (L x).
  for (auto& [l, off] : span_facets) {
    Facet f;
    f.offset = off;
    f.normal.assign(ambient, Rational(0));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < ambient; ++k) f.normal[k] += l[j] * left[j][k];
    P.facets.push_back(std::move(f));
  }
  std::sort(P.facets.begin(), P.facets.end(), [](const Facet& a, const Facet& b) {
    if (a.offset != b.offset) return a.offset > b.offset;
    return a.normal < b.normal;
  });

  // Face lattice: closure of facet point-sets under intersection.
  const std::uint64_t full = np == 64 ? ~0ULL : ((std::uint64_t{1} << np) - 1);
  std::set<std::uint64_t> faces{full};
  std::vector<std::uint64_t> facet_masks;
  for (const auto& f : P.facets) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < np; ++i)
      if (dot(f.normal, P.points[i]) == f.offset) m |= std::uint64_t{1} << i;
    facet_masks.push_back(m);
  }
  std::vector<std::uint64_t> frontier(facet_masks.begin(), facet_masks.end());
  for (auto m : frontier) faces.insert(m);
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (auto m : frontier)
      for (auto fm : facet_masks) {
        std::uint64_t x = m & fm;
        if (x && faces.insert(x).second) next.push_back(x);
      }
    frontier = std::move(next);
  }
  for (auto m : faces) P.faces.push_back({m, affine_rank(P.points, m)});
  std::sort(P.faces.begin(), P.faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    return a.points < b.points;
  });
  for (const auto& f : P.faces)
    if (f.dim == 0) P.vertices.push_back(static_cast<std::size_t>(std::countr_zero(f.points)));
  if (r == 0) P.vertices = {0};
  std::sort(P.vertices.begin(), P.vertices.end());
  return P;
}

bool in_cone(const Polytope& P, const IntVec& u) {
  for (const auto& e : P.equations)
    if (dot(e, u) != 0) return false;
  for (const auto& f : P.facets)
    if (f.offset == 0 && dot(f.normal, u) > 0) return false;
  return true;
}

std::optional<Rational> weight(const Polytope& P, const IntVec& u) {
  if (!in_cone(P, u)) return std::nullopt;
  Rational w = 0;
  for (const auto& f : P.facets)
    if (f.offset == 1) w = std::max(w, dot(f.normal, u));
  return w;
}

std::uint64_t denominator_D(const Polytope& P) {
  // Lattice of the span: integer kernel of the (cleared) span equations.
  IntMatrix e;
  for (const auto& row : P.equations) e.push_back(primitive_integer_vector(row));
  std::vector<IntVec> lattice;
  if (e.empty()) {
    for (std::size_t k = 0; k < P.ambient; ++k) {
      IntVec v(P.ambient, 0);
      v[k] = 1;
      lattice.push_back(v);
    }
  } else {
    lattice = integer_kernel(e, P.ambient);
  }
  std::uint64_t D = 1;
  for (const auto& f : P.facets) {
    if (f.offset != 1) continue;
    // The values of f on the lattice form g Z with g the rational gcd of the basis values.
    BigInt num_g = 0, den_l = 1;
    std::vector<Rational> vals;
    for (const auto& v : lattice) vals.push_back(dot(f.normal, v));
    for (const auto& x : vals) {
      BigInt d = boost::multiprecision::denominator(x);
      den_l = den_l / boost::multiprecision::gcd(den_l, d) * d;
    }
    for (const auto& x : vals) num_g = boost::multiprecision::gcd(num_g, boost::multiprecision::numerator(x * Rational(den_l)));
    if (num_g == 0) continue;
    Rational g(num_g, den_l);
    D = lcm_u64(D, static_cast<std::uint64_t>(boost::multiprecision::denominator(g)));
  }
  return D;
}

namespace {

void triangulate(const Polytope& P, std::uint64_t face, std::size_t dim, std::vector<std::vector<std::size_t>>& out,
                 std::vector<std::size_t>& prefix) {
  std::uint64_t verts = 0;
  for (auto v : P.vertices) verts |= std::uint64_t{1} << v;
  std::uint64_t fv = face & verts;
  std::size_t apex = static_cast<std::size_t>(std::countr_zero(fv));
  if (dim == 0) {
    prefix.push_back(apex);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  prefix.push_back(apex);
  for (const auto& g : P.faces) {
    if (g.dim + 1 != dim) continue;
    if ((g.points & face) != g.points || g.points == face) continue;
    if (g.points >> apex & 1) continue;
    triangulate(P, g.points, g.dim, out, prefix);
  }
  prefix.pop_back();
}

}  // namespace

NormalizedVolume normalized_volume(const Polytope& P) {
  if (P.dim < P.ambient) return {0, true};
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> prefix;
  triangulate(P, P.faces.front().points, P.dim, simplices, prefix);
  BigInt total = 0;
  for (const auto& s : simplices) {
    RatMatrix m;
    for (std::size_t k = 1; k < s.size(); ++k) {
      std::vector<Rational> row;
      for (std::size_t c = 0; c < P.ambient; ++c) row.emplace_back(P.points[s[k]][c] - P.points[s[0]][c]);
      m.push_back(std::move(row));
    }
    Rational det = determinant(m);
    total += boost::multiprecision::numerator(Rational(abs(det)));
  }
  return {total, false};
}

WeightedBasis enumerate_monoid(const Polytope& P, const Rational& cut, std::uint64_t cap) {
  WeightedBasis B;
  B.cut = cut;
  const std::size_t n = P.ambient;
  // Bounding box of cut * Delta.
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (const auto& v : P.points)
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  std::uint64_t box = 1;
  for (std::size_t k = 0; k < n; ++k) {
    Rational l = cut * lo[k], h = cut * hi[k];
    // floor / ceil of rationals
    BigInt lf = boost::multiprecision::numerator(l) / boost::multiprecision::denominator(l);
    if (lf * boost::multiprecision::denominator(l) > boost::multiprecision::numerator(l)) lf -= 1;
    BigInt hf = boost::multiprecision::numerator(h) / boost::multiprecision::denominator(h);
    if (hf * boost::multiprecision::denominator(h) > boost::multiprecision::numerator(h)) hf -= 1;
    lo[k] = static_cast<std::int64_t>(lf);
    hi[k] = static_cast<std::int64_t>(hf);
    std::uint64_t width = static_cast<std::uint64_t>(hi[k] - lo[k] + 1);
    if (box > cap / width) throw CapExceeded("monoid enumeration box exceeds cap");
    box *= width;
  }
  std::vector<std::pair<Rational, IntVec>> found;
  IntVec u = lo;
  for (std::uint64_t t = 0; t < box; ++t) {
    auto w = weight(P, u);
    if (w && *w <= cut) found.emplace_back(*w, u);
    for (std::size_t k = 0; k < n; ++k) {
      if (++u[k] <= hi[k]) break;
      u[k] = lo[k];
    }
  }
  std::sort(found.begin(), found.end());
  for (auto& [w, v] : found) {
    B.index.emplace(v, B.points.size());
    B.points.push_back(v);
    B.weights.push_back(w);
  }
  if (n == 0) {
    B.points = {IntVec{}};
    B.weights = {Rational(0)};
    B.index.emplace(IntVec{}, 0);
  }
  return B;
}

}  // namespace ptes
