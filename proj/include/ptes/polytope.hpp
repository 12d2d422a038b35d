#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ptes/exact.hpp"

namespace ptes {

/// Inequality <normal, x> <= offset with offset 1 (facet away from the origin) or 0 (through it).
struct Facet {
  std::vector<Rational> normal;
  int offset = 1;
};

struct Face {
  std::uint64_t points = 0;  // bitmask over Polytope::points lying on the face
  std::size_t dim = 0;
};

/// Convex hull of the origin and a finite support set.
struct Polytope {
  std::size_t ambient = 0;
  std::vector<IntVec> points;   // origin first, then the distinct support vectors
  std::vector<std::size_t> vertices;
  std::size_t dim = 0;
  std::vector<Facet> facets;
  std::vector<std::vector<Rational>> equations;  // linear span: <e, x> = 0
  std::vector<Face> faces;                       // every nonempty face, including the polytope
};

/// Exact hull by brute-force facet enumeration. Throws CapExceeded beyond 8 ambient dimensions
/// or 63 points.
Polytope newton_polytope(const std::vector<IntVec>& support, std::size_t ambient);

bool in_cone(const Polytope& P, const IntVec& u);

/// Smallest dilation containing u, or nullopt (+infinity) outside the cone.
std::optional<Rational> weight(const Polytope& P, const IntVec& u);

/// Least D with w(Z^N cap cone) in (1/D)Z.
std::uint64_t denominator_D(const Polytope& P);

struct NormalizedVolume {
  BigInt value;
  bool lower_dimensional = false;
};

/// N! Vol, by a pulling triangulation over the face lattice.
NormalizedVolume normalized_volume(const Polytope& P);

struct IntVecHash {
  std::size_t operator()(const IntVec& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

struct WeightedBasis {
  std::vector<IntVec> points;
  std::vector<Rational> weights;
  std::unordered_map<IntVec, std::size_t, IntVecHash> index;
  Rational cut;

  std::size_t size() const { return points.size(); }
  std::optional<std::size_t> find(const IntVec& u) const {
    auto it = index.find(u);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

/// Lattice points of the cone with weight <= cut, ordered by (weight, lex).
WeightedBasis enumerate_monoid(const Polytope& P, const Rational& cut, std::uint64_t cap);

}  // namespace ptes
