#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptes/exact.hpp"
#include "ptes/fields.hpp"
#include "ptes/polytope.hpp"

namespace ptes {

struct Monomial {
  IntVec exp;
  FieldElem coeff;
};

/// Laurent polynomial with coefficients in a finite field.
struct LaurentPoly {
  std::size_t nvars = 0;
  std::vector<Monomial> terms;
};

/// Sorts by exponent, merges like terms and drops zero coefficients.
LaurentPoly merge_terms(const LaurentPoly& f, const FieldDesc& F);

struct UnfoldSpec {
  std::vector<unsigned> d;
  std::vector<std::size_t> offset;  // index of y_{i,0}
  std::size_t N = 0;
  unsigned lcm = 1;

  explicit UnfoldSpec(std::vector<unsigned> dd);
  std::size_t n() const { return d.size(); }
  std::size_t index(std::size_t i, std::int64_t j) const;
};

struct Unfolded {
  LaurentPoly merged;      // G with like terms combined
  LaurentPoly unmerged;    // one term per (shift l, term of f), in (l, term) order
};

Unfolded unfold(const LaurentPoly& f, const UnfoldSpec& spec, const FieldDesc& F);

/// Evaluates a Laurent polynomial at a torus point of a (possibly larger) field; coefficients are
/// mapped through `embed`.
template <class Embed>
FieldElem evaluate(const LaurentPoly& g, const FieldDesc& big, const std::vector<FieldElem>& y, Embed&& embed);

/// Throws std::invalid_argument unless gcd(b, lcm d) = 1.
void require_coprime(const UnfoldSpec& spec, std::int64_t b);

/// P^power u, with (Pu)_{i,j} = u_{i,(j-1) mod d_i}.
IntVec sigma_act(const IntVec& u, const UnfoldSpec& spec, std::int64_t power);

/// Explicit permutation matrix of P^power.
IntMatrix perm_matrix(const UnfoldSpec& spec, std::int64_t power);

/// Cycle notation of P, e.g. "(0)(1 2)" over flat indices.
std::string perm_cycles(const UnfoldSpec& spec);

struct CharPolyReport {
  std::vector<BigInt> product_formula;  // prod (t^{d_i} - 1), little-endian
  std::vector<BigInt> explicit_matrix;  // det(tI - P^b) of the explicit matrix
  bool match = false;
};

/// Throws std::invalid_argument unless gcd(b, lcm d) = 1.
CharPolyReport char_poly_Pb(const UnfoldSpec& spec, std::int64_t b);

/// prod (q^{k d_i} - 1) = det(q^k I - P^b).
BigInt fixed_point_count(const UnfoldSpec& spec, std::uint64_t q, unsigned k);

struct FixedPointSet {
  unsigned k = 0;
  std::int64_t b = 0;
  FieldDesc field;  // F_{q^{k d}}, holding every coordinate
  std::vector<std::vector<FieldElem>> points;
};

/// W_k^{(b)} built from prod F_{q^{k d_i}}^* through the recurrence y_{i,mb} = y_{i,0}^{q^{mk}}; every
/// point is checked against y_{i,j}^{q^k} = y_{i,j+b}.
FixedPointSet fixed_points(const UnfoldSpec& spec, TowerDesc& tower, unsigned k, std::int64_t b, std::uint64_t cap);

/// Generator of F_{q^{k d_i}}^* inside F_{q^{k d}}.
FieldElem subfield_generator(const FieldDesc& big, std::uint64_t sub_order);

struct CharSumVerdict {
  bool full = false;        // sum equals |W|
  bool zero = false;        // sum vanishes
  bool in_lattice = false;  // u in (q^k P^{-b} - I) Z^N
  bool agree() const { return (full && in_lattice) || (zero && !in_lattice); }
};

/// Whether u lies in (q^k P^{-b} - I) Z^N, by exact rational solving (the matrix is nonsingular).
bool in_orthogonality_lattice(const UnfoldSpec& spec, std::uint64_t q, unsigned k, std::int64_t b, const IntVec& u);

CharSumVerdict character_sum_check(const UnfoldSpec& spec, const FixedPointSet& W, std::uint64_t q, const IntVec& u);

/// Tr(wedge^m P^b), m = 0..N, as sums of principal minors.
std::vector<BigInt> exterior_traces(const UnfoldSpec& spec, std::int64_t b);

/// Sum_m (-1)^m t^{N-m} Tr(wedge^m P^b) evaluated at t, next to det(tI - P^b) of the explicit matrix.
std::pair<BigInt, BigInt> koszul_sides(const UnfoldSpec& spec, std::int64_t b, const BigInt& t);

struct DegeneracyWitness {
  Face face;
  unsigned m = 0;  // the point lives in F_{q^m}
  std::vector<FieldElem> point;
  FieldDesc field;
};

/// Searches faces of Delta(G) avoiding the origin for a torus point over F_{q^m}, m <= m_max, where
/// every y_{ij} dG_face/dy_{ij} vanishes. A result certifies degeneracy; absence proves nothing.
std::optional<DegeneracyWitness> degeneracy_witness(const LaurentPoly& G, const Polytope& delta, TowerDesc& tower,
                                                    unsigned m_max, std::uint64_t cap);

template <class Embed>
FieldElem evaluate(const LaurentPoly& g, const FieldDesc& big, const std::vector<FieldElem>& y, Embed&& embed) {
  std::vector<FieldElem> inv;
  inv.reserve(y.size());
  for (const auto& v : y) inv.push_back(big.inv(v));
  FieldElem acc = big.zero();
  for (const auto& t : g.terms) {
    FieldElem m = embed(t.coeff);
    for (std::size_t k = 0; k < y.size(); ++k) {
      auto e = t.exp[k];
      if (e > 0) m = big.mul(m, big.pow(y[k], static_cast<std::uint64_t>(e)));
      if (e < 0) m = big.mul(m, big.pow(inv[k], static_cast<std::uint64_t>(-e)));
    }
    acc = big.add(acc, m);
  }
  return acc;
}

}  // namespace ptes
