#pragma once

// Truncated arithmetic in O = Z_q[pi]/(pi^{p-1} + p) at absolute precision p^M.
//
// An element is stored as integer coordinates over pi^j x^i (0 <= j < p-1, 0 <= i < a), each
// kept modulo p^M, together with its precision in pi-units: the element is known modulo
// pi^prec with prec <= (p-1)M. Coordinates above the precision are ignored by comparisons.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "ptes/cyclotomic.hpp"
#include "ptes/exact.hpp"
#include "ptes/fields.hpp"

namespace ptes {

struct RingData;
using Ring = std::shared_ptr<const RingData>;

/// Builds O_M over the residue field `residue`. Requires p^M < 2^42.
Ring make_ring(const FieldDesc& residue, unsigned M);

using Coords = boost::container::small_vector<std::int64_t, 8>;

class RingElem {
 public:
  RingElem() = default;

  const RingData* ring() const { return r_; }
  /// Precision in pi-units.
  int prec() const { return prec_; }
  /// Raw coordinates modulo p^M, index j*a + i for pi^j x^i.
  const Coords& raw() const { return c_; }
  /// Coordinates with digits beyond the precision cleared.
  Coords canonical() const;

  bool is_zero() const;
  /// ord_pi; equals prec() for an element that is zero at its precision.
  int ord_pi() const;
  /// ord_p as a rational, i.e. ord_pi / (p-1).
  Rational ord_p() const;

  RingElem with_prec(int prec) const;

  RingElem& operator+=(const RingElem& o);
  RingElem& operator-=(const RingElem& o);
  RingElem& operator*=(const RingElem& o);
  friend RingElem operator+(RingElem a, const RingElem& b) { return a += b; }
  friend RingElem operator-(RingElem a, const RingElem& b) { return a -= b; }
  friend RingElem operator*(RingElem a, const RingElem& b) { return a *= b; }
  RingElem operator-() const;

  RingElem mul_int(std::int64_t n) const;
  RingElem pow(std::uint64_t e) const;
  /// Division by p^s; throws std::domain_error if not divisible, PrecisionExhausted if the
  /// result would have negative precision.
  RingElem div_p_pow(unsigned s) const;
  RingElem div_int(std::int64_t n) const;
  /// Inverse of a unit.
  RingElem inverse() const;
  /// Frobenius tau on the Z_q coefficients; fixes pi.
  RingElem frobenius(unsigned times = 1) const;
  /// Residue modulo pi as an element of F_q.
  FieldElem residue() const;

  /// Equality modulo pi^min(prec).
  bool equals(const RingElem& o) const { return (*this - o).is_zero(); }

  std::string str() const;

 private:
  friend struct RingData;
  friend RingElem make_elem(const RingData* r, Coords c, int prec);
  const RingData* r_ = nullptr;
  Coords c_;
  int prec_ = 0;
};

RingElem make_elem(const RingData* r, Coords c, int prec);

inline RingElem div_int(const RingElem& x, std::int64_t n) { return x.div_int(n); }

struct RingData {
  std::uint64_t p = 0;
  unsigned a = 0;
  unsigned M = 0;
  unsigned e = 0;         // p - 1
  unsigned ncoords = 0;   // (p-1) a
  std::int64_t mod = 0;   // p^M
  int cap = 0;            // (p-1) M
  FieldDesc residue;
  std::vector<std::int64_t> lifted;            // monic integer lift of the residue modulus
  std::vector<std::vector<std::int64_t>> frob; // tau(x^i) in Z_q, i < a
  std::int64_t gamma_unit = 0;                 // gamma = pi * gamma_unit, gamma_unit in Z_p
  std::vector<RingElem> theta;                 // theta_i, i < (p-1)M
  std::vector<Rational> artin_hasse_exact;     // e_i as rationals
  RingElem zeta;                               // theta(1)
  std::weak_ptr<const RingData> self;

  std::int64_t reduce(__int128 v) const {
    auto r = static_cast<std::int64_t>(v % mod);
    return r < 0 ? r + mod : r;
  }
  /// Coordinate j (pi-power) is known modulo p^{digits(j, prec)}.
  unsigned digits(unsigned j, int prec) const;

  RingElem zero() const;
  RingElem one() const;
  RingElem from_int(std::int64_t n) const;
  RingElem from_bigint(const BigInt& n) const;
  /// A p-integral rational; p in the denominator throws std::domain_error.
  RingElem from_rational(const Rational& r) const;
  RingElem pi() const;
  RingElem gen() const;  // x
  RingElem gamma() const;
  /// Lift of a residue-field element with zero pi-part (not the Teichmuller lift).
  RingElem lift(const FieldElem& z) const;
  RingElem teichmuller(const FieldElem& z) const;
  /// coef * gamma^k with no precision loss; coef * p^{floor(k/(p-1))} must be p-integral.
  RingElem gamma_pow_times(unsigned k, const Rational& coef) const;
  /// gamma^k / k!, computed with no precision loss.
  RingElem gamma_pow_over_factorial(unsigned k) const;
  /// gamma_m = sum_{i<=m} gamma^{p^i}/p^i, exactly to precision.
  RingElem gamma_m(unsigned m) const;
  /// Artin-Hasse coefficients e_0..e_imax reduced mod p^M.
  std::vector<RingElem> artin_hasse(unsigned imax) const;
  /// theta(t) = sum e_i gamma^i t^i, t integral.
  RingElem theta_eval(const RingElem& t) const;
  RingElem zeta_embed(const CyclotomicInt& c) const;
  RingElem zeta_embed(const CycloNum& c) const;
  /// Accumulates the product of two raw coordinate vectors into acc (ncoords entries, not reduced
  /// modulo p^M). Used by the matrix code, which tracks precision separately.
  void mul_acc(const std::int64_t* x, const std::int64_t* y, __int128* acc) const;
};

/// Exact p-integral rationals e_0..e_n of the Artin-Hasse exponential.
std::vector<Rational> artin_hasse_exact(std::uint64_t p, unsigned n);

/// Unit u in Z/p^M with gamma = pi*u, normalised by u = 1 mod p.
std::int64_t gamma_unit(std::uint64_t p, unsigned M);

}  // namespace ptes
