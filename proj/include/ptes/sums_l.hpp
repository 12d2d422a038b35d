#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptes/cyclotomic.hpp"
#include "ptes/fields.hpp"
#include "ptes/padics.hpp"
#include "ptes/series.hpp"
#include "ptes/unfolding.hpp"

namespace ptes {

struct BruteSum {
  unsigned k = 0;
  std::vector<std::uint64_t> histogram;  // n_j = #{x : Tr f(x) = j}
  CyclotomicInt S;
  BigInt count;
};

/// S_k by enumerating prod F_{q^{k d_i}}^*. Each factor field must have at most `cap` units.
/// threads = 0 picks the hardware concurrency; the result does not depend on it.
BruteSum brute_sum(const LaurentPoly& f, const UnfoldSpec& spec, TowerDesc& tower, unsigned k, std::uint64_t cap,
                   unsigned threads = 0);

/// The same sum re-indexed over W_k^{(1)}: sum_y zeta^{Tr_{F_{q^k}/F_p} G(y)}.
BruteSum sum_over_fixed_points(const LaurentPoly& G, const FixedPointSet& W, TowerDesc& tower);

using LSeries = TruncSeries<CycloNum>;

/// Coefficients l_0..l_K of exp(sum S_k T^k / k); S[i] holds S_{i+1}.
LSeries l_series(const std::vector<CyclotomicInt>& S);

struct RationalFn {
  std::vector<CycloNum> num;  // constant term 1
  std::vector<CycloNum> den;  // constant term 1
};

/// Expansion of num/den through T^K.
LSeries expand(const RationalFn& r, std::size_t K);

/// Smallest [m/m] Pade approximant with m <= max_deg that reproduces every coefficient, trying
/// m = 0, 1, ... while the series has at least 2m+1 coefficients beyond l_0.
std::optional<RationalFn> reconstruct_rational(const LSeries& L, unsigned max_deg);

/// Predicted S_k read off the logarithmic derivative of r.
CycloNum predict_sum(const RationalFn& r, unsigned k);
bool predict_and_check(const RationalFn& r, unsigned k, const CyclotomicInt& oracle);

struct NewtonSlopes {
  std::vector<Rational> slopes;  // ord_p of reciprocal roots, with multiplicity, ascending
  unsigned unit_count = 0;
};

struct UnitRootReport {
  NewtonSlopes num, den;  // of L^{(-1)^{n-1}}
  std::optional<RingElem> unit_root;
  bool in_numerator = true;
  bool one_unit = false;
};

NewtonSlopes newton_slopes(const std::vector<CycloNum>& poly, const RingData& ring);

/// Slopes of L^{(-1)^{n-1}} and its unique unit reciprocal root, if there is exactly one.
UnitRootReport unit_reciprocal_roots(const RationalFn& r, const RingData& ring, std::size_t n);

}  // namespace ptes
