#pragma once

// The unit root as a specialised ratio of A-hypergeometric series:
// exp(gamma f_Lambda(x)) = sum_v A_v(Lambda) x^v, G_0 = sum over balanced tuples of prod_l A_{w^(l)},
// F(Lambda) = G_0(Lambda) / G_0(Lambda^p), lambda_0 = F(c) F(c^p) ... F(c^{p^{a-1}}).
//
// Every coefficient gamma^k / k! is integral, so the series carry no precision loss; the only
// error is the total-degree truncation Deg, which is controlled by stabilization runs.

#include <cstdint>
#include <map>
#include <vector>

#include "ptes/padics.hpp"
#include "ptes/unfolding.hpp"

namespace ptes {

/// Truncated power series in the parameters Lambda_u, keyed by exponent vectors.
struct LambdaSeries {
  std::size_t nvars = 0;
  unsigned deg = 0;  // total-degree cut
  std::map<IntVec, RingElem> c;

  RingElem at(const IntVec& k, const RingData& ring) const;
};

LambdaSeries lambda_mul(const LambdaSeries& x, const LambdaSeries& y, const RingData& ring);
/// Inverse of a series with constant term 1.
LambdaSeries lambda_inverse(const LambdaSeries& x, const RingData& ring);
/// x(Lambda^s), cut at total degree deg.
LambdaSeries lambda_dilate(const LambdaSeries& x, unsigned s, unsigned deg);
RingElem lambda_eval(const LambdaSeries& x, const std::vector<RingElem>& at, const RingData& ring);

/// A_v(Lambda) truncated at total degree deg.
LambdaSeries a_v_coeffs(const std::vector<IntVec>& supp, const IntVec& v, unsigned deg, const RingData& ring,
                        std::uint64_t cap);

/// All A_v with a nonzero monomial of degree <= deg.
std::map<IntVec, LambdaSeries> all_a_v(const std::vector<IntVec>& supp, unsigned deg, const RingData& ring,
                                       std::uint64_t cap);

struct BalancedTuple {
  std::vector<IntVec> w;  // w^(0), ..., w^(d-1)
  unsigned min_degree = 0;
};

bool is_balanced(const BalancedTuple& t, const UnfoldSpec& spec);

/// Tuples of reachable exponents whose lowest Lambda-degree is at most deg, zero tuple first.
std::vector<BalancedTuple> balanced_tuples(const UnfoldSpec& spec, const std::vector<IntVec>& supp, unsigned deg,
                                           std::uint64_t cap);

LambdaSeries g0_series(const UnfoldSpec& spec, const std::vector<IntVec>& supp, unsigned deg, const RingData& ring,
                       std::uint64_t cap);

/// G_0(Lambda) / G_0(Lambda^p) through total degree g0.deg.
LambdaSeries ratio_series(const LambdaSeries& g0, const RingData& ring);

struct HypergeomUnitRoot {
  RingElem lambda;
  std::vector<std::pair<unsigned, RingElem>> trace;  // (Deg, lambda) per run
  int stable_digits = 0;  // pi-digits on which the last two runs agree
  bool one_unit = false;
};

/// lambda_0 = prod_{i<a} F(c^{p^i}) at Teichmuller coefficients, evaluated at Deg and Deg + step.
HypergeomUnitRoot unit_root_hypergeom(const LaurentPoly& f, const UnfoldSpec& spec, const RingData& ring, unsigned deg,
                                      unsigned step, std::uint64_t cap);

}  // namespace ptes
