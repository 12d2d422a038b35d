#pragma once

// Dwork's analytic side on the weighted monomial basis of the cone over Delta(G):
// coefficients of F and F_a, the truncated matrix of alpha_a, twisted traces, twisted Fredholm
// determinants and the commutation diagnostics.
//
// Precision: every series coefficient is computed modulo p^M and a coefficient is dropped only
// when it vanishes modulo p^M, so F_a itself carries no truncation error. Basis truncation at
// weight W_cut perturbs traces by terms of pi-order at least (p-1) W_cut.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ptes/cyclotomic.hpp"
#include "ptes/padics.hpp"
#include "ptes/polytope.hpp"
#include "ptes/series.hpp"
#include "ptes/sums_l.hpp"
#include "ptes/unfolding.hpp"

namespace ptes {

struct LiftedTerm {
  IntVec exp;
  RingElem coeff;  // Teichmuller lift
};

std::vector<LiftedTerm> lift_terms(const LaurentPoly& unmerged, const RingData& ring);

/// Sparse series sum C_w y^w over O_M.
struct SeriesCoeffs {
  std::unordered_map<IntVec, RingElem, IntVecHash> c;
  int prec = 0;  // pi-adic precision shared by every coefficient

  std::size_t size() const { return c.size(); }
  RingElem at(const IntVec& w, const RingData& ring) const;
};

/// F(y) = prod_t theta(c_t y^{v_t}) over the unmerged lifted terms.
SeriesCoeffs f_coeffs(const std::vector<LiftedTerm>& terms, const RingData& ring, std::uint64_t cap);

/// F_a(y) = F(y) F^tau(y^p) ... F^{tau^{a-1}}(y^{p^{a-1}}).
SeriesCoeffs fa_coeffs(const SeriesCoeffs& F, unsigned a, const RingData& ring, std::uint64_t cap);

/// F_a(y) F_a(y^q) ... F_a(y^{q^{k-1}}).
SeriesCoeffs frobenius_product(const SeriesCoeffs& Fa, std::uint64_t q, unsigned k, const RingData& ring,
                               std::uint64_t cap);

/// Square sparse matrix over O_M; raw coordinates are residues modulo p^M.
struct OpMatrix {
  const RingData* ring = nullptr;
  std::size_t n = 0;
  int prec = 0;
  struct Row {
    std::vector<std::uint32_t> cols;  // ascending
    std::vector<std::int64_t> vals;   // ncoords per entry
  };
  std::vector<Row> rows;

  RingElem get(std::size_t r, std::size_t c) const;
  std::size_t nnz() const;
};

OpMatrix op_mul(const OpMatrix& x, const OpMatrix& y);

/// Matrix of alpha_a on a weighted basis: entry (v, u) is C_{qv-u}.
struct TruncOp {
  WeightedBasis basis;
  OpMatrix A;
  std::uint64_t q = 0;
  unsigned a = 0;
  /// pi-order below which basis truncation cannot affect traces or the unit eigenvalue.
  int tail_prec = 0;
};

TruncOp alpha_matrix(const SeriesCoeffs& Fa, WeightedBasis basis, std::uint64_t q, unsigned a, const RingData& ring);

/// Everything the analytic side needs for one problem.
struct DworkContext {
  Ring ring;
  UnfoldSpec spec;
  std::uint64_t q = 0;
  unsigned a = 0;
  Unfolded G;
  std::vector<LiftedTerm> lifted;
  Polytope delta;  // Newton polytope of the unmerged unfolded support
  SeriesCoeffs F, Fa;
};

DworkContext make_context(const LaurentPoly& f, const UnfoldSpec& spec, const FieldDesc& Fq, unsigned M,
                          std::uint64_t cap);

TruncOp build_op(const DworkContext& ctx, const Rational& w_cut, std::uint64_t cap);

/// Tr(sigma^b alpha_a^k) = sum_u (A^k)[P^{-b}u][u]; precision is min(matrix, tail).
RingElem twisted_trace(const TruncOp& op, const UnfoldSpec& spec, std::int64_t b, unsigned k);

/// The same trace read off F_a^{(k)} directly: sum of C_w over w = (q^k P^{-b} - I)u, u in the cone.
RingElem trace_by_coefficients(const DworkContext& ctx, std::int64_t b, unsigned k, std::uint64_t cap);

BigInt twist_det(const UnfoldSpec& spec, std::uint64_t q, unsigned k, std::int64_t b);

struct TraceCheck {
  unsigned k = 0;
  std::int64_t b = 0;
  RingElem trace;
  RingElem lhs;  // det(q^k I - P^b) Tr
  RingElem rhs;  // S_k embedded
  Rational residual;  // ord_p(lhs - rhs), capped at the precision
  Rational prec;      // ord_p precision of the comparison
  bool zero = false;  // lhs == rhs at that precision
};

TraceCheck trace_formula_check(const TruncOp& op, const UnfoldSpec& spec, std::int64_t b, unsigned k,
                               const CyclotomicInt& S);

/// exp(-sum T_k T^k / k); precision losses from the divisions are carried by the coefficients.
TruncSeries<RingElem> twisted_fredholm(const std::vector<RingElem>& traces);

struct FactorizationReport {
  std::vector<RingElem> lhs;  // L^{(-1)^{n-1}}
  std::vector<RingElem> rhs;  // det^{delta_d}
  std::vector<Rational> residual;  // ord_p of the difference, capped at its precision
  std::vector<Rational> prec;
  Rational min_prec;
  bool zero = true;
};

FactorizationReport verify_factorization(const LSeries& L, const TruncSeries<RingElem>& det,
                                         const std::vector<unsigned>& d, std::uint64_t q, const RingData& ring);

struct PowerIteration {
  RingElem lambda;
  std::vector<RingElem> eigvec;
  unsigned iterations = 0;
  bool structure_ok = false;  // A_00 = 1 and every other rescaled entry = 0 mod pi
  bool sigma_fixed = false;
  bool one_unit = false;
};

PowerIteration unit_root_power_iteration(const TruncOp& op, const UnfoldSpec& spec, unsigned max_iter = 0);

struct SigmaCheck {
  std::size_t compared = 0;
  std::size_t mismatches = 0;
};

/// Exact comparison A[P^{-1}v][u] == A[v][Pu] wherever both indices lie in the basis.
SigmaCheck sigma_commutation_check(const TruncOp& op, const UnfoldSpec& spec);

/// Coefficients of y_{i,j} dH/dy_{i,j} with H = sum_m gamma_m G^{tau^m}(y^{p^m}).
SeriesCoeffs log_derivative_H(const DworkContext& ctx, std::size_t var);

/// Matrix of D_{i,j} = y d/dy + y dH/dy on the basis (entries leaving the basis dropped).
OpMatrix differential_matrix(const DworkContext& ctx, const TruncOp& op, std::size_t var);

/// D applied to a truncated element given as exponent -> coefficient.
SeriesCoeffs differential_apply(const DworkContext& ctx, std::size_t var, const SeriesCoeffs& xi,
                                const Rational& w_cut);

struct CommutationCheck {
  std::size_t var = 0;
  Rational interior;    // weight bound of the compared indices
  std::size_t compared = 0;
  Rational residual;    // min ord_p of q D A - A D on the interior
  Rational prec;
  bool zero = true;
};

CommutationCheck commutation_check(const DworkContext& ctx, const TruncOp& op, std::size_t var);

/// sum over the Teichmuller points of W_k^{(1)} of F_a(y) F_a(y^q) ... F_a(y^{q^{k-1}}), evaluated
/// in O_M over F_{q^{kd}}, next to S_k embedded in the same ring.
struct WSetSum {
  Ring ring;
  RingElem value;
  RingElem expected;
  Rational residual;
  bool zero = false;
  std::size_t points = 0;
};

WSetSum w_set_sum(const LaurentPoly& f, const UnfoldSpec& spec, TowerDesc& tower, unsigned k, unsigned M,
                  const CyclotomicInt& S, std::uint64_t cap);

}  // namespace ptes
