#pragma once

// Exact integer / rational helpers shared by the combinatorial modules.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ptes {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

using IntVec = std::vector<std::int64_t>;
using RatMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

bool is_prime(std::uint64_t n);

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

std::uint64_t ipow(std::uint64_t base, unsigned exp);

/// base^exp, throwing std::overflow_error if the result does not fit in 63 bits.
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

/// p-adic valuation of a nonzero integer.
unsigned valuation(std::int64_t n, std::uint64_t p);
unsigned valuation(const BigInt& n, std::uint64_t p);

/// Inverse of a modulo m; a must be a unit mod m.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

/// Reduces a p-integral rational modulo m = p^k. Throws if the denominator is not a unit.
std::int64_t reduce_rational(const Rational& r, std::int64_t m);

std::string to_string(const Rational& r);

/// Solves A x = b exactly. Returns nullopt when the system is inconsistent; free variables are set
/// to zero when the solution is not unique.
std::optional<std::vector<Rational>> solve_linear(RatMatrix a, std::vector<Rational> b);

std::size_t rank(RatMatrix a);

Rational determinant(RatMatrix a);

/// Basis of the rational null space of A (columns returned as vectors).
std::vector<std::vector<Rational>> nullspace(RatMatrix a, std::size_t ncols);

/// Z-basis of { x in Z^n : E x = 0 } for an integer matrix E with n columns.
std::vector<IntVec> integer_kernel(const IntMatrix& e, std::size_t n);

/// Characteristic polynomial det(tI - A) by Faddeev–LeVerrier, little-endian coefficients.
std::vector<BigInt> char_poly(const IntMatrix& a);

/// Scales a rational vector to a primitive integer vector with the same direction.
IntVec primitive_integer_vector(const std::vector<Rational>& v);

}  // namespace ptes
