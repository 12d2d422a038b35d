#pragma once

// Truncated power series in T, generic over the coefficient type (RingElem or CycloNum).
// A series is its coefficient vector c_0..c_K.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ptes/cyclotomic.hpp"
#include "ptes/padics.hpp"

namespace ptes {

template <class T>
using TruncSeries = std::vector<T>;

inline RingElem scalar_like(const RingElem& like, const BigInt& n) { return like.ring()->from_bigint(n); }
inline CycloNum scalar_like(const CycloNum& like, const BigInt& n) {
  return CycloNum::constant(like.p(), Rational(n));
}
inline bool is_one(const RingElem& x) { return x.equals(x.ring()->one()); }
inline bool is_one(const CycloNum& x) { return x == CycloNum::constant(x.p(), Rational(1)); }

template <class T>
TruncSeries<T> series_mul(const TruncSeries<T>& a, const TruncSeries<T>& b) {
  std::size_t n = std::min(a.size(), b.size());
  TruncSeries<T> out;
  for (std::size_t m = 0; m < n; ++m) {
    T acc = a[0] * b[m];
    for (std::size_t i = 1; i <= m; ++i) acc += a[i] * b[m - i];
    out.push_back(acc);
  }
  return out;
}

/// Inverse of a series with constant term 1.
template <class T>
TruncSeries<T> series_inverse(const TruncSeries<T>& a) {
  if (a.empty() || !is_one(a[0])) throw std::invalid_argument("series inverse needs constant term 1");
  TruncSeries<T> out{a[0]};
  for (std::size_t m = 1; m < a.size(); ++m) {
    T acc = a[1] * out[m - 1];
    for (std::size_t i = 2; i <= m; ++i) acc += a[i] * out[m - i];
    out.push_back(-acc);
  }
  return out;
}

/// F(c T).
template <class T>
TruncSeries<T> series_dilate(const TruncSeries<T>& a, const BigInt& c) {
  TruncSeries<T> out;
  BigInt cm = 1;
  for (const auto& x : a) {
    out.push_back(x * scalar_like(x, cm));
    cm *= c;
  }
  return out;
}

/// exp(sum_{k>=1} s_k T^k / k) from power sums s_1..s_K (s[0] ignored), by the Newton recursion
/// m c_m = sum_{i=1}^m s_i c_{m-i}.
template <class T>
TruncSeries<T> exp_power_sums(const std::vector<T>& s, const T& one) {
  TruncSeries<T> c{one};
  for (std::size_t m = 1; m < s.size(); ++m) {
    T acc = s[1] * c[m - 1];
    for (std::size_t i = 2; i <= m; ++i) acc += s[i] * c[m - i];
    c.push_back(div_int(acc, static_cast<std::int64_t>(m)));
  }
  return c;
}

/// Prod over subsets I of {1..n} of F(q^{d_I} T)^{(-1)^{|I|}}.
template <class T>
TruncSeries<T> delta_d(const TruncSeries<T>& f, const std::vector<unsigned>& d, const BigInt& q) {
  if (f.empty() || !is_one(f[0])) throw std::invalid_argument("delta_d needs constant term 1");
  TruncSeries<T> num = f, den;
  std::size_t n = d.size();
  bool have_den = false;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    unsigned dI = 0, bits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        dI += d[i];
        ++bits;
      }
    auto g = series_dilate(f, boost::multiprecision::pow(q, dI));
    if (bits % 2 == 0) {
      num = series_mul(num, g);
    } else if (have_den) {
      den = series_mul(den, g);
    } else {
      den = g;
      have_den = true;
    }
  }
  return have_den ? series_mul(num, series_inverse(den)) : num;
}

/// The single operator F(T) -> F(T)/F(q^c T).
template <class T>
TruncSeries<T> delta_c(const TruncSeries<T>& f, const BigInt& qc) {
  return series_mul(f, series_inverse(series_dilate(f, qc)));
}

}  // namespace ptes
