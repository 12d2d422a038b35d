#pragma once

// Exact arithmetic in Z[zeta_p] and Q(zeta_p) over the power basis 1, zeta, ..., zeta^{p-2}.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ptes/exact.hpp"

namespace ptes {

template <class T>
class Cyclo {
 public:
  Cyclo() = default;
  explicit Cyclo(std::uint64_t p) : p_(p), c_(p - 1, T(0)) {}
  static Cyclo constant(std::uint64_t p, const T& v) {
    Cyclo r(p);
    r.c_[0] = v;
    return r;
  }
  /// zeta^j for any integer j.
  static Cyclo zeta_pow(std::uint64_t p, std::int64_t j) {
    Cyclo r(p);
    r.add_zeta_pow(j, T(1));
    return r;
  }
  /// Sum_j counts[j] zeta^j.
  template <class U>
  static Cyclo from_histogram(std::uint64_t p, const std::vector<U>& counts) {
    Cyclo r(p);
    for (std::size_t j = 0; j < counts.size(); ++j) r.add_zeta_pow(static_cast<std::int64_t>(j), T(counts[j]));
    return r;
  }

  std::uint64_t p() const { return p_; }
  const std::vector<T>& coords() const { return c_; }
  const T& operator[](std::size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool operator==(const Cyclo& o) const { return p_ == o.p_ && c_ == o.c_; }

  /// Adds coeff * zeta^j, reducing with zeta^{p-1} = -(1 + ... + zeta^{p-2}).
  void add_zeta_pow(std::int64_t j, const T& coeff) {
    auto sp = static_cast<std::int64_t>(p_);
    j = ((j % sp) + sp) % sp;
    if (j < sp - 1) {
      c_[static_cast<std::size_t>(j)] += coeff;
    } else {
      for (auto& x : c_) x -= coeff;
    }
  }

  Cyclo& operator+=(const Cyclo& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Cyclo& operator-=(const Cyclo& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Cyclo& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
  friend Cyclo operator-(Cyclo a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Cyclo operator*(Cyclo a, const T& s) { return a *= s; }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    a.check(b);
    Cyclo r(a.p_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j] != 0) r.add_zeta_pow(static_cast<std::int64_t>(i + j), a.c_[i] * b.c_[j]);
    }
    return r;
  }

 private:
  void check(const Cyclo& o) const {
    if (p_ != o.p_) throw std::invalid_argument("cyclotomic elements over different p");
  }
  std::uint64_t p_ = 0;
  std::vector<T> c_;
};

using CyclotomicInt = Cyclo<BigInt>;
using CycloNum = Cyclo<Rational>;

inline CycloNum to_num(const CyclotomicInt& x) {
  CycloNum r(x.p());
  for (std::size_t i = 0; i < x.coords().size(); ++i) r.add_zeta_pow(static_cast<std::int64_t>(i), Rational(x[i]));
  return r;
}

/// Multiplicative inverse in Q(zeta_p) via the multiplication-by-x matrix.
CycloNum inverse(const CycloNum& x);

inline CycloNum div_int(const CycloNum& x, std::int64_t n) { return x * Rational(1, n); }

/// Integral coordinates if every denominator is 1.
bool is_integral(const CycloNum& x);
CyclotomicInt to_int(const CycloNum& x);

}  // namespace ptes
