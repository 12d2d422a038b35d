#include "ptes/padics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ptes/errors.hpp"

namespace ptes {

namespace {

std::int64_t powmod(std::int64_t b, std::uint64_t e, std::int64_t m) {
  __int128 r = 1, x = ((b % m) + m) % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t bigmod(const BigInt& n, std::int64_t m) {
  BigInt r = n % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

unsigned vp(std::int64_t c, std::uint64_t p, unsigned cap) {
  if (c == 0) return cap;
  unsigned v = 0;
  auto sp = static_cast<std::int64_t>(p);
  while (c % sp == 0 && v < cap) {
    c /= sp;
    ++v;
  }
  return v;
}

// Accumulates x*y (full elements) into acc, with pi^{p-1} = -p and x^a reduced by the lifted
// modulus. acc has ncoords entries; values are left unreduced modulo p^M.
void mul_acc_impl(const RingData& r, const std::int64_t* x, const std::int64_t* y, __int128* acc) {
  const unsigned e = r.e, a = r.a;
  if (a == 1) {
    if (e == 1) {
      acc[0] += static_cast<__int128>(x[0]) * y[0];
      return;
    }
    __int128 t[64] = {};
    if (2 * e - 1 > 64) throw std::logic_error("ramification index too large");
    for (unsigned i = 0; i < e; ++i) {
      if (!x[i]) continue;
      for (unsigned j = 0; j < e; ++j) t[i + j] += static_cast<__int128>(x[i]) * y[j];
    }
    const auto sp = static_cast<__int128>(r.p);
    for (unsigned k = 0; k < e; ++k) acc[k] += t[k];
    for (unsigned k = e; k + 1 < 2 * e; ++k) acc[k - e] -= sp * t[k];
    return;
  }
  const unsigned pw = 2 * e - 1, xw = 2 * a - 1;
  boost::container::small_vector<__int128, 128> t(pw * xw, 0);
  for (unsigned j1 = 0; j1 < e; ++j1)
    for (unsigned i1 = 0; i1 < a; ++i1) {
      std::int64_t xv = x[j1 * a + i1];
      if (!xv) continue;
      for (unsigned j2 = 0; j2 < e; ++j2)
        for (unsigned i2 = 0; i2 < a; ++i2)
          t[(j1 + j2) * xw + i1 + i2] += static_cast<__int128>(xv) * y[j2 * a + i2];
    }
  // Reduce the x-degree in each pi-row with the lifted modulus, then fold pi^{p-1} = -p.
  for (unsigned j = 0; j < pw; ++j) {
    __int128* row = &t[j * xw];
    for (unsigned i = xw; i-- > a;) {
      __int128 c = row[i];
      if (!c) continue;
      row[i] = 0;
      for (unsigned k = 0; k < a; ++k)
        if (r.lifted[k]) row[i - a + k] -= c * r.lifted[k];
    }
  }
  const auto sp = static_cast<__int128>(r.p);
  for (unsigned j = 0; j < pw; ++j) {
    __int128 s = j < e ? 1 : -sp;
    unsigned jj = j < e ? j : j - e;
    for (unsigned i = 0; i < a; ++i) acc[jj * a + i] += s * t[j * xw + i];
  }
}

}  // namespace

void RingData::mul_acc(const std::int64_t* x, const std::int64_t* y, __int128* acc) const {
  mul_acc_impl(*this, x, y, acc);
}

unsigned RingData::digits(unsigned j, int prec) const {
  if (prec <= static_cast<int>(j)) return 0;
  unsigned d = (static_cast<unsigned>(prec) - j + e - 1) / e;
  return std::min(d, M);
}

RingElem make_elem(const RingData* r, Coords c, int prec) {
  RingElem x;
  x.r_ = r;
  x.c_ = std::move(c);
  x.prec_ = std::min(prec, r->cap);
  return x;
}

Coords RingElem::canonical() const {
  Coords out = c_;
  for (unsigned j = 0; j < r_->e; ++j) {
    unsigned dg = r_->digits(j, prec_);
    std::int64_t m = 1;
    for (unsigned k = 0; k < dg; ++k) m *= static_cast<std::int64_t>(r_->p);
    for (unsigned i = 0; i < r_->a; ++i) out[j * r_->a + i] %= m;
  }
  return out;
}

bool RingElem::is_zero() const {
  for (auto v : canonical())
    if (v) return false;
  return true;
}

int RingElem::ord_pi() const {
  int best = prec_;
  for (unsigned j = 0; j < r_->e; ++j) {
    unsigned dg = r_->digits(j, prec_);
    for (unsigned i = 0; i < r_->a; ++i) {
      unsigned v = vp(c_[j * r_->a + i], r_->p, r_->M);
      if (v < dg) best = std::min(best, static_cast<int>(v * r_->e + j));
    }
  }
  return best;
}

Rational RingElem::ord_p() const { return Rational(ord_pi(), static_cast<long long>(r_->e)); }

RingElem RingElem::with_prec(int prec) const {
  RingElem x = *this;
  x.prec_ = std::min(prec_, prec);
  return x;
}

RingElem& RingElem::operator+=(const RingElem& o) {
  for (unsigned k = 0; k < r_->ncoords; ++k) {
    std::int64_t s = c_[k] + o.c_[k];
    c_[k] = s >= r_->mod ? s - r_->mod : s;
  }
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

RingElem& RingElem::operator-=(const RingElem& o) {
  for (unsigned k = 0; k < r_->ncoords; ++k) {
    std::int64_t s = c_[k] - o.c_[k];
    c_[k] = s < 0 ? s + r_->mod : s;
  }
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

RingElem RingElem::operator-() const {
  RingElem x = *this;
  for (auto& v : x.c_) v = v ? r_->mod - v : 0;
  return x;
}

RingElem& RingElem::operator*=(const RingElem& o) {
  int prec = std::min({prec_ + o.ord_pi(), o.prec_ + ord_pi(), r_->cap});
  boost::container::small_vector<__int128, 8> acc(r_->ncoords, 0);
  mul_acc_impl(*r_, c_.data(), o.c_.data(), acc.data());
  for (unsigned k = 0; k < r_->ncoords; ++k) c_[k] = r_->reduce(acc[k]);
  prec_ = prec;
  return *this;
}

RingElem RingElem::mul_int(std::int64_t n) const {
  RingElem x = *this;
  std::int64_t nm = r_->reduce(n);
  for (auto& v : x.c_) v = r_->reduce(static_cast<__int128>(v) * nm);
  if (n == 0) {
    x.prec_ = r_->cap;
  } else {
    x.prec_ = std::min(r_->cap, prec_ + static_cast<int>(vp(n, r_->p, 64) * r_->e));
  }
  return x;
}

RingElem RingElem::pow(std::uint64_t e) const {
  RingElem r = r_->one(), b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

RingElem RingElem::div_p_pow(unsigned s) const {
  if (s == 0) return *this;
  int newprec = prec_ - static_cast<int>(s * r_->e);
  if (newprec < 0) throw PrecisionExhausted("division by p^" + std::to_string(s) + " exhausts precision");
  if (ord_pi() < static_cast<int>(s * r_->e)) throw std::domain_error("element not divisible by p^" + std::to_string(s));
  Coords c = canonical();
  std::int64_t ps = 1;
  for (unsigned k = 0; k < s; ++k) ps *= static_cast<std::int64_t>(r_->p);
  for (auto& v : c) v /= ps;
  return make_elem(r_, std::move(c), newprec);
}

RingElem RingElem::div_int(std::int64_t n) const {
  if (n == 0) throw std::domain_error("division by zero");
  unsigned s = 0;
  auto sp = static_cast<std::int64_t>(r_->p);
  while (n % sp == 0) {
    n /= sp;
    ++s;
  }
  RingElem x = mul_int(inverse_mod(r_->reduce(n), r_->mod));
  x.prec_ = prec_;
  return x.div_p_pow(s);
}

RingElem RingElem::inverse() const {
  if (prec_ == 0 || ord_pi() != 0) throw std::domain_error("inverse of a non-unit");
  FieldElem z = residue();
  RingElem y = r_->lift(r_->residue.inv(z));
  RingElem two = r_->from_int(2);
  for (int known = 1; known < r_->cap; known *= 2) y = y * (two - *this * y);
  y = y * (two - *this * y);
  y.prec_ = prec_;
  return y;
}

RingElem RingElem::frobenius(unsigned times) const {
  RingElem x = *this;
  const unsigned a = r_->a;
  if (a == 1) return x;
  for (unsigned t = 0; t < times % a; ++t) {
    Coords out(r_->ncoords, 0);
    for (unsigned j = 0; j < r_->e; ++j) {
      std::vector<__int128> acc(a, 0);
      for (unsigned i = 0; i < a; ++i) {
        std::int64_t c = x.c_[j * a + i];
        if (!c) continue;
        for (unsigned k = 0; k < a; ++k) acc[k] += static_cast<__int128>(c) * r_->frob[i][k];
      }
      for (unsigned k = 0; k < a; ++k) out[j * a + k] = r_->reduce(acc[k]);
    }
    x.c_ = std::move(out);
  }
  return x;
}

FieldElem RingElem::residue() const {
  if (prec_ < 1) throw PrecisionExhausted("residue of an element with no precision");
  std::vector<std::int64_t> co(r_->a);
  for (unsigned i = 0; i < r_->a; ++i) co[i] = c_[i] % static_cast<std::int64_t>(r_->p);
  return r_->residue.from_coeffs(co);
}

std::string RingElem::str() const {
  std::ostringstream os;
  os << '[';
  auto c = canonical();
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  os << "]@" << prec_;
  return os.str();
}

RingElem RingData::zero() const { return make_elem(this, Coords(ncoords, 0), cap); }

RingElem RingData::one() const { return from_int(1); }

RingElem RingData::from_int(std::int64_t n) const {
  Coords c(ncoords, 0);
  c[0] = reduce(n);
  return make_elem(this, std::move(c), cap);
}

RingElem RingData::from_bigint(const BigInt& n) const {
  Coords c(ncoords, 0);
  c[0] = bigmod(n, mod);
  return make_elem(this, std::move(c), cap);
}

RingElem RingData::from_rational(const Rational& r) const {
  if (boost::multiprecision::denominator(r) % p == 0) throw std::domain_error("rational is not p-integral");
  Coords c(ncoords, 0);
  c[0] = reduce_rational(r, mod);
  return make_elem(this, std::move(c), cap);
}

RingElem RingData::pi() const {
  Coords c(ncoords, 0);
  if (e == 1) {
    c[0] = reduce(-static_cast<std::int64_t>(p));
  } else {
    c[a] = 1;
  }
  return make_elem(this, std::move(c), cap);
}

RingElem RingData::gen() const {
  Coords c(ncoords, 0);
  if (a == 1) {
    c[0] = reduce(-lifted[0]);
  } else {
    c[1] = 1;
  }
  return make_elem(this, std::move(c), cap);
}

RingElem RingData::gamma() const { return pi().mul_int(gamma_unit); }

RingElem RingData::lift(const FieldElem& z) const {
  Coords c(ncoords, 0);
  for (unsigned i = 0; i < a; ++i) c[i] = z.c[i];
  return make_elem(this, std::move(c), cap);
}

RingElem RingData::teichmuller(const FieldElem& z) const {
  if (residue.is_zero(z)) return zero();
  RingElem t = lift(z);
  std::uint64_t q = residue.order();
  for (unsigned k = 0; k <= M; ++k) t = t.pow(q);
  return t;
}

RingElem RingData::gamma_pow_times(unsigned k, const Rational& coef) const {
  // gamma^k = u^k pi^k and pi^k = (-p)^s pi^r with k = (p-1)s + r.
  unsigned s = k / e, r = k % e;
  Rational c = coef * Rational(BigInt(boost::multiprecision::pow(BigInt(p), s)));
  if (s % 2) c = -c;
  std::int64_t v = reduce_rational(c, mod);
  v = reduce(static_cast<__int128>(v) * powmod(gamma_unit, k, mod));
  Coords out(ncoords, 0);
  if (e == 1) {
    out[0] = v;
  } else {
    out[r * a] = v;
  }
  return make_elem(this, std::move(out), cap);
}

RingElem RingData::gamma_pow_over_factorial(unsigned k) const {
  BigInt fact = 1;
  for (unsigned i = 2; i <= k; ++i) fact *= i;
  return gamma_pow_times(k, Rational(BigInt(1), fact));
}

RingElem RingData::gamma_m(unsigned m) const {
  // gamma_m = pi * sum_{i<=m} (-1)^{E_i} p^{E_i - i} u^{p^i}, E_i = (p^i - 1)/(p - 1).
  BigInt s = 0;
  BigInt pi_pow = 1;  // p^i
  for (unsigned i = 0; i <= m; ++i) {
    BigInt E = (pi_pow - 1) / e;
    BigInt n = E - i;
    BigInt term = 0;
    if (n < M) {
      // u^{p^i} mod p^M: u is a unit, so reduce the exponent modulo the group exponent (p-1)p^{M-1}.
      std::int64_t grp = mod / static_cast<std::int64_t>(p) * static_cast<std::int64_t>(e);
      std::uint64_t ex = static_cast<std::uint64_t>(pi_pow % grp);
      term = BigInt(powmod(gamma_unit, ex, mod)) * boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(n));
      if (E % 2 == 1) term = -term;
    }
    s += term;
    pi_pow *= p;
  }
  return pi() * from_bigint(s);
}

std::vector<RingElem> RingData::artin_hasse(unsigned imax) const {
  auto ex = ptes::artin_hasse_exact(p, imax);
  std::vector<RingElem> out;
  for (const auto& r : ex) out.push_back(from_rational(r));
  return out;
}

RingElem RingData::theta_eval(const RingElem& t) const {
  if (t.ord_pi() < 0) throw std::domain_error("theta_eval requires an integral argument");
  RingElem acc = zero();
  for (std::size_t i = theta.size(); i-- > 0;) acc = acc * t + theta[i];
  return acc;
}

RingElem RingData::zeta_embed(const CyclotomicInt& c) const {
  RingElem acc = zero();
  for (std::size_t i = c.coords().size(); i-- > 0;) acc = acc * zeta + from_bigint(c[i]);
  return acc;
}

RingElem RingData::zeta_embed(const CycloNum& c) const {
  RingElem acc = zero();
  for (std::size_t i = c.coords().size(); i-- > 0;) {
    const Rational& r = c[i];
    BigInt den = boost::multiprecision::denominator(r);
    unsigned s = 0;
    while (den % p == 0) {
      den /= p;
      ++s;
    }
    RingElem term = from_rational(Rational(boost::multiprecision::numerator(r), den));
    if (s) {
      // Precision loss from p in the denominator is tracked by div_p_pow.
      term = term.div_p_pow(s);
    }
    acc = acc * zeta + term;
  }
  return acc;
}

std::vector<Rational> artin_hasse_exact(std::uint64_t p, unsigned n) {
  std::vector<Rational> e(n + 1);
  e[0] = 1;
  for (unsigned k = 1; k <= n; ++k) {
    Rational s = 0;
    for (std::uint64_t pj = 1; pj <= k; pj *= p) s += e[k - pj];
    e[k] = s / k;
  }
  return e;
}

std::int64_t gamma_unit(std::uint64_t p, unsigned M) {
  // Root u = 1 (mod p) of h(u) = sum_i (-1)^{E_i} p^{E_i - i} u^{p^i}, E_i = (p^i - 1)/(p - 1).
  BigInt mod = boost::multiprecision::pow(BigInt(p), M);
  struct Term {
    BigInt coef;
    BigInt dcoef;
    BigInt exp;
  };
  std::vector<Term> terms;
  BigInt pi_pow = 1;
  for (unsigned i = 0;; ++i) {
    BigInt E = (pi_pow - 1) / (p - 1);
    if (E - i >= M) break;
    BigInt c = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(E - i));
    if (E % 2 == 1) c = -c;
    terms.push_back({c, c * pi_pow, pi_pow});
    pi_pow *= p;
  }
  auto pm = [&](const BigInt& b, BigInt ex) {
    BigInt r = 1, x = b % mod;
    while (ex > 0) {
      if (ex % 2 == 1) r = r * x % mod;
      x = x * x % mod;
      ex /= 2;
    }
    return r;
  };
  BigInt u = 1;
  for (unsigned it = 0; it <= M + 1; ++it) {
    BigInt h = 0, dh = 0;
    for (const auto& t : terms) {
      h += t.coef * pm(u, t.exp);
      dh += t.dcoef * pm(u, t.exp - 1);
    }
    h %= mod;
    dh %= mod;
    if (dh < 0) dh += mod;
    BigInt inv = 0;
    {
      // dh is a unit mod p^M.
      std::int64_t d = static_cast<std::int64_t>(dh);
      inv = inverse_mod(d, static_cast<std::int64_t>(mod));
    }
    u = (u - h * inv) % mod;
    if (u < 0) u += mod;
  }
  return static_cast<std::int64_t>(u);
}

Ring make_ring(const FieldDesc& residue, unsigned M) {
  if (M == 0) throw SpecError("precision must be positive");
  auto d = std::make_shared<RingData>();
  d->p = residue.p();
  d->a = residue.degree();
  d->M = M;
  d->e = static_cast<unsigned>(d->p - 1);
  d->ncoords = d->e * d->a;
  std::uint64_t mod = checked_pow(d->p, M);
  if (mod >= (std::uint64_t{1} << 42)) throw SpecError("p^M must stay below 2^42");
  d->mod = static_cast<std::int64_t>(mod);
  d->cap = static_cast<int>(d->e * M);
  d->residue = residue;
  d->lifted = residue.modulus();
  const RingData* r = d.get();

  // tau(x): the root of the lifted modulus congruent to x^p, by Newton iteration in Z_q.
  d->frob.assign(d->a, std::vector<std::int64_t>(d->a, 0));
  if (d->a == 1) {
    d->frob[0][0] = 1;
  } else {
    auto evalF = [&](const RingElem& z, bool deriv) {
      RingElem acc = r->zero();
      const auto& f = r->lifted;
      for (std::size_t i = f.size(); i-- > 0;) {
        if (deriv) {
          if (i == 0) break;
          acc = acc * z + r->from_int(f[i] * static_cast<std::int64_t>(i));
        } else {
          acc = acc * z + r->from_int(f[i]);
        }
      }
      return acc;
    };
    RingElem z = r->gen().pow(d->p);
    for (unsigned it = 0; it <= M + 1; ++it) z = z - evalF(z, false) * evalF(z, true).inverse();
    RingElem zi = r->one();
    for (unsigned i = 0; i < d->a; ++i) {
      for (unsigned k = 0; k < d->a; ++k) d->frob[i][k] = zi.raw()[k];
      zi = zi * z;
    }
  }

  d->gamma_unit = gamma_unit(d->p, M);
  unsigned imax = static_cast<unsigned>(d->cap);
  d->artin_hasse_exact = artin_hasse_exact(d->p, imax);
  for (unsigned i = 0; i < imax; ++i) d->theta.push_back(r->gamma_pow_times(i, d->artin_hasse_exact[i]));
  d->zeta = r->theta_eval(r->one());
  d->self = d;
  return d;
}

}  // namespace ptes
