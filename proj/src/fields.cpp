#include "ptes/fields.hpp"

#include <stdexcept>
#include <string>

#include "ptes/errors.hpp"
#include "ptes/exact.hpp"

namespace ptes {

namespace {

std::int64_t md(std::int64_t x, std::int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly poly_mod(FpPoly a, const FpPoly& f, std::int64_t p) {
  trim(a);
  std::int64_t lead_inv = inverse_mod(f.back(), p);
  while (a.size() >= f.size()) {
    std::int64_t c = md(a.back() * lead_inv, p);
    std::size_t shift = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i) a[shift + i] = md(a[shift + i] - c * f[i], p);
    trim(a);
  }
  return a;
}

FpPoly poly_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = md(r[i + j] + a[i] * b[j], p);
  return poly_mod(std::move(r), f, p);
}

FpPoly poly_gcd(FpPoly a, FpPoly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^{p^k} mod f.
FpPoly x_pow_p_pow(unsigned k, const FpPoly& f, std::int64_t p) {
  FpPoly r = poly_mod({0, 1}, f, p);
  for (unsigned i = 0; i < k; ++i) {
    FpPoly base = r, acc = {1};
    for (std::int64_t e = p; e; e >>= 1) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    r = acc;
  }
  return r;
}

}  // namespace

bool is_irreducible(const FpPoly& f_in, std::uint64_t p) {
  FpPoly f = f_in;
  for (auto& c : f) c = md(c, static_cast<std::int64_t>(p));
  trim(f);
  if (f.size() < 2) return false;
  auto sp = static_cast<std::int64_t>(p);
  auto m = static_cast<unsigned>(f.size() - 1);
  FpPoly x = poly_mod({0, 1}, f, sp);
  FpPoly t = x_pow_p_pow(m, f, sp);
  if (poly_mod(t, f, sp) != x) return false;
  for (auto [r, e] : factorize(m)) {
    (void)e;
    FpPoly h = x_pow_p_pow(m / static_cast<unsigned>(r), f, sp);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = md(h[1] - 1, sp);
    trim(h);
    FpPoly g = poly_gcd(f, h, sp);
    if (g.size() != 1) return false;
  }
  return true;
}

FpPoly default_modulus(std::uint64_t p, unsigned m) {
  if (m == 0) throw std::invalid_argument("default_modulus: degree 0");
  std::uint64_t count = checked_pow(p, m);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    FpPoly f(m + 1, 0);
    f[m] = 1;
    std::uint64_t t = idx;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = static_cast<std::int64_t>(t % p);
      t /= p;
    }
    if (is_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldDesc FieldDesc::make(std::uint64_t p, unsigned m, std::optional<FpPoly> modulus) {
  if (!is_prime(p)) throw SpecError("characteristic " + std::to_string(p) + " is not prime");
  if (p >= (1u << 16)) throw SpecError("characteristic too large");
  if (m == 0 || m > kMaxFieldDegree) throw SpecError("field degree out of range");
  auto d = std::make_shared<Data>();
  d->p = p;
  d->m = m;
  d->order = checked_pow(p, m);
  if (modulus) {
    FpPoly f = *modulus;
    for (auto& c : f) c = md(c, static_cast<std::int64_t>(p));
    trim(f);
    if (f.size() != m + 1 || f.back() != 1) throw SpecError("modulus must be monic of degree " + std::to_string(m));
    if (!is_irreducible(f, p)) throw SpecError("modulus is reducible");
    d->modulus = f;
  } else {
    d->modulus = default_modulus(p, m);
  }
  FieldDesc fd;
  fd.d_ = d;
  // Trace of each basis monomial, from the definition.
  for (unsigned i = 0; i < m; ++i) {
    FieldElem xi{};
    xi.c[i] = 1;
    FieldElem acc{}, t = xi;
    for (unsigned j = 0; j < m; ++j) {
      acc = fd.add(acc, t);
      t = fd.frobenius(t);
    }
    for (unsigned k = 1; k < m; ++k)
      if (acc.c[k]) throw std::logic_error("trace left the prime field");
    d->basis_trace.push_back(acc.c[0]);
  }
  std::uint64_t q1 = d->order - 1;
  auto fac = factorize(q1);
  for (std::uint64_t idx = 1; idx < d->order; ++idx) {
    FieldElem g = fd.from_index(idx);
    bool ok = true;
    for (auto [r, e] : fac) {
      (void)e;
      if (fd.pow(g, q1 / r) == fd.one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      d->primitive = g;
      break;
    }
  }
  return fd;
}

FieldElem FieldDesc::from_int(std::int64_t k) const {
  FieldElem r{};
  r.c[0] = static_cast<std::uint16_t>(md(k, static_cast<std::int64_t>(p())));
  return r;
}

FieldElem FieldDesc::gen() const {
  if (degree() == 1) return from_int(-modulus()[0]);
  FieldElem r{};
  r.c[1] = 1;
  return r;
}

FieldElem FieldDesc::from_coeffs(const std::vector<std::int64_t>& coeffs) const {
  FpPoly a(coeffs.begin(), coeffs.end());
  for (auto& c : a) c = md(c, static_cast<std::int64_t>(p()));
  a = poly_mod(std::move(a), modulus(), static_cast<std::int64_t>(p()));
  FieldElem r{};
  for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = static_cast<std::uint16_t>(a[i]);
  return r;
}

FieldElem FieldDesc::add(const FieldElem& x, const FieldElem& y) const {
  FieldElem r{};
  for (unsigned i = 0; i < degree(); ++i) {
    unsigned s = x.c[i] + y.c[i];
    r.c[i] = static_cast<std::uint16_t>(s >= p() ? s - p() : s);
  }
  return r;
}

FieldElem FieldDesc::neg(const FieldElem& x) const {
  FieldElem r{};
  for (unsigned i = 0; i < degree(); ++i) r.c[i] = static_cast<std::uint16_t>(x.c[i] ? p() - x.c[i] : 0);
  return r;
}

FieldElem FieldDesc::sub(const FieldElem& x, const FieldElem& y) const { return add(x, neg(y)); }

FieldElem FieldDesc::mul(const FieldElem& x, const FieldElem& y) const {
  const unsigned m = degree();
  const std::uint64_t pp = p();
  std::array<std::uint64_t, 2 * kMaxFieldDegree> t{};
  for (unsigned i = 0; i < m; ++i) {
    if (!x.c[i]) continue;
    for (unsigned j = 0; j < m; ++j) t[i + j] += static_cast<std::uint64_t>(x.c[i]) * y.c[j];
  }
  for (auto& v : t) v %= pp;
  const auto& f = modulus();
  for (unsigned k = 2 * m - 1; k-- > m;) {
    std::uint64_t c = t[k];
    if (!c) continue;
    t[k] = 0;
    for (unsigned i = 0; i < m; ++i)
      if (f[i]) t[k - m + i] = (t[k - m + i] + c * (pp - static_cast<std::uint64_t>(f[i]))) % pp;
  }
  FieldElem r{};
  for (unsigned i = 0; i < m; ++i) r.c[i] = static_cast<std::uint16_t>(t[i]);
  return r;
}

FieldElem FieldDesc::pow(FieldElem x, std::uint64_t e) const {
  FieldElem r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

FieldElem FieldDesc::inv(const FieldElem& x) const {
  if (is_zero(x)) throw std::domain_error("inverse of zero in finite field");
  return pow(x, order() - 2);
}

FieldElem FieldDesc::frobenius(const FieldElem& x, unsigned times) const {
  FieldElem r = x;
  for (unsigned i = 0; i < times % degree(); ++i) r = pow(r, p());
  return r;
}

FieldElem FieldDesc::trace_to(const FieldElem& x, unsigned s) const {
  if (s == 0 || degree() % s) throw std::invalid_argument("trace_to: subfield degree must divide field degree");
  FieldElem acc{}, t = x;
  for (unsigned j = 0; j < degree() / s; ++j) {
    acc = add(acc, t);
    t = frobenius(t, s);
  }
  return acc;
}

std::uint64_t FieldDesc::abs_trace(const FieldElem& x) const {
  std::uint64_t s = 0;
  for (unsigned i = 0; i < degree(); ++i) s += x.c[i] * d_->basis_trace[i];
  return s % p();
}

std::uint64_t FieldDesc::index(const FieldElem& x) const {
  std::uint64_t idx = 0;
  for (unsigned i = degree(); i-- > 0;) idx = idx * p() + x.c[i];
  return idx;
}

FieldElem FieldDesc::from_index(std::uint64_t idx) const {
  FieldElem r{};
  for (unsigned i = 0; i < degree(); ++i) {
    r.c[i] = static_cast<std::uint16_t>(idx % p());
    idx /= p();
  }
  return r;
}

std::vector<FieldElem> FieldDesc::units(std::uint64_t cap) const {
  if (order() - 1 > cap)
    throw CapExceeded("field of order " + std::to_string(order()) + " exceeds enumeration cap " + std::to_string(cap));
  std::vector<FieldElem> out;
  out.reserve(order() - 1);
  for (std::uint64_t i = 1; i < order(); ++i) out.push_back(from_index(i));
  return out;
}

std::vector<std::int64_t> coeffs_of(const FieldDesc& f, const FieldElem& x) {
  std::vector<std::int64_t> out(x.c.begin(), x.c.begin() + f.degree());
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

const FieldDesc& TowerDesc::level(unsigned m) {
  if (m == 0) throw std::invalid_argument("tower level must be positive");
  auto it = levels_.find(m);
  if (it != levels_.end()) return it->second.field;
  if (m == 1) {
    levels_.emplace(1, Level{base_, base_.gen()});
    return levels_.at(1).field;
  }
  FieldDesc big = FieldDesc::make(base_.p(), base_.degree() * m);
  // A root of the base modulus inside the subgroup F_q^* (or 0), smallest exponent first.
  const auto& f = base_.modulus();
  auto eval = [&](const FieldElem& r) {
    FieldElem acc{};
    for (std::size_t i = f.size(); i-- > 0;) acc = big.add(big.mul(acc, r), big.from_int(f[i]));
    return acc;
  };
  std::optional<FieldElem> root;
  if (big.is_zero(eval(big.zero()))) {
    root = big.zero();
  } else {
    std::uint64_t q = base_.order();
    FieldElem h = big.pow(big.primitive(), (big.order() - 1) / (q - 1));
    FieldElem t = big.one();
    for (std::uint64_t j = 0; j + 1 < q; ++j, t = big.mul(t, h)) {
      if (big.is_zero(eval(t))) {
        root = t;
        break;
      }
    }
  }
  if (!root) throw std::logic_error("base modulus has no root in extension");
  levels_.emplace(m, Level{big, *root});
  return levels_.at(m).field;
}

const FieldElem& TowerDesc::gen_image(unsigned m) {
  level(m);
  return levels_.at(m).gen_image;
}

FieldElem TowerDesc::embed(const FieldElem& x, unsigned m) {
  const FieldDesc& big = level(m);
  const FieldElem& g = gen_image(m);
  if (base_.degree() == 1) return big.from_int(x.c[0]);
  FieldElem acc{};
  for (unsigned i = base_.degree(); i-- > 0;) acc = big.add(big.mul(acc, g), big.from_int(x.c[i]));
  return acc;
}

}  // namespace ptes
