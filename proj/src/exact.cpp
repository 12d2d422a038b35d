#include "ptes/exact.hpp"

#include <numeric>
#include <stdexcept>

namespace ptes {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  unsigned __int128 r = 1;
  while (exp--) {
    r *= base;
    if (r >> 63) throw std::overflow_error("integer power overflows 63 bits");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

unsigned valuation(std::int64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  unsigned v = 0;
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

unsigned valuation(const BigInt& n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  unsigned v = 0;
  BigInt m = n;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::invalid_argument("inverse_mod: not a unit");
  return ((x % m) + m) % m;
}

std::int64_t reduce_rational(const Rational& r, std::int64_t m) {
  BigInt num = boost::multiprecision::numerator(r) % m;
  BigInt den = boost::multiprecision::denominator(r) % m;
  auto n = static_cast<std::int64_t>(num);
  auto d = static_cast<std::int64_t>(den);
  auto v = static_cast<__int128>(n) * inverse_mod(d, m) % m;
  if (v < 0) v += m;
  return static_cast<std::int64_t>(v);
}

std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < a.size(); ++c) {
    std::size_t piv = row;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[row]);
    Rational inv = 1 / a[row][c];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = c; k < a[r].size(); ++k) a[r][k] -= f * a[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::optional<std::vector<Rational>> solve_linear(RatMatrix a, std::vector<Rational> b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_linear: shape mismatch");
  std::size_t ncols = a.empty() ? 0 : a[0].size();
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  auto piv = rref(a, ncols);
  for (std::size_t r = piv.size(); r < a.size(); ++r)
    if (a[r][ncols] != 0) return std::nullopt;
  std::vector<Rational> x(ncols, Rational(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = a[r][ncols];
  return x;
}

std::size_t rank(RatMatrix a) {
  std::size_t ncols = a.empty() ? 0 : a[0].size();
  return rref(a, ncols).size();
}

Rational determinant(RatMatrix a) {
  std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

std::vector<std::vector<Rational>> nullspace(RatMatrix a, std::size_t ncols) {
  auto piv = rref(a, ncols);
  std::vector<bool> is_piv(ncols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    std::vector<Rational> v(ncols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<IntVec> integer_kernel(const IntMatrix& e, std::size_t n) {
  // Column-style Hermite reduction of E with a unimodular transform U (E U = H). Columns of U
  // whose image under E vanishes span the integer kernel.
  std::size_t m = e.size();
  std::vector<std::vector<BigInt>> cols(n, std::vector<BigInt>(m + n));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < m; ++r) cols[c][r] = e[r][c];
    cols[c][m + c] = 1;
  }
  std::size_t next = 0;
  for (std::size_t r = 0; r < m && next < n; ++r) {
    while (true) {
      std::size_t best = n;
      for (std::size_t c = next; c < n; ++c)
        if (cols[c][r] != 0 && (best == n || abs(cols[c][r]) < abs(cols[best][r]))) best = c;
      if (best == n) break;
      std::swap(cols[best], cols[next]);
      bool done = true;
      for (std::size_t c = next + 1; c < n; ++c) {
        if (cols[c][r] == 0) continue;
        BigInt q = cols[c][r] / cols[next][r];
        for (std::size_t k = 0; k < m + n; ++k) cols[c][k] -= q * cols[next][k];
        if (cols[c][r] != 0) done = false;
      }
      if (done) {
        ++next;
        break;
      }
    }
  }
  std::vector<IntVec> out;
  for (std::size_t c = next; c < n; ++c) {
    IntVec v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<std::int64_t>(cols[c][m + k]);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<BigInt> char_poly(const IntMatrix& a) {
  std::size_t n = a.size();
  RatMatrix am(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) am[i][j] = a[i][j];
  // Faddeev–LeVerrier: M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RatMatrix mk(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix next(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t l = 0; l < n; ++l) s += am[i][l] * mk[l][j];
        next[i][j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = std::move(next);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += am[i][l] * mk[l][i];
    c[n - k] = -tr / static_cast<long long>(k);
  }
  std::vector<BigInt> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (boost::multiprecision::denominator(c[i]) != 1)
      throw std::logic_error("char_poly: non-integral coefficient");
    out[i] = boost::multiprecision::numerator(c[i]);
  }
  return out;
}

IntVec primitive_integer_vector(const std::vector<Rational>& v) {
  BigInt l = 1;
  for (const auto& x : v) {
    BigInt d = boost::multiprecision::denominator(x);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  std::vector<BigInt> w;
  BigInt g = 0;
  for (const auto& x : v) {
    BigInt t = boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x));
    g = boost::multiprecision::gcd(g, t);
    w.push_back(t);
  }
  IntVec out;
  for (auto& t : w) out.push_back(static_cast<std::int64_t>(g == 0 ? t : t / g));
  return out;
}

}  // namespace ptes
