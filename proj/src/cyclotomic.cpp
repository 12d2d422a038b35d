#include "ptes/cyclotomic.hpp"

namespace ptes {

CycloNum inverse(const CycloNum& x) {
  if (x.is_zero()) throw std::domain_error("inverse of zero in Q(zeta_p)");
  const std::size_t n = x.coords().size();
  // Column j of the multiplication matrix is x * zeta^j; solve M y = e_0.
  RatMatrix m(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    CycloNum col = x * CycloNum::zeta_pow(x.p(), static_cast<std::int64_t>(j));
    for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
  }
  std::vector<Rational> rhs(n, Rational(0));
  rhs[0] = 1;
  auto y = solve_linear(m, rhs);
  if (!y) throw std::logic_error("singular multiplication matrix");
  CycloNum out(x.p());
  for (std::size_t i = 0; i < n; ++i) out.add_zeta_pow(static_cast<std::int64_t>(i), (*y)[i]);
  return out;
}

bool is_integral(const CycloNum& x) {
  for (const auto& c : x.coords())
    if (boost::multiprecision::denominator(c) != 1) return false;
  return true;
}

CyclotomicInt to_int(const CycloNum& x) {
  if (!is_integral(x)) throw std::domain_error("cyclotomic number is not integral");
  CyclotomicInt out(x.p());
  for (std::size_t i = 0; i < x.coords().size(); ++i)
    out.add_zeta_pow(static_cast<std::int64_t>(i), boost::multiprecision::numerator(x[i]));
  return out;
}

}  // namespace ptes
