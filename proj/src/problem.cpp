#include "ptes/problem.hpp"

#include <fstream>
#include <numeric>

#include "ptes/errors.hpp"

namespace ptes {

namespace {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("field '") + key + "': " + e.what());
  }
}

Rational parse_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return Rational(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw SpecError("w_cut must be an integer or a rational string");
}

}  // namespace

std::vector<std::int64_t> ProblemSpec::twists() const {
  if (!b.empty()) return b;
  unsigned l = unfold_spec().lcm;
  std::vector<std::int64_t> out;
  for (unsigned x = 1; x <= l; ++x)
    if (std::gcd(x, l) == 1) out.push_back(x);
  return out;
}

ProblemSpec parse_problem(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("problem must be a JSON object");
  ProblemSpec s;
  s.name = get_or<std::string>(j, "name", "");
  if (!j.contains("p")) throw SpecError("missing 'p'");
  s.p = get_or<std::uint64_t>(j, "p", 0);
  s.a = get_or<unsigned>(j, "a", 1);
  if (s.a == 0) throw SpecError("a must be positive");
  if (j.contains("modulus")) s.modulus = get_or<FpPoly>(j, "modulus", {});
  s.field = FieldDesc::make(s.p, s.a, s.modulus);

  if (!j.contains("d") || !j.at("d").is_array()) throw SpecError("missing 'd'");
  s.d = get_or<std::vector<unsigned>>(j, "d", {});
  if (s.d.empty()) throw SpecError("d is empty");
  for (auto di : s.d)
    if (di == 0) throw SpecError("every d_i must be at least 1");

  if (!j.contains("f") || !j.at("f").is_array() || j.at("f").empty()) throw SpecError("missing or empty 'f'");
  s.f.nvars = s.d.size();
  for (const auto& t : j.at("f")) {
    if (!t.is_object() || !t.contains("exponents") || !t.contains("coeff")) throw SpecError("malformed term in 'f'");
    IntVec e = get_or<IntVec>(t, "exponents", {});
    if (e.size() != s.d.size()) throw SpecError("term exponent length differs from the length of d");
    FieldElem c;
    const auto& cj = t.at("coeff");
    if (cj.is_number_integer())
      c = s.field.from_int(cj.get<std::int64_t>());
    else if (cj.is_array())
      c = s.field.from_coeffs(get_or<std::vector<std::int64_t>>(t, "coeff", {}));
    else
      throw SpecError("coeff must be an integer or a coordinate list");
    if (c == s.field.zero()) throw SpecError("zero coefficient in 'f'");
    s.f.terms.push_back({e, c});
  }

  s.precision = get_or<unsigned>(j, "precision", s.precision);
  if (s.precision == 0) throw SpecError("precision must be positive");
  if (j.contains("w_cut")) s.w_cut = parse_rational(j.at("w_cut"));
  s.kmax = get_or<unsigned>(j, "kmax", s.kmax);
  s.deg = get_or<unsigned>(j, "deg", s.deg);
  s.b = get_or<std::vector<std::int64_t>>(j, "b", {});
  s.m_max = get_or<unsigned>(j, "m_max", s.m_max);
  s.cap = get_or<std::uint64_t>(j, "cap", s.cap);
  for (auto b : s.b) require_coprime(s.unfold_spec(), b);
  return s;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
  return parse_problem(j);
}

}  // namespace ptes
