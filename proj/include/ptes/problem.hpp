#pragma once

// Problem files: JSON descriptions of (F_q, f, d) plus truncation parameters.
//
//   {"name": "...", "p": 3, "a": 1, "modulus": [1, 0, 1],
//    "f": [{"exponents": [1, 1], "coeff": 1}, {"exponents": [1, -1], "coeff": [0, 1]}],
//    "d": [1, 2], "precision": 6, "w_cut": 6, "kmax": 3, "deg": 16, "b": [1], "cap": 134217728}
//
// A coefficient is an integer (reduced mod p) or a little-endian coordinate list over the
// generator of F_q. "modulus" is optional and little-endian monic.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptes/exact.hpp"
#include "ptes/fields.hpp"
#include "ptes/unfolding.hpp"

namespace ptes {

struct ProblemSpec {
  std::string name;
  std::uint64_t p = 0;
  unsigned a = 1;
  std::optional<FpPoly> modulus;
  FieldDesc field;
  LaurentPoly f;
  std::vector<unsigned> d;
  unsigned precision = 6;
  Rational w_cut = 0;  // 0 means "same as precision"
  unsigned kmax = 3;
  unsigned deg = 16;
  std::vector<std::int64_t> b;  // empty means every unit modulo lcm(d)
  unsigned m_max = 2;
  std::uint64_t cap = std::uint64_t{1} << 27;

  UnfoldSpec unfold_spec() const { return UnfoldSpec(d); }
  Rational effective_w_cut() const { return w_cut == 0 ? Rational(precision) : w_cut; }
  std::vector<std::int64_t> twists() const;
};

/// Throws SpecError on malformed input.
ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

}  // namespace ptes
