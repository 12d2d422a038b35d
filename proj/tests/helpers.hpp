#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ptes/fields.hpp"
#include "ptes/unfolding.hpp"

namespace testing_helpers {

/// Laurent polynomial over the prime field from (exponents, integer coefficient) pairs.
inline ptes::LaurentPoly poly(const ptes::FieldDesc& F, std::size_t n,
                              const std::vector<std::pair<ptes::IntVec, std::int64_t>>& terms) {
  ptes::LaurentPoly f;
  f.nvars = n;
  for (const auto& [e, c] : terms) f.terms.push_back({e, F.from_int(c)});
  return f;
}

struct Lcg {
  std::uint64_t s;
  std::uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 33;
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace testing_helpers
