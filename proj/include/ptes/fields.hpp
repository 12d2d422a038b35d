#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace ptes {

inline constexpr std::size_t kMaxFieldDegree = 32;

/// Element of F_{p^m} as coefficients of a polynomial residue, little-endian. Unused slots are 0.
struct FieldElem {
  std::array<std::uint16_t, kMaxFieldDegree> c{};
  bool operator==(const FieldElem&) const = default;
  auto operator<=>(const FieldElem&) const = default;
};

/// Polynomials over F_p used for moduli, little-endian.
using FpPoly = std::vector<std::int64_t>;

/// Whether a monic polynomial of positive degree is irreducible over F_p (Rabin's test).
bool is_irreducible(const FpPoly& f, std::uint64_t p);

/// Smallest monic irreducible of degree m, ordering candidates by their lower coefficients read
/// as a base-p integer with the constant term least significant.
FpPoly default_modulus(std::uint64_t p, unsigned m);

class FieldDesc {
 public:
  /// F_{p^m}; the modulus defaults to default_modulus(p, m).
  static FieldDesc make(std::uint64_t p, unsigned m, std::optional<FpPoly> modulus = std::nullopt);

  std::uint64_t p() const { return d_->p; }
  unsigned degree() const { return d_->m; }
  const FpPoly& modulus() const { return d_->modulus; }
  /// p^m; throws if it overflows.
  std::uint64_t order() const { return d_->order; }

  FieldElem zero() const { return {}; }
  FieldElem one() const { return from_int(1); }
  FieldElem from_int(std::int64_t k) const;
  /// The class of x (a root of the modulus).
  FieldElem gen() const;
  FieldElem from_coeffs(const std::vector<std::int64_t>& coeffs) const;

  bool is_zero(const FieldElem& x) const { return x == FieldElem{}; }
  FieldElem add(const FieldElem& x, const FieldElem& y) const;
  FieldElem sub(const FieldElem& x, const FieldElem& y) const;
  FieldElem neg(const FieldElem& x) const;
  FieldElem mul(const FieldElem& x, const FieldElem& y) const;
  FieldElem pow(FieldElem x, std::uint64_t e) const;
  FieldElem inv(const FieldElem& x) const;
  /// x^{p^times}.
  FieldElem frobenius(const FieldElem& x, unsigned times = 1) const;

  /// Tr_{F_{p^m}/F_{p^s}}(x), returned as an element of this field lying in the subfield.
  FieldElem trace_to(const FieldElem& x, unsigned s) const;
  /// Absolute trace to F_p, in [0, p).
  std::uint64_t abs_trace(const FieldElem& x) const;

  /// Base-p packing of the coefficient vector (constant term least significant).
  std::uint64_t index(const FieldElem& x) const;
  FieldElem from_index(std::uint64_t idx) const;

  /// Deterministic generator of the multiplicative group (smallest index).
  const FieldElem& primitive() const { return d_->primitive; }

  /// All nonzero elements in index order; throws CapExceeded when q - 1 > cap.
  std::vector<FieldElem> units(std::uint64_t cap) const;

  bool operator==(const FieldDesc& o) const { return p() == o.p() && modulus() == o.modulus(); }

 private:
  struct Data {
    std::uint64_t p = 0;
    unsigned m = 0;
    std::uint64_t order = 0;
    FpPoly modulus;
    std::vector<std::uint64_t> basis_trace;  // Tr(x^i), i < m
    FieldElem primitive;
  };
  std::shared_ptr<const Data> d_;
};

/// Printable coefficient list, little-endian, trimmed.
std::vector<std::int64_t> coeffs_of(const FieldDesc& f, const FieldElem& x);

/// Extensions F_{q^m} of a base field F_q, each built as a degree a·m extension of F_p together
/// with an embedding of F_q.
class TowerDesc {
 public:
  explicit TowerDesc(FieldDesc base) : base_(std::move(base)) {}

  const FieldDesc& base() const { return base_; }
  /// F_{q^m}, built on first use. Not thread-safe for concurrent first use of a level.
  const FieldDesc& level(unsigned m);
  /// Image of the base generator in F_{q^m}.
  const FieldElem& gen_image(unsigned m);
  FieldElem embed(const FieldElem& x, unsigned m);

 private:
  struct Level {
    FieldDesc field;
    FieldElem gen_image;
  };
  FieldDesc base_;
  std::map<unsigned, Level> levels_;
};

}  // namespace ptes
