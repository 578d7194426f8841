#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>

namespace capmapf {

// Propositional variables are numbered from 1, as in DIMACS.
using Var = std::int32_t;

// A literal stored as its signed DIMACS integer.
class Lit {
 public:
  constexpr Lit() = default;

  static constexpr Lit positive(Var v) { return Lit(v); }
  static constexpr Lit negative(Var v) { return Lit(-v); }
  static constexpr Lit from_dimacs(std::int32_t value) { return Lit(value); }

  constexpr Var var() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool negated() const { return value_ < 0; }
  constexpr std::int32_t dimacs() const { return value_; }
  constexpr Lit operator~() const { return Lit(-value_); }

  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  constexpr explicit Lit(std::int32_t value) : value_(value) {}
  std::int32_t value_ = 0;
};

}  // namespace capmapf
