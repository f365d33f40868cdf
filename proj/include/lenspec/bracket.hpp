#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace lenspec {

// A certified enclosure [lo, hi] of a nonnegative length-like quantity.
struct LengthBracket {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool exact = false;

  static LengthBracket point(double v) { return {v, v, true}; }
  static LengthBracket unbounded() { return {}; }

  double width() const { return hi - lo; }
  double mid() const { return std::isfinite(hi) ? 0.5 * (lo + hi) : lo; }
  bool contains(double v, double tol = 0.0) const { return lo - tol <= v && v <= hi + tol; }

  // Outward widening by a relative and absolute slack (rounding allowance for
  // floating-point models). Exact brackets stay exact when slack is zero.
  LengthBracket widened(double rel) const {
    if (rel <= 0.0) return *this;
    LengthBracket out{lo - rel * (1.0 + std::abs(lo)), hi + rel * (1.0 + std::abs(hi)), false};
    out.lo = std::max(0.0, out.lo);
    return out;
  }

  bool operator==(const LengthBracket&) const = default;
};

// Ratio enclosure num / den for nonnegative brackets with den.lo > 0.
inline LengthBracket ratio(const LengthBracket& num, const LengthBracket& den) {
  LengthBracket r{num.lo / den.hi, num.hi / den.lo, num.exact && den.exact};
  if (r.exact) r.hi = r.lo;
  return r;
}

inline LengthBracket scale(const LengthBracket& b, double c) {
  return {b.lo * c, b.hi * c, b.exact};
}

}  // namespace lenspec
