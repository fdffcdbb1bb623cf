#pragma once

#include <cmath>
#include <stdexcept>

namespace dyson {

// Closed interval [lo, hi] used to report certified enclosures of infinite
// sums.  Arithmetic here is not full interval arithmetic; only the few
// monotone operations the tail machinery needs are provided.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }

  Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
  Interval operator+(double c) const { return {lo + c, hi + c}; }

  // Multiplication by a nonnegative scalar.
  Interval scaled(double c) const {
    if (c < 0.0) throw std::invalid_argument("Interval::scaled: negative factor");
    return {lo * c, hi * c};
  }

  // Square of an interval of nonnegative numbers.
  Interval squared_nonneg() const {
    double a = lo < 0.0 ? 0.0 : lo;
    return {a * a, hi * hi};
  }

  static Interval point(double x) { return {x, x}; }
};

inline Interval exp(const Interval& x) { return {std::exp(x.lo), std::exp(x.hi)}; }

}  // namespace dyson
