#pragma once

#include <limits>
#include <ostream>

namespace mcir {

/// Closed interval [lo, hi] with outward-rounded arithmetic.
///
/// NaN is never stored. An operation with no defined point in its argument
/// range (log of a non-positive interval, division by [0, 0]) yields the
/// whole line with `poisoned` set; poison propagates through every later
/// operation.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool poisoned = false;

  constexpr Interval() = default;
  constexpr Interval(double l, double h) : lo(l), hi(h) {}
  static constexpr Interval point(double v) { return {v, v}; }
  static constexpr Interval whole() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  static constexpr Interval poison() {
    Interval i = whole();
    i.poisoned = true;
    return i;
  }

  double width() const { return hi - lo; }
  double mid() const { return lo + 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool is_point() const { return lo == hi; }
};

inline bool operator==(const Interval& a, const Interval& b) {
  return a.lo == b.lo && a.hi == b.hi && a.poisoned == b.poisoned;
}

std::ostream& operator<<(std::ostream& os, const Interval& i);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Division by an interval containing zero gives the whole line.
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval pow(const Interval& a, int exponent);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sqrt(const Interval& a);
Interval abs(const Interval& a);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
Interval sign(const Interval& a);
Interval step(const Interval& a);

/// Smallest interval containing both arguments.
Interval hull(const Interval& a, const Interval& b);

}  // namespace mcir
