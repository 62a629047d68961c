#include "mcir/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mcir {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Basic operations are correctly rounded, so one ulp outward is enough.
// Library functions (sin, exp, log, pow) get two.
double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }
double down2(double x) { return down(down(x)); }
double up2(double x) { return up(up(x)); }

Interval make(double lo, double hi) {
  if (std::isnan(lo)) lo = -kInf;
  if (std::isnan(hi)) hi = kInf;
  if (lo > hi) return Interval::whole();
  return {lo, hi};
}

// Endpoint product where 0 * inf counts as 0.
double prod(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

// Whether c + 2*pi*k lies in [lo, hi] for some integer k, erring towards yes.
bool contains_periodic(double lo, double hi, double c) {
  const double eps = 1e-12 * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
  const double k = std::ceil((lo - eps - c) / kTwoPi);
  return c + kTwoPi * k <= hi + eps;
}

Interval periodic(const Interval& a, double (*fn)(double), double argmax, double argmin) {
  if (a.poisoned) return a;
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.hi - a.lo >= kTwoPi) return {-1.0, 1.0};
  const double f_lo = fn(a.lo);
  const double f_hi = fn(a.hi);
  double lo = std::max(-1.0, down2(std::min(f_lo, f_hi)));
  double hi = std::min(1.0, up2(std::max(f_lo, f_hi)));
  if (contains_periodic(a.lo, a.hi, argmax)) hi = 1.0;
  if (contains_periodic(a.lo, a.hi, argmin)) lo = -1.0;
  return {lo, hi};
}

double sin_fn(double x) { return std::sin(x); }
double cos_fn(double x) { return std::cos(x); }

Interval positive_pow(const Interval& a, int k) {
  const double p_lo = std::pow(a.lo, k);
  const double p_hi = std::pow(a.hi, k);
  if (k % 2 != 0) return make(down2(p_lo), up2(p_hi));
  if (a.lo >= 0.0) return make(std::max(0.0, down2(p_lo)), up2(p_hi));
  if (a.hi <= 0.0) return make(std::max(0.0, down2(p_hi)), up2(p_lo));
  return make(0.0, up2(std::max(p_lo, p_hi)));
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const Interval& i) {
  os << '[' << i.lo << ", " << i.hi << ']';
  if (i.poisoned) os << "(poisoned)";
  return os;
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.poisoned) return b;
  if (b.poisoned) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval operator+(const Interval& a, const Interval& b) {
  if (a.poisoned || b.poisoned) return Interval::poison();
  return make(down(a.lo + b.lo), up(a.hi + b.hi));
}

Interval operator-(const Interval& a, const Interval& b) {
  if (a.poisoned || b.poisoned) return Interval::poison();
  return make(down(a.lo - b.hi), up(a.hi - b.lo));
}

Interval operator-(const Interval& a) {
  if (a.poisoned) return a;
  return {-a.hi, -a.lo};
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.poisoned || b.poisoned) return Interval::poison();
  const double p1 = prod(a.lo, b.lo);
  const double p2 = prod(a.lo, b.hi);
  const double p3 = prod(a.hi, b.lo);
  const double p4 = prod(a.hi, b.hi);
  return make(down(std::min({p1, p2, p3, p4})), up(std::max({p1, p2, p3, p4})));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (a.poisoned || b.poisoned) return Interval::poison();
  if (b.lo == 0.0 && b.hi == 0.0) return Interval::poison();
  if (b.contains_zero()) {
    // Only one-sided divisors with a sign-definite numerator keep a finite end.
    if (b.lo == 0.0) {
      if (a.lo >= 0.0) return make(down(a.lo / b.hi), kInf);
      if (a.hi <= 0.0) return make(-kInf, up(a.hi / b.hi));
    } else if (b.hi == 0.0) {
      if (a.lo >= 0.0) return make(-kInf, up(a.lo / b.lo));
      if (a.hi <= 0.0) return make(down(a.hi / b.lo), kInf);
    }
    return Interval::whole();
  }
  const double q1 = a.lo / b.lo;
  const double q2 = a.lo / b.hi;
  const double q3 = a.hi / b.lo;
  const double q4 = a.hi / b.hi;
  if (std::isnan(q1) || std::isnan(q2) || std::isnan(q3) || std::isnan(q4)) {
    return Interval::whole();
  }
  return make(down(std::min({q1, q2, q3, q4})), up(std::max({q1, q2, q3, q4})));
}

Interval pow(const Interval& a, int exponent) {
  if (a.poisoned) return a;
  if (exponent == 0) return Interval::point(1.0);
  if (exponent > 0) return positive_pow(a, exponent);
  return Interval::point(1.0) / positive_pow(a, -exponent);
}

Interval sin(const Interval& a) {
  return periodic(a, sin_fn, 0.5 * std::numbers::pi, -0.5 * std::numbers::pi);
}

Interval cos(const Interval& a) { return periodic(a, cos_fn, 0.0, std::numbers::pi); }

Interval exp(const Interval& a) {
  if (a.poisoned) return a;
  return make(std::max(0.0, down2(std::exp(a.lo))), up2(std::exp(a.hi)));
}

Interval log(const Interval& a) {
  if (a.poisoned || a.hi <= 0.0) return Interval::poison();
  const double lo = a.lo <= 0.0 ? -kInf : down2(std::log(a.lo));
  return make(lo, up2(std::log(a.hi)));
}

Interval sqrt(const Interval& a) {
  if (a.poisoned || a.hi < 0.0) return Interval::poison();
  const double lo = a.lo <= 0.0 ? 0.0 : std::max(0.0, down(std::sqrt(a.lo)));
  return make(lo, up(std::sqrt(a.hi)));
}

Interval abs(const Interval& a) {
  if (a.poisoned) return a;
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, std::max(-a.lo, a.hi)};
}

Interval max(const Interval& a, const Interval& b) {
  if (a.poisoned || b.poisoned) return Interval::poison();
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval min(const Interval& a, const Interval& b) {
  if (a.poisoned || b.poisoned) return Interval::poison();
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval sign(const Interval& a) {
  if (a.poisoned) return a;
  auto s = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  return {s(a.lo), s(a.hi)};
}

Interval step(const Interval& a) {
  if (a.poisoned) return a;
  auto s = [](double v) { return v >= 0.0 ? 1.0 : 0.0; };
  return {s(a.lo), s(a.hi)};
}

}  // namespace mcir
