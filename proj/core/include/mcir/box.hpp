#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "mcir/interval.hpp"

namespace mcir {

using Rng = std::mt19937_64;

/// Axis-aligned box, one finite closed interval per dimension.
class BoxDomain {
 public:
  BoxDomain() = default;
  /// Throws std::invalid_argument unless n >= 1 and every lo <= hi is finite.
  explicit BoxDomain(std::vector<Interval> sides);
  /// The cube [lo, hi]^n.
  static BoxDomain cube(std::size_t n, double lo, double hi);

  std::size_t dims() const { return sides_.size(); }
  const Interval& operator[](std::size_t d) const { return sides_[d]; }
  std::span<const Interval> sides() const { return sides_; }

  double lower(std::size_t d) const { return sides_[d].lo; }
  double upper(std::size_t d) const { return sides_[d].hi; }
  double width(std::size_t d) const { return sides_[d].hi - sides_[d].lo; }
  double min_width() const;
  std::size_t widest_dimension() const;
  std::vector<double> center() const;

  /// Closed containment.
  bool contains(std::span<const double> x) const;
  bool contains(const BoxDomain& other) const;

  /// Componentwise clamp into the box.
  void clamp(std::span<double> x) const;

  /// Splits dimension d at `at`, returning the lower and upper pieces.
  std::pair<BoxDomain, BoxDomain> split(std::size_t d, double at) const;

  /// Box with the given side lengths centred at `center`, intersected with
  /// this box. Sides that fall entirely outside collapse onto the nearest face.
  BoxDomain centered_clip(std::span<const double> center, std::span<const double> widths) const;

  friend bool operator==(const BoxDomain& a, const BoxDomain& b) { return a.sides_ == b.sides_; }

 private:
  std::vector<Interval> sides_;
};

/// Sum of log side widths, each floored at 1e-300.
double log_volume(const BoxDomain& box);

/// Splits `box` into k pieces by repeatedly bisecting the largest piece
/// (ties: earliest) across its widest dimension (ties: lowest index).
/// The pieces cover `box` and have pairwise disjoint interiors.
std::vector<BoxDomain> partition(const BoxDomain& box, std::size_t k);

/// Half-open membership of a piece produced by partition(parent, k): a side is
/// [lo, hi) unless hi coincides with the parent's upper face, then [lo, hi].
/// Under this rule every point of the parent belongs to exactly one piece.
bool member_of(const BoxDomain& piece, const BoxDomain& parent, std::span<const double> x);

/// Uniform sample from the box.
std::vector<double> sample_uniform(const BoxDomain& box, Rng& rng);
void sample_uniform(const BoxDomain& box, Rng& rng, std::span<double> out);

}  // namespace mcir
