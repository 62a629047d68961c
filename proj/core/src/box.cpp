#include "mcir/box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcir {

BoxDomain::BoxDomain(std::vector<Interval> sides) : sides_(std::move(sides)) {
  if (sides_.empty()) throw std::invalid_argument("box must have at least one dimension");
  for (std::size_t d = 0; d < sides_.size(); ++d) {
    const Interval& s = sides_[d];
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || s.lo > s.hi || s.poisoned) {
      throw std::invalid_argument("box side " + std::to_string(d) + " must be finite with lo <= hi");
    }
  }
}

BoxDomain BoxDomain::cube(std::size_t n, double lo, double hi) {
  return BoxDomain(std::vector<Interval>(n, Interval{lo, hi}));
}

double BoxDomain::min_width() const {
  double w = width(0);
  for (std::size_t d = 1; d < dims(); ++d) w = std::min(w, width(d));
  return w;
}

std::size_t BoxDomain::widest_dimension() const {
  std::size_t best = 0;
  for (std::size_t d = 1; d < dims(); ++d) {
    if (width(d) > width(best)) best = d;
  }
  return best;
}

std::vector<double> BoxDomain::center() const {
  std::vector<double> c(dims());
  for (std::size_t d = 0; d < dims(); ++d) c[d] = sides_[d].mid();
  return c;
}

bool BoxDomain::contains(std::span<const double> x) const {
  if (x.size() != dims()) return false;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!sides_[d].contains(x[d])) return false;
  }
  return true;
}

bool BoxDomain::contains(const BoxDomain& other) const {
  if (other.dims() != dims()) return false;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!sides_[d].contains(other.sides_[d])) return false;
  }
  return true;
}

void BoxDomain::clamp(std::span<double> x) const {
  for (std::size_t d = 0; d < dims(); ++d) x[d] = std::clamp(x[d], lower(d), upper(d));
}

std::pair<BoxDomain, BoxDomain> BoxDomain::split(std::size_t d, double at) const {
  BoxDomain lo_part = *this;
  BoxDomain hi_part = *this;
  lo_part.sides_[d].hi = at;
  hi_part.sides_[d].lo = at;
  return {std::move(lo_part), std::move(hi_part)};
}

BoxDomain BoxDomain::centered_clip(std::span<const double> center,
                                   std::span<const double> widths) const {
  BoxDomain out = *this;
  for (std::size_t d = 0; d < dims(); ++d) {
    const double c = std::clamp(center[d], lower(d), upper(d));
    const double half = 0.5 * widths[d];
    out.sides_[d].lo = std::clamp(c - half, lower(d), upper(d));
    out.sides_[d].hi = std::clamp(c + half, lower(d), upper(d));
  }
  return out;
}

double log_volume(const BoxDomain& box) {
  double v = 0.0;
  for (std::size_t d = 0; d < box.dims(); ++d) v += std::log(std::max(box.width(d), 1e-300));
  return v;
}

std::vector<BoxDomain> partition(const BoxDomain& box, std::size_t k) {
  if (k == 0) throw std::invalid_argument("partition: k must be positive");
  std::vector<BoxDomain> pieces{box};
  std::vector<double> volumes{log_volume(box)};
  pieces.reserve(k);
  volumes.reserve(k);
  while (pieces.size() < k) {
    const auto largest = static_cast<std::size_t>(
        std::max_element(volumes.begin(), volumes.end()) - volumes.begin());
    const BoxDomain& target = pieces[largest];
    const std::size_t d = target.widest_dimension();
    auto [lower, upper] = target.split(d, target[d].mid());
    volumes[largest] = log_volume(lower);
    const double upper_volume = log_volume(upper);
    pieces[largest] = std::move(lower);
    pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(largest) + 1, std::move(upper));
    volumes.insert(volumes.begin() + static_cast<std::ptrdiff_t>(largest) + 1, upper_volume);
  }
  return pieces;
}

bool member_of(const BoxDomain& piece, const BoxDomain& parent, std::span<const double> x) {
  for (std::size_t d = 0; d < piece.dims(); ++d) {
    if (x[d] < piece.lower(d)) return false;
    if (x[d] > piece.upper(d)) return false;
    if (x[d] == piece.upper(d) && piece.upper(d) != parent.upper(d)) return false;
  }
  return true;
}

void sample_uniform(const BoxDomain& box, Rng& rng, std::span<double> out) {
  for (std::size_t d = 0; d < box.dims(); ++d) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out[d] = std::min(box.upper(d), box.lower(d) + u * box.width(d));
  }
}

std::vector<double> sample_uniform(const BoxDomain& box, Rng& rng) {
  std::vector<double> x(box.dims());
  sample_uniform(box, rng, x);
  return x;
}

}  // namespace mcir
