#pragma once

// Piecewise-linear chains with slopes in {-1, 0, +1}, stored in function form.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpfl/core.hpp"

namespace dpfl {

/// Which plane coordinate is the chain's parameter.
enum class Orientation { x_of_y, y_of_x };

struct Knot {
  double t = 0.0;  ///< parameter coordinate
  double v = 0.0;  ///< function value

  friend bool operator==(const Knot&, const Knot&) = default;
};

class Polyline {
 public:
  Polyline() = default;

  /// Knots must have strictly increasing t. Segment slopes are snapped to the
  /// nearest of {-1, 0, 1}. A snap is accepted when the slope is within
  /// `slope_tol` of it, or when the value it implies at the segment's far end
  /// is within 1e-9 * (1 + |v|) of the knot (near-degenerate segments); otherwise it throws.
  Polyline(Orientation orientation, std::vector<Knot> knots, double slope_tol = 1e-6)
      : orientation_(orientation), knots_(std::move(knots)) {
    if (knots_.empty()) throw std::invalid_argument("polyline needs at least one knot");
    slopes_.reserve(knots_.size());
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
      const double dt = knots_[k + 1].t - knots_[k].t;
      if (!(dt > 0.0)) throw std::invalid_argument("polyline parameter must be strictly increasing");
      const double dv = knots_[k + 1].v - knots_[k].v;
      const double raw = dv / dt;
      const double snapped = std::clamp(std::round(raw), -1.0, 1.0);
      const double value_tol = 1e-9 * (1.0 + std::abs(knots_[k].v) + std::abs(knots_[k + 1].v));
      if (std::abs(raw - snapped) > slope_tol && std::abs(dv - snapped * dt) > value_tol)
        throw std::logic_error("polyline slope outside {-1, 0, 1}");
      slopes_.push_back(snapped == 0.0 ? 0.0 : snapped);
    }
  }

  Orientation orientation() const { return orientation_; }
  const std::vector<Knot>& knots() const { return knots_; }
  double slope(std::size_t segment) const { return slopes_.at(segment); }
  std::size_t segments() const { return slopes_.size(); }
  double t_min() const { return knots_.front().t; }
  double t_max() const { return knots_.back().t; }

  /// Value at parameter t; t is clamped to the domain.
  double operator()(double t) const {
    if (t <= knots_.front().t) return knots_.front().v;
    if (t >= knots_.back().t) return knots_.back().v;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                     [](double value, const Knot& k) { return value < k.t; });
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    return knots_[k].v + slopes_[k] * (t - knots_[k].t);
  }

  Point to_point(const Knot& k) const {
    return orientation_ == Orientation::x_of_y ? Point{k.v, k.t} : Point{k.t, k.v};
  }

  std::vector<Point> vertices() const {
    std::vector<Point> out;
    out.reserve(knots_.size());
    for (const Knot& k : knots_) out.push_back(to_point(k));
    return out;
  }

 private:
  Orientation orientation_ = Orientation::x_of_y;
  std::vector<Knot> knots_;
  std::vector<double> slopes_;
};

/// Drops knots where the slope does not change.
inline std::vector<Knot> simplify_knots(const std::vector<Knot>& in, double tol) {
  if (in.size() <= 2) return in;
  std::vector<Knot> out{in.front()};
  for (std::size_t k = 1; k + 1 < in.size(); ++k) {
    const Knot& a = out.back();
    const Knot& b = in[k];
    const Knot& c = in[k + 1];
    const double s1 = (b.v - a.v) / (b.t - a.t);
    const double s2 = (c.v - b.v) / (c.t - b.t);
    if (std::abs(s1 - s2) > tol) out.push_back(b);
  }
  out.push_back(in.back());
  return out;
}

}  // namespace dpfl
