#pragma once

// Agents, instances and the doubly-peaked cost model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpfl {

enum class Norm { L1, L2 };

inline const char* to_string(Norm n) { return n == Norm::L1 ? "L1" : "L2"; }

/// A location in the line or the plane. One-dimensional instances only use `x`.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Lexicographic (x, then y) order, used for every geometric tie-break.
inline bool lex_less(const Point& a, const Point& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

inline double distance(const Point& a, const Point& b, Norm norm) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  return norm == Norm::L1 ? dx + dy : std::hypot(dx, dy);
}

struct Agent {
  Point location;
  double b = 0.0;  ///< declared preferred distance
  int id = 0;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Immutable problem instance. Construction validates every invariant, so a
/// live Instance is always well formed.
class Instance {
 public:
  Instance(std::vector<Agent> agents, int dim, Norm norm, double bound)
      : agents_(std::move(agents)), dim_(dim), norm_(norm), bound_(bound) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("dim must be 1 or 2");
    if (!(bound_ > 0.0) || !std::isfinite(bound_))
      throw std::invalid_argument("B must be a positive finite number");
    if (agents_.empty()) throw std::invalid_argument("instance needs at least one agent");
    if (dim_ == 1) norm_ = Norm::L1;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      Agent& a = agents_[i];
      if (a.id != static_cast<int>(i))
        throw std::invalid_argument("agent ids must be contiguous 0..n-1 in order");
      if (!std::isfinite(a.location.x) || !std::isfinite(a.location.y) || !std::isfinite(a.b))
        throw std::invalid_argument("agent " + std::to_string(i) + " has a non-finite value");
      if (dim_ == 1 && a.location.y != 0.0)
        throw std::invalid_argument("1D agent " + std::to_string(i) + " has a y coordinate");
      if (a.b < 0.0)
        throw std::invalid_argument("agent " + std::to_string(i) + " has negative preferred distance");
      if (a.b > bound_)
        throw std::invalid_argument("agent " + std::to_string(i) + ": preferred distance exceeds B");
    }
  }

  /// Convenience for 1D instances: `(x_i, b_i)` pairs, ids assigned in order.
  static Instance line(const std::vector<std::pair<double, double>>& xb, double bound) {
    std::vector<Agent> agents;
    agents.reserve(xb.size());
    for (const auto& [x, b] : xb)
      agents.push_back({{x, 0.0}, b, static_cast<int>(agents.size())});
    return Instance(std::move(agents), 1, Norm::L1, bound);
  }

  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t size() const { return agents_.size(); }
  int dim() const { return dim_; }
  Norm norm() const { return norm_; }
  double bound() const { return bound_; }

  /// Same locations, agent `id` declares `b` instead. Throws if b is outside [0, B].
  Instance with_report(int id, double b) const {
    std::vector<Agent> a = agents_;
    a.at(static_cast<std::size_t>(id)).b = b;
    return Instance(std::move(a), dim_, norm_, bound_);
  }

  Instance with_reports(std::span<const int> ids, std::span<const double> bs) const {
    std::vector<Agent> a = agents_;
    for (std::size_t k = 0; k < ids.size(); ++k) a.at(static_cast<std::size_t>(ids[k])).b = bs[k];
    return Instance(std::move(a), dim_, norm_, bound_);
  }

  friend bool operator==(const Instance& l, const Instance& r) {
    return l.dim_ == r.dim_ && l.norm_ == r.norm_ && l.bound_ == r.bound_ && l.agents_ == r.agents_;
  }

 private:
  std::vector<Agent> agents_;
  int dim_;
  Norm norm_;
  double bound_;
};

/// Facility points plus the social cost they were evaluated at.
struct Placement {
  std::vector<Point> facilities;
  double social_cost = 0.0;
};

/// One agent's cost on the line, written exactly as the two-branch definition.
inline double cost_1d(double y, const Agent& a) {
  const double x = a.location.x;
  if (y <= x) return std::abs(x - a.b - y);
  return std::abs(x + a.b - y);
}

inline double cost_2d(const Point& y, const Agent& a, Norm norm) {
  return std::abs(distance(a.location, y, norm) - a.b);
}

/// Agent cost under the instance's geometry.
inline double agent_cost(const Point& y, const Agent& a, const Instance& inst) {
  return inst.dim() == 1 ? cost_1d(y.x, a) : cost_2d(y, a, inst.norm());
}

/// Cost of an agent that is served by its cheapest facility.
inline double agent_cost(std::span<const Point> facilities, const Agent& a, const Instance& inst) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& f : facilities) best = std::min(best, agent_cost(f, a, inst));
  return best;
}

inline double social_cost(const Point& y, const Instance& inst) {
  double sc = 0.0;
  for (const Agent& a : inst.agents()) sc += agent_cost(y, a, inst);
  return sc;
}

inline double social_cost(double y, const Instance& inst) { return social_cost(Point{y, 0.0}, inst); }

inline double social_cost(std::span<const Point> facilities, const Instance& inst) {
  if (facilities.empty()) throw std::invalid_argument("no facilities");
  double sc = 0.0;
  for (const Agent& a : inst.agents()) sc += agent_cost(facilities, a, inst);
  return sc;
}

/// Index of the facility serving `a`; lowest index wins ties.
inline std::size_t serving_facility(std::span<const Point> facilities, const Agent& a,
                                    const Instance& inst) {
  if (facilities.empty()) throw std::invalid_argument("no facilities");
  std::size_t best = 0;
  double best_cost = agent_cost(facilities[0], a, inst);
  for (std::size_t j = 1; j < facilities.size(); ++j) {
    const double c = agent_cost(facilities[j], a, inst);
    if (c < best_cost) {
      best_cost = c;
      best = j;
    }
  }
  return best;
}

/// Social cost when every agent additionally pays a constant `c > 0`; the
/// denominator used for multiplicative ratios.
inline double cost_with_offset(const Point& y, const Instance& inst, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("offset c must be positive");
  return social_cost(y, inst) + static_cast<double>(inst.size()) * c;
}

/// Upper bound on the multiplicative ratio of a mechanism whose additive error is at most nB.
inline double offset_ratio_bound(double bound, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("offset c must be positive");
  return 1.0 + bound / c;
}

/// Smallest axis-aligned box holding every agent location, grown by `margin` on each side.
struct Box {
  double xmin, xmax, ymin, ymax;

  bool contains(const Point& p, double tol = 0.0) const {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
  }
};

inline Box bounding_box(const Instance& inst, double margin) {
  Box box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Agent& a : inst.agents()) {
    box.xmin = std::min(box.xmin, a.location.x);
    box.xmax = std::max(box.xmax, a.location.x);
    box.ymin = std::min(box.ymin, a.location.y);
    box.ymax = std::max(box.ymax, a.location.y);
  }
  box.xmin -= margin;
  box.xmax += margin;
  if (inst.dim() == 2) {
    box.ymin -= margin;
    box.ymax += margin;
  }
  return box;
}

}  // namespace dpfl
