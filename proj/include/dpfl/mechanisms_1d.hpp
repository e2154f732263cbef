#pragma once

// Median, Median-Plus and k-Median on the line.

#include <stdexcept>
#include <vector>

#include "dpfl/core.hpp"
#include "dpfl/median.hpp"
#include "dpfl/oracle.hpp"

namespace dpfl {

namespace detail {
inline void require_line(const Instance& inst, const char* what) {
  if (inst.dim() != 1) throw std::invalid_argument(std::string(what) + " requires a 1D instance");
}
}  // namespace detail

/// Median agent position, as (value, id). Reported b values are never read.
inline Ranked median_agent(const Instance& inst) {
  std::vector<Ranked> xs;
  xs.reserve(inst.size());
  for (const Agent& a : inst.agents()) xs.push_back({a.location.x, a.id});
  return median_rank(xs);
}

inline double mech_median(const Instance& inst) {
  detail::require_line(inst, "mech_median");
  return median_agent(inst).value;
}

/// Median-facing peak of every agent: x_i + b_i for agents at or left of the
/// median (under the (x, id) order), x_i - b_i for the rest.
inline std::vector<Ranked> median_plus_peaks(const Instance& inst) {
  const Ranked med = median_agent(inst);
  std::vector<Ranked> p;
  p.reserve(inst.size());
  for (const Agent& a : inst.agents()) {
    const bool left = Ranked{a.location.x, a.id} <= med;
    p.push_back({left ? a.location.x + a.b : a.location.x - a.b, a.id});
  }
  return p;
}

inline double mech_median_plus(const Instance& inst) {
  detail::require_line(inst, "mech_median_plus");
  return median_rank(median_plus_peaks(inst)).value;
}

/// k facilities at the agent locations minimising total distance, ignoring b.
/// The returned social cost uses the instance's b values.
inline Placement alg_k_median(const Instance& inst, std::size_t k) {
  detail::require_line(inst, "alg_k_median");
  std::vector<double> xs;
  xs.reserve(inst.size());
  for (const Agent& a : inst.agents()) xs.push_back(a.location.x);
  Placement p = opt_k_1d_zero_b(std::move(xs), k);
  p.social_cost = social_cost(std::span<const Point>(p.facilities), inst);
  return p;
}

}  // namespace dpfl
