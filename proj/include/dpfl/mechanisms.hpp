#pragma once

// Named mechanism selector, with the matching oracle and additive bound for each.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpfl/core.hpp"
#include "dpfl/mechanisms_1d.hpp"
#include "dpfl/mechanisms_2d.hpp"
#include "dpfl/oracle.hpp"

namespace dpfl {

enum class Mechanism { median, median_plus, k_median, coord_median, geometric_median, median_plus_2d, strawman };

inline const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::median: return "median";
    case Mechanism::median_plus: return "median_plus";
    case Mechanism::k_median: return "k_median";
    case Mechanism::coord_median: return "coord_median";
    case Mechanism::geometric_median: return "geometric_median";
    case Mechanism::median_plus_2d: return "2d_median_plus";
    case Mechanism::strawman: return "strawman";
  }
  return "?";
}

inline const std::vector<Mechanism>& all_mechanisms() {
  static const std::vector<Mechanism> v{Mechanism::median,         Mechanism::median_plus,
                                        Mechanism::k_median,       Mechanism::coord_median,
                                        Mechanism::geometric_median, Mechanism::median_plus_2d,
                                        Mechanism::strawman};
  return v;
}

inline Mechanism parse_mechanism(const std::string& s) {
  for (Mechanism m : all_mechanisms())
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown mechanism '" + s + "'");
}

/// Whether the mechanism is known to be strategy-proof. Only the strawman is not.
inline bool strategy_proof(Mechanism m) { return m != Mechanism::strawman; }

struct MechanismSel {
  Mechanism id = Mechanism::median;
  std::size_t k = 1;           ///< k_median only
  double tolerance = 1e-9;     ///< geometric_median convergence, and the L2 oracle
};

/// Dimension and norm the mechanism accepts; norm is ignored for 1D.
inline bool supports(Mechanism m, const Instance& inst) {
  switch (m) {
    case Mechanism::median:
    case Mechanism::median_plus:
    case Mechanism::k_median:
    case Mechanism::strawman: return inst.dim() == 1;
    case Mechanism::coord_median:
    case Mechanism::median_plus_2d: return inst.dim() == 2 && inst.norm() == Norm::L1;
    case Mechanism::geometric_median: return inst.dim() == 2 && inst.norm() == Norm::L2;
  }
  return false;
}

/// Report-weighted mean of the Median-Plus peaks; the median when all reports are 0.
/// Deliberately manipulable: it exists to check that the deviation search finds gains.
inline double mech_strawman(const Instance& inst) {
  const std::vector<Ranked> p = median_plus_peaks(inst);
  double num = 0.0, den = 0.0;
  for (const Agent& a : inst.agents()) {
    num += a.b * p[static_cast<std::size_t>(a.id)].value;
    den += a.b;
  }
  return den > 0.0 ? num / den : mech_median(inst);
}

inline std::vector<Point> mechanism_facilities(const MechanismSel& sel, const Instance& inst) {
  if (!supports(sel.id, inst))
    throw std::invalid_argument(std::string(to_string(sel.id)) + " does not support this instance's dimension/norm");
  switch (sel.id) {
    case Mechanism::median: return {Point{mech_median(inst), 0.0}};
    case Mechanism::median_plus: return {Point{mech_median_plus(inst), 0.0}};
    case Mechanism::k_median: return alg_k_median(inst, sel.k).facilities;
    case Mechanism::coord_median: return {mech_coord_median(inst)};
    case Mechanism::geometric_median: return {mech_geometric_median(inst, sel.tolerance)};
    case Mechanism::median_plus_2d: return {mech_2d_median_plus(inst)};
    case Mechanism::strawman: return {Point{mech_strawman(inst), 0.0}};
  }
  throw std::invalid_argument("unknown mechanism");
}

inline Placement run_mechanism(const MechanismSel& sel, const Instance& inst) {
  Placement p{mechanism_facilities(sel, inst), 0.0};
  p.social_cost = social_cost(std::span<const Point>(p.facilities), inst);
  return p;
}

/// Ground-truth optimum for the mechanism's facility count and geometry.
inline OracleResult oracle_for(const MechanismSel& sel, const Instance& inst) {
  if (sel.id == Mechanism::k_median && sel.k > 1) return opt_k_1d_bruteforce(inst, sel.k);
  if (inst.dim() == 1) return opt_1d(inst);
  if (inst.norm() == Norm::L1) return opt_2d_l1(inst);
  return opt_2d_l2(inst, 1e-6);
}

/// Sum of reported b over agents whose nearest facility is within B.
inline double near_b_sum(std::span<const Point> facilities, const Instance& inst) {
  double s = 0.0;
  for (const Agent& a : inst.agents()) {
    double d = std::numeric_limits<double>::infinity();
    for (const Point& f : facilities) d = std::min(d, distance(a.location, f, inst.norm()));
    if (d <= inst.bound()) s += a.b;
  }
  return s;
}

/// Right-hand side of the additive guarantee for the mechanism's output:
///   median, coord_median, geometric_median, k_median: OPT + 2 * (sum of b within B of the output)
///   median_plus: OPT + nB
///   2d_median_plus: the coordinate-median bound, which it never exceeds
///   strawman: none (infinity)
/// The L2 case carries 1e-3 of slack for the numeric oracle.
inline double additive_bound(const MechanismSel& sel, const Instance& inst, double opt,
                             std::span<const Point> facilities) {
  const double slack = inst.dim() == 2 && inst.norm() == Norm::L2 ? 1e-3 : 0.0;
  switch (sel.id) {
    case Mechanism::median:
    case Mechanism::coord_median:
    case Mechanism::geometric_median:
    case Mechanism::k_median: return opt + 2.0 * near_b_sum(facilities, inst) + slack;
    case Mechanism::median_plus: return opt + static_cast<double>(inst.size()) * inst.bound();
    case Mechanism::median_plus_2d: {
      const Point med = mech_coord_median(inst);
      return opt + 2.0 * near_b_sum(std::span<const Point>(&med, 1), inst);
    }
    case Mechanism::strawman: return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace dpfl
