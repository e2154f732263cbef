#pragma once

// Exhaustive search for profitable misreports of b, for single agents and for
// co-located groups with equal true b. Locations are public and never varied.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dpfl/core.hpp"
#include "dpfl/hardness.hpp"
#include "dpfl/mechanisms.hpp"

namespace dpfl {

struct DeviationResult {
  std::vector<int> agent_ids;
  std::vector<double> best_reports;
  double true_cost_honest = 0.0;
  double true_cost_deviating = 0.0;
  double gain = 0.0;  ///< honest minus deviating, in the deviators' true cost
  double grid_pitch = 0.0;
  std::size_t evaluations = 0;
  bool reduced_grid = false;  ///< breakpoints dropped to respect the profile cap
};

namespace detail {

inline std::vector<double> base_grid(double B, double pitch) {
  if (!(pitch > 0.0)) throw std::invalid_argument("pitch must be positive");
  std::vector<double> g;
  const auto steps = static_cast<std::size_t>(std::floor(B / pitch + 1e-9));
  for (std::size_t j = 0; j <= steps; ++j) g.push_back(std::min(B, static_cast<double>(j) * pitch));
  g.push_back(B);
  return g;
}

/// Reports at which some agent's peak or diamond crosses another's or the
/// honest output: d(x_i, x_j) +- b_j, |x_i - p_j| and d(x_i, output), each
/// also nudged by 1e-7 * B on both sides.
inline std::vector<double> breakpoints(const Instance& inst, const Agent& who, std::span<const Point> honest_out) {
  std::vector<double> raw;
  for (const Agent& a : inst.agents()) {
    if (a.id == who.id) continue;
    const double d = distance(who.location, a.location, inst.norm());
    raw.push_back(d + a.b);
    raw.push_back(d - a.b);
    raw.push_back(std::abs(d - a.b));
    if (inst.dim() == 2) {
      raw.push_back(std::abs(who.location.x - a.location.x));
      raw.push_back(std::abs(who.location.y - a.location.y));
    }
  }
  for (const Point& f : honest_out) raw.push_back(distance(who.location, f, inst.norm()));
  std::vector<double> out;
  const double nudge = 1e-7 * inst.bound();
  for (double v : raw)
    for (double w : {v - nudge, v, v + nudge})
      if (w >= 0.0 && w <= inst.bound()) out.push_back(w);
  return out;
}

inline void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline double true_cost(std::span<const Point> facilities, const Agent& truth, const Instance& inst) {
  return agent_cost(facilities, truth, inst);
}

}  // namespace detail

/// Candidate reports for `who`: {0, pitch, ..., B}, the honest b, and the breakpoints.
inline std::vector<double> search_grid(const Instance& inst, const Agent& who, double pitch,
                                       std::span<const Point> honest_out, bool with_breakpoints = true) {
  std::vector<double> g = detail::base_grid(inst.bound(), pitch);
  g.push_back(who.b);
  if (with_breakpoints) {
    const std::vector<double> bp = detail::breakpoints(inst, who, honest_out);
    g.insert(g.end(), bp.begin(), bp.end());
  }
  detail::sort_unique(g);
  return g;
}

inline DeviationResult best_unilateral_deviation(const MechanismSel& sel, const Instance& inst, int agent_id,
                                                 double pitch) {
  if (agent_id < 0 || static_cast<std::size_t>(agent_id) >= inst.size())
    throw std::invalid_argument("agent id out of range");
  const Agent& truth = inst.agent(static_cast<std::size_t>(agent_id));
  const std::vector<Point> honest = mechanism_facilities(sel, inst);
  DeviationResult r;
  r.agent_ids = {agent_id};
  r.best_reports = {truth.b};
  r.grid_pitch = pitch;
  r.true_cost_honest = r.true_cost_deviating = detail::true_cost(honest, truth, inst);
  for (double report : search_grid(inst, truth, pitch, honest)) {
    const std::vector<Point> out = mechanism_facilities(sel, inst.with_report(agent_id, report));
    const double c = detail::true_cost(out, truth, inst);
    ++r.evaluations;
    if (r.true_cost_honest - c > r.gain) {
      r.gain = r.true_cost_honest - c;
      r.true_cost_deviating = c;
      r.best_reports = {report};
    }
  }
  return r;
}

/// Throws unless `ids` are 1 to 3 distinct agents sharing location and true b.
inline void check_partial_group(const Instance& inst, const std::vector<int>& ids) {
  if (ids.empty()) throw std::invalid_argument("not a valid partial group: empty");
  if (ids.size() > 3) throw std::invalid_argument("partial group search is limited to 3 agents");
  for (int id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= inst.size()) throw std::invalid_argument("agent id out of range");
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("not a valid partial group: repeated agent");
  const Agent& first = inst.agent(static_cast<std::size_t>(ids.front()));
  for (int id : ids) {
    const Agent& a = inst.agent(static_cast<std::size_t>(id));
    if (!(a.location == first.location) || a.b != first.b)
      throw std::invalid_argument("not a valid partial group: agents must share location and true b");
  }
}

/// Joint misreports over the product grid. When the full grid would exceed
/// `max_profiles` joint reports, breakpoints are dropped and `reduced_grid` is set.
inline DeviationResult best_group_deviation(const MechanismSel& sel, const Instance& inst, const std::vector<int>& ids,
                                            double pitch, std::size_t max_profiles = 200000) {
  check_partial_group(inst, ids);
  const Agent& truth = inst.agent(static_cast<std::size_t>(ids.front()));
  const std::vector<Point> honest = mechanism_facilities(sel, inst);
  DeviationResult r;
  r.agent_ids = ids;
  r.best_reports.assign(ids.size(), truth.b);
  r.grid_pitch = pitch;
  r.true_cost_honest = r.true_cost_deviating = detail::true_cost(honest, truth, inst);

  std::vector<double> grid = search_grid(inst, truth, pitch, honest);
  if (std::pow(static_cast<double>(grid.size()), static_cast<double>(ids.size())) > static_cast<double>(max_profiles)) {
    grid = search_grid(inst, truth, pitch, honest, false);
    r.reduced_grid = true;
  }
  std::vector<std::size_t> digit(ids.size(), 0);
  std::vector<double> reports(ids.size());
  while (true) {
    for (std::size_t g = 0; g < ids.size(); ++g) reports[g] = grid[digit[g]];
    const std::vector<Point> out = mechanism_facilities(sel, inst.with_reports(ids, reports));
    const double c = detail::true_cost(out, truth, inst);
    ++r.evaluations;
    if (r.true_cost_honest - c > r.gain) {
      r.gain = r.true_cost_honest - c;
      r.true_cost_deviating = c;
      r.best_reports = reports;
    }
    std::size_t g = 0;
    while (g < digit.size() && ++digit[g] == grid.size()) digit[g++] = 0;
    if (g == digit.size()) break;
  }
  return r;
}

/// Maximal sets of agents sharing location and true b, in id order; singletons omitted.
inline std::vector<std::vector<int>> colocated_groups(const Instance& inst) {
  std::map<std::tuple<double, double, double>, std::vector<int>> by_key;
  for (const Agent& a : inst.agents()) by_key[{a.location.x, a.location.y, a.b}].push_back(a.id);
  std::vector<std::vector<int>> out;
  for (auto& [key, ids] : by_key)
    if (ids.size() > 1) out.push_back(std::move(ids));
  std::sort(out.begin(), out.end());
  return out;
}

struct AuditReport {
  std::string mechanism;
  std::size_t instances = 0;
  std::size_t deviation_searches = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  double worst_gap_per_nB = -std::numeric_limits<double>::infinity();
  std::uint64_t worst_gap_instance = 0;
  double worst_gain = 0.0;
  DeviationResult worst_deviation;
  std::uint64_t worst_gain_instance = 0;
  std::size_t bound_violations = 0;

  /// No bound violation, and no profitable deviation above 1e-9 for a strategy-proof mechanism.
  bool pass(bool expect_sp) const { return bound_violations == 0 && (!expect_sp || worst_gain <= 1e-9); }
};

inline bool deterministic_family(Family f) { return f != Family::random && f != Family::skewed; }

/// Instance for audit trial t: the seed is advanced by t, and for the random
/// family spec.n is an upper bound with trial t using 1 + (t mod n) agents.
inline Instance audit_instance(const FamilySpec& spec, int t) {
  FamilySpec s = spec;
  s.seed = spec.seed + static_cast<std::uint64_t>(t);
  if (s.family == Family::random) s.n = 1 + t % std::max(1, spec.n);
  return generate(s);
}

/// Runs the mechanism, its oracle, the additive bound, unilateral deviations
/// for every agent and a group deviation for each co-located equal-b group
/// (its first 3 members). Deterministic families are evaluated once.
inline AuditReport audit_mechanism(const MechanismSel& sel, const std::vector<FamilySpec>& specs, double pitch_fraction,
                                   int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(pitch_fraction > 0.0) || pitch_fraction > 1.0) throw std::invalid_argument("pitch must be in (0, 1] times B");
  AuditReport rep;
  rep.mechanism = to_string(sel.id);
  auto consider = [&](const DeviationResult& d, std::uint64_t digest) {
    if (rep.deviation_searches++ == 0 || d.gain > rep.worst_gain) {
      rep.worst_gain = d.gain;
      rep.worst_deviation = d;
      rep.worst_gain_instance = digest;
    }
  };
  for (const FamilySpec& spec : specs) {
    const int runs = deterministic_family(spec.family) ? 1 : trials;
    for (int t = 0; t < runs; ++t) {
      const Instance inst = audit_instance(spec, t);
      const std::uint64_t digest = instance_digest(inst);
      const double pitch = pitch_fraction * inst.bound();
      const Placement p = run_mechanism(sel, inst);
      const double opt = oracle_for(sel, inst).opt_value;
      const double gap = p.social_cost - opt;
      const double nB = static_cast<double>(inst.size()) * inst.bound();
      ++rep.instances;
      if (gap > rep.worst_gap) {
        rep.worst_gap = gap;
        rep.worst_gap_instance = digest;
      }
      rep.worst_gap_per_nB = std::max(rep.worst_gap_per_nB, gap / nB);
      if (p.social_cost > additive_bound(sel, inst, opt, p.facilities) + 1e-9) ++rep.bound_violations;
      for (const Agent& a : inst.agents()) consider(best_unilateral_deviation(sel, inst, a.id, pitch), digest);
      for (std::vector<int> g : colocated_groups(inst)) {
        if (g.size() > 3) g.resize(3);
        consider(best_group_deviation(sel, inst, g, pitch), digest);
      }
    }
  }
  return rep;
}

}  // namespace dpfl
