#pragma once

// Instance families used to stress the mechanisms, and numeric checks of the
// cost facts the lower-bound constructions depend on.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpfl/core.hpp"
#include "dpfl/median.hpp"
#include "dpfl/oracle.hpp"

namespace dpfl {

enum class Family { I1, I2, det_I1, det_I2, hardness_2d_l1, hardness_2d_l2, skewed, random };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::I1: return "I1";
    case Family::I2: return "I2";
    case Family::det_I1: return "det_I1";
    case Family::det_I2: return "det_I2";
    case Family::hardness_2d_l1: return "hardness_2d_l1";
    case Family::hardness_2d_l2: return "hardness_2d_l2";
    case Family::skewed: return "skewed";
    case Family::random: return "random";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  for (Family f : {Family::I1, Family::I2, Family::det_I1, Family::det_I2, Family::hardness_2d_l1,
                   Family::hardness_2d_l2, Family::skewed, Family::random})
    if (s == to_string(f)) return f;
  throw std::invalid_argument("unknown family '" + s + "'");
}

/// Which of the paired hard instances a 2D construction embeds.
enum class HardVariant { first, second };

struct FamilySpec {
  Family family = Family::I1;
  int m = 1;
  double B = 960.0;
  /// Extra-group size factor for the 2D constructions; NaN picks 2/5 (L1) or 3151 (L2).
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  int n = 7;    ///< agent count for skewed and random
  int dim = 1;  ///< random only
  Norm norm = Norm::L1;
  HardVariant variant = HardVariant::first;
};

namespace detail {

/// Uniform double in [0, 1) with the same bits on every platform.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

inline Instance hard_line(int m, double B, double third_b) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  std::vector<std::pair<double, double>> xb;
  xb.reserve(static_cast<std::size_t>(3 * m));
  for (int i = 0; i < m; ++i) xb.push_back({0.0, B});
  for (int i = 0; i < m; ++i) xb.push_back({-B / 4.0, B / 2.0});
  for (int i = 0; i < m; ++i) xb.push_back({B / 2.0, third_b});
  return Instance::line(xb, B);
}

}  // namespace detail

/// Three groups of m: (0, B), (-B/4, B/2), (B/2, 3B/4).
inline Instance gen_I1(int m, double B) { return detail::hard_line(m, B, 3.0 * B / 4.0); }

/// As gen_I1 with the third group's preferred distance lowered to B/2.
inline Instance gen_I2(int m, double B) { return detail::hard_line(m, B, B / 2.0); }

inline double default_beta(Norm norm) { return norm == Norm::L1 ? 0.4 : 3151.0; }

/// Number of agents in each extra zero-distance group; throws unless beta*m is an integer.
inline int extra_group_size(int m, double beta) {
  const double k = beta * m;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9 || r < 0) throw std::invalid_argument("beta*m must be a non-negative integer");
  return static_cast<int>(r);
}

/// The line construction placed on the x-axis of the plane, plus beta*m
/// zero-distance agents at (-3B/4, 0) and another beta*m at (B, 0).
inline Instance gen_2d_hardness(int m, double B, double beta, Norm norm, HardVariant which) {
  const int k = extra_group_size(m, beta);
  const Instance line = which == HardVariant::first ? gen_I1(m, B) : gen_I2(m, B);
  std::vector<Agent> agents;
  agents.reserve(line.size() + 2 * static_cast<std::size_t>(k));
  for (const Agent& a : line.agents()) agents.push_back({{a.location.x, 0.0}, a.b, a.id});
  for (int i = 0; i < k; ++i) agents.push_back({{-3.0 * B / 4.0, 0.0}, 0.0, static_cast<int>(agents.size())});
  for (int i = 0; i < k; ++i) agents.push_back({{B, 0.0}, 0.0, static_cast<int>(agents.size())});
  return Instance(std::move(agents), 2, norm, B);
}

/// Closed-form optimum of either 2D construction: 3mB/4 + 7*beta*m*B/4.
inline double hardness_2d_opt(int m, double B, double beta) { return 3.0 * m * B / 4.0 + 7.0 * beta * m * B / 4.0; }

/// Odd-n family where every median-facing peak sits at least B/4 left of the
/// position median. The median agent is at 0; the others have b in [B/2, B]
/// and a jitter s in [0, B/(8n)], placed so their median-facing peak is -B/4 - s.
inline Instance gen_skewed(int n, double B, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("skewed family needs n >= 3");
  if (n % 2 == 0) throw std::invalid_argument("skewed family needs odd n");
  if (!(B > 0.0)) throw std::invalid_argument("B must be positive");
  std::mt19937_64 rng(seed);
  const int half = (n - 1) / 2;
  const double jitter = B / (8.0 * n);
  std::vector<std::pair<double, double>> xb;
  xb.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < half; ++i) {
    const double b = detail::uniform(rng, B / 2.0, B), s = detail::uniform(rng, 0.0, jitter);
    xb.push_back({-B / 4.0 - b - s, b});
  }
  xb.push_back({0.0, detail::uniform(rng, B / 2.0, B)});
  for (int i = 0; i < half; ++i) {
    const double b = detail::uniform(rng, B / 2.0, B), s = detail::uniform(rng, 0.0, jitter);
    xb.push_back({b - B / 4.0 - s, b});
  }
  return Instance::line(xb, B);
}

/// Smallest distance by which a non-median agent's median-facing peak falls
/// left of the position median. gen_skewed guarantees at least B/4.
inline double skew_margin(const Instance& inst) {
  std::vector<Ranked> xs;
  for (const Agent& a : inst.agents()) xs.push_back({a.location.x, a.id});
  const Ranked med = median_rank(xs);
  double margin = std::numeric_limits<double>::infinity();
  for (const Agent& a : inst.agents()) {
    if (a.id == med.id) continue;
    const double peak = Ranked{a.location.x, a.id} < med ? a.location.x + a.b : a.location.x - a.b;
    margin = std::min(margin, med.value - peak);
  }
  return margin;
}

/// Locations uniform in [-4B, 4B]^dim, b uniform in [0, B].
inline Instance gen_random(int n, double B, int dim, Norm norm, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Agent a;
    a.id = i;
    a.location.x = detail::uniform(rng, -4.0 * B, 4.0 * B);
    a.location.y = dim == 2 ? detail::uniform(rng, -4.0 * B, 4.0 * B) : 0.0;
    a.b = detail::uniform(rng, 0.0, B);
    agents.push_back(a);
  }
  return Instance(std::move(agents), dim, norm, B);
}

inline Instance generate(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::I1:
    case Family::det_I1: return gen_I1(spec.m, spec.B);
    case Family::I2:
    case Family::det_I2: return gen_I2(spec.m, spec.B);
    case Family::hardness_2d_l1:
    case Family::hardness_2d_l2: {
      const Norm norm = spec.family == Family::hardness_2d_l1 ? Norm::L1 : Norm::L2;
      const double beta = std::isnan(spec.beta) ? default_beta(norm) : spec.beta;
      return gen_2d_hardness(spec.m, spec.B, beta, norm, spec.variant);
    }
    case Family::skewed: return gen_skewed(spec.n, spec.B, spec.seed);
    case Family::random: return gen_random(spec.n, spec.B, spec.dim, spec.norm, spec.seed);
  }
  throw std::invalid_argument("unknown family");
}

// ---------------------------------------------------------------------------
// Observation validators

struct Check {
  std::string description;
  std::string relation;  ///< "==", "<", "<=", ">", ">="
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ObservationReport {
  std::string obs_id;
  std::uint64_t instance_digest = 0;
  std::vector<Check> checks;
  bool all_pass = false;
};

/// FNV-1a over dim, norm, B and every agent's (x, y, b) bit patterns.
inline std::uint64_t instance_digest(const Instance& inst, std::uint64_t h = 0xcbf29ce484222325ULL) {
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const int dim = inst.dim();
  const int norm = static_cast<int>(inst.norm());
  const double B = inst.bound();
  mix(&dim, sizeof dim);
  mix(&norm, sizeof norm);
  mix(&B, sizeof B);
  for (const Agent& a : inst.agents()) {
    mix(&a.location.x, sizeof(double));
    mix(&a.location.y, sizeof(double));
    mix(&a.b, sizeof(double));
  }
  return h;
}

inline const std::vector<std::string>& supported_observations() {
  static const std::vector<std::string> ids{"obs1", "obs2", "obs3",   "obs4",   "obs5",          "obs6",
                                            "obs7", "obs8", "det_L1", "det_L2", "thm10_regions", "thm11_regions"};
  return ids;
}

namespace detail {

/// Non-strict relations get a default slack of 1e-12 * scale to absorb
/// rounding when B is not a dyadic rational; strict ones only get an explicit tol.
class CheckList {
 public:
  explicit CheckList(double scale = 0.0) : slack_(1e-12 * scale) {}

  void add(std::string what, const std::string& rel, double expected, double actual, double tol = 0.0) {
    if (tol == 0.0 && rel != "<" && rel != ">") tol = slack_;
    bool ok = false;
    if (rel == "==") ok = std::abs(actual - expected) <= tol;
    else if (rel == "<") ok = actual < expected + tol;
    else if (rel == "<=") ok = actual <= expected + tol;
    else if (rel == ">") ok = actual > expected - tol;
    else if (rel == ">=") ok = actual >= expected - tol;
    else throw std::logic_error("bad relation " + rel);
    checks_.push_back({std::move(what), rel, expected, actual, tol, ok});
  }

  ObservationReport report(std::string id, std::uint64_t digest) && {
    ObservationReport r{std::move(id), digest, std::move(checks_), true};
    for (const Check& c : r.checks) r.all_pass = r.all_pass && c.pass;
    return r;
  }

 private:
  double slack_;
  std::vector<Check> checks_;
};

/// `count` evenly spaced samples over [lo, hi]; endpoints included unless `open`.
inline std::vector<double> sweep(double lo, double hi, int count, bool open = false) {
  std::vector<double> ys;
  ys.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double f = open ? (k + 1.0) / (count + 1.0) : static_cast<double>(k) / (count - 1);
    ys.push_back(lo + (hi - lo) * f);
  }
  return ys;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Extremes {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

template <class F>
Extremes extremes(const std::vector<double>& ys, F&& f) {
  Extremes e;
  for (double y : ys) {
    const double v = f(y);
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
  }
  return e;
}

/// Samples left of `lo` and right of `hi` over the span [lo - 2B, hi + 2B].
inline std::vector<double> exterior(double lo, double hi, double B, int count) {
  std::vector<double> ys = sweep(lo - 2.0 * B, lo, count);
  ys.pop_back();
  std::vector<double> right = sweep(hi, hi + 2.0 * B, count);
  ys.insert(ys.end(), right.begin() + 1, right.end());
  ys.push_back(lo);
  ys.push_back(hi);
  return ys;
}

inline ObservationReport interval_cost_check(const std::string& id, const Instance& inst, double lo, double hi,
                                             double level, bool open_inside, int samples) {
  const double B = inst.bound();
  CheckList c(level);
  auto sc = [&](double y) { return social_cost(y, inst); };
  c.add("SC at left endpoint " + fmt(lo), "==", level, sc(lo));
  c.add("SC at right endpoint " + fmt(hi), "==", level, sc(hi));
  const Extremes in = extremes(sweep(lo, hi, samples, open_inside), sc);
  c.add("max SC over interval samples", open_inside ? "<" : "<=", level, in.max);
  const Extremes out = extremes(exterior(lo, hi, B, samples), sc);
  c.add("min SC over exterior samples", ">=", level, out.min);
  return std::move(c).report(id, instance_digest(inst));
}

/// Cost of one agent from each of the first two groups (the m copies are identical).
inline double groups_12_cost(const Point& y, const Instance& inst, int m) {
  return agent_cost(y, inst.agent(0), inst) + agent_cost(y, inst.agent(static_cast<std::size_t>(m)), inst);
}

inline double group_3_cost(const Point& y, const Instance& inst, int m) {
  return agent_cost(y, inst.agent(static_cast<std::size_t>(2 * m)), inst);
}

inline ObservationReport thm10_regions(const FamilySpec& spec) {
  const int m = spec.m;
  const double B = spec.B;
  const double beta = std::isnan(spec.beta) ? default_beta(Norm::L1) : spec.beta;
  const Instance first = gen_2d_hardness(m, B, beta, Norm::L1, HardVariant::first);
  const Instance second = gen_2d_hardness(m, B, beta, Norm::L1, HardVariant::second);
  const double opt = hardness_2d_opt(m, B, beta);
  const double slack = m * B / 5.0;
  const int k = extra_group_size(m, beta);
  CheckList c(opt);
  c.add("agent count 3m + 2*beta*m", "==", 3.0 * m + 2.0 * k, static_cast<double>(first.size()));
  if (first.size() <= 64) {
    c.add("exact optimum of the first instance", "==", opt, opt_2d_l1(first).opt_value);
    c.add("exact optimum of the second instance", "==", opt, opt_2d_l1(second).opt_value);
  }
  c.add("SC of first instance at (-3B/4, 0)", "==", opt, social_cost(Point{-0.75 * B, 0.0}, first));
  c.add("SC of second instance at (B, 0)", "==", opt, social_cost(Point{B, 0.0}, second));
  const double h1 = B / 4.0, h2 = B / 8.0;
  c.add("first region apex (-B/2, B/4) costs OPT + 2*beta*m*B/4", "==", opt + 2.0 * k * h1,
        social_cost(Point{-B / 2.0, h1}, first));
  c.add("first region apex cost is OPT + mB/5", "<=", opt + slack, social_cost(Point{-B / 2.0, h1}, first));
  c.add("second region apex (7B/8, B/8) costs OPT + 2*beta*m*B/8", "==", opt + 2.0 * k * h2,
        social_cost(Point{7.0 * B / 8.0, h2}, second));

  c.add("first region right corner (-11B/20, 0)", "==", opt + slack, social_cost(Point{-11.0 * B / 20.0, 0.0}, first));
  // Isolated points at exactly OPT + mB/5 (such as (0, B/4) in the first
  // instance) lie outside the regions, so membership is the strict sublevel set.
  const double pitch = B / 100.0;
  double min_g3 = std::numeric_limits<double>::infinity(), max_height = 0.0, min_g12 = min_g3, min_g12_all = min_g3;
  std::size_t members1 = 0, members2 = 0;
  for (int i = -200; i <= 200; ++i)
    for (int j = -50; j <= 50; ++j) {
      const Point p{i * pitch, j * pitch};
      if (social_cost(p, first) < opt + slack) {
        ++members1;
        min_g3 = std::min(min_g3, group_3_cost(p, first, m));
        max_height = std::max(max_height, std::abs(p.y));
      }
      const double g12 = groups_12_cost(p, second, m);
      min_g12_all = std::min(min_g12_all, g12);
      if (social_cost(p, second) < opt + slack) {
        ++members2;
        min_g12 = std::min(min_g12, g12);
      }
    }
  c.add("first region grid members", ">", 0.0, static_cast<double>(members1));
  c.add("second region grid members", ">", 0.0, static_cast<double>(members2));
  c.add("group-3 cost over first region", ">=", 3.0 * B / 10.0, min_g3);
  c.add("height over first region", "<=", B / 4.0, max_height);
  c.add("group 1+2 cost over second region", ">=", 3.0 * B / 4.0, min_g12);
  c.add("group 1+2 cost over whole grid", ">=", B / 4.0, min_g12_all);
  const double n = static_cast<double>(first.size());
  c.add("implied gap mB/100 vs stated nB/500", ">=", n * B / 500.0, m * B / 100.0);
  c.add("implied gap mB/100 vs nB/380 at beta = 2/5", "==", n * B / 380.0, m * B / 100.0, beta == 0.4 ? 1e-9 : 1e300);
  return std::move(c).report("thm10_regions", instance_digest(second, instance_digest(first)));
}

inline ObservationReport thm11_regions(const FamilySpec& spec) {
  const int m = spec.m;
  const double B = spec.B;
  const double beta = std::isnan(spec.beta) ? default_beta(Norm::L2) : spec.beta;
  const Instance first = gen_2d_hardness(m, B, beta, Norm::L2, HardVariant::first);
  const Instance second = gen_2d_hardness(m, B, beta, Norm::L2, HardVariant::second);
  const double opt = hardness_2d_opt(m, B, beta);
  const double slack = m * B / 5.0;
  const int k = extra_group_size(m, beta);
  const double tol = 1e-9 * opt;
  CheckList c(opt);
  c.add("agent count 3m + 2*beta*m", "==", 3.0 * m + 2.0 * k, static_cast<double>(first.size()));
  c.add("SC of first instance at (-3B/4, 0)", "==", opt, social_cost(Point{-0.75 * B, 0.0}, first), tol);
  c.add("SC of second instance at (B, 0)", "==", opt, social_cost(Point{B, 0.0}, second), tol);

  // Extra agents alone already exceed OPT + mB/5 once |y| > B/60; their cost is
  // smallest at x = B/8 for a given height.
  const Point probe{B / 8.0, B / 60.0};
  double extra = 0.0;
  for (std::size_t i = static_cast<std::size_t>(3 * m); i < first.size(); ++i)
    extra += agent_cost(probe, first.agent(i), first);
  c.add("extra-agent cost at (B/8, B/60)", ">=", opt + slack, extra);

  const double pitch = B / 100.0;
  std::size_t members1 = 0, members2 = 0;
  double max_height = 0.0, max_x1 = -std::numeric_limits<double>::infinity();
  double min_g3 = std::numeric_limits<double>::infinity(), min_rest2 = min_g3;
  for (int i = -200; i <= 200; ++i)
    for (int j = -10; j <= 10; ++j) {
      const Point p{i * pitch, j * pitch};
      const double sc1 = social_cost(p, first);
      if (sc1 < opt + slack) {
        ++members1;
        max_height = std::max(max_height, std::abs(p.y));
        max_x1 = std::max(max_x1, p.x);
        min_g3 = std::min(min_g3, group_3_cost(p, first, m));
      }
      const double sc2 = social_cost(p, second);
      if (sc2 < opt + slack) {
        ++members2;
        max_height = std::max(max_height, std::abs(p.y));
        min_rest2 = std::min(min_rest2, sc2 - m * group_3_cost(p, second, m));
      }
    }
  c.add("first region grid members", ">", 0.0, static_cast<double>(members1));
  c.add("second region grid members", ">", 0.0, static_cast<double>(members2));
  c.add("height over both regions", "<=", B / 60.0, max_height);
  c.add("rightmost x in first region", "<=", -11.0 * B / 20.0, max_x1);
  c.add("group-3 cost over first region", ">=", 3.0 * B / 10.0, min_g3, tol);
  c.add("cost without group 3 over second region", ">=", opt, min_rest2, tol);
  const double n = static_cast<double>(first.size());
  c.add("implied gap mB/100 vs stated nB/630500", ">=", n * B / 630500.0, m * B / 100.0, tol);
  return std::move(c).report("thm11_regions", instance_digest(second, instance_digest(first)));
}

}  // namespace detail

/// Numeric check of one cost fact about the hard instances. Equalities are
/// exact at B = 960; inequalities are swept at `samples` points per interval.
inline ObservationReport validate_observation(const FamilySpec& spec, const std::string& obs_id, int samples = 1000) {
  const int m = spec.m;
  const double B = spec.B;
  const double mB = m * B;
  if (obs_id == "obs1" || obs_id == "obs3") {
    const bool first = obs_id == "obs1";
    const Instance inst = first ? gen_I1(m, B) : gen_I2(m, B);
    const OracleResult r = opt_1d(inst);
    detail::CheckList c(mB);
    c.add("optimal location", "==", first ? -3.0 * B / 4.0 : B, r.location().x);
    c.add("optimal social cost", "==", 3.0 * mB / 4.0, r.opt_value);
    return std::move(c).report(obs_id, instance_digest(inst));
  }
  if (obs_id == "obs2")
    return detail::interval_cost_check(obs_id, gen_I1(m, B), -7.0 * B / 8.0, -5.0 * B / 8.0, 7.0 * mB / 8.0, true,
                                       samples);
  if (obs_id == "obs4")
    return detail::interval_cost_check(obs_id, gen_I2(m, B), 7.0 * B / 8.0, 25.0 * B / 24.0, 7.0 * mB / 8.0, true,
                                       samples);
  if (obs_id == "obs5")
    return detail::interval_cost_check(obs_id, gen_I1(m, B), -19.0 * B / 20.0, -11.0 * B / 20.0,
                                       3.0 * mB / 4.0 + mB / 5.0, false, samples);
  if (obs_id == "obs6")
    return detail::interval_cost_check(obs_id, gen_I2(m, B), 4.0 * B / 5.0, 16.0 * B / 15.0,
                                       3.0 * mB / 4.0 + mB / 5.0, false, samples);
  if (obs_id == "obs7" || obs_id == "det_L1" || obs_id == "det_L2") {
    const Instance inst = gen_I1(m, B);
    auto g3 = [&](double y) { return detail::group_3_cost(Point{y, 0.0}, inst, m); };
    detail::CheckList c(mB);
    if (obs_id == "obs7") {
      const double lo = -19.0 * B / 20.0, hi = -11.0 * B / 20.0;
      c.add("min group-3 cost over interval", ">=", 3.0 * B / 10.0, detail::extremes(detail::sweep(lo, hi, samples), g3).min);
      c.add("group-3 cost at right endpoint", "==", 3.0 * B / 10.0, g3(hi));
    } else if (obs_id == "det_L1") {
      const double lo = -7.0 * B / 8.0, hi = -5.0 * B / 8.0;
      c.add("min group-3 cost inside open interval", ">", 3.0 * B / 8.0,
            detail::extremes(detail::sweep(lo, hi, samples, true), g3).min);
      c.add("group-3 cost at right endpoint", "==", 3.0 * B / 8.0, g3(hi));
    } else {
      const double lo = 7.0 * B / 8.0, hi = 25.0 * B / 24.0;
      c.add("max group-3 cost inside open interval", "<", 3.0 * B / 8.0,
            detail::extremes(detail::sweep(lo, hi, samples, true), g3).max);
      c.add("group-3 cost at left endpoint", "==", 3.0 * B / 8.0, g3(lo));
    }
    return std::move(c).report(obs_id, instance_digest(inst));
  }
  if (obs_id == "obs8") {
    const Instance inst = gen_I2(m, B);
    auto g12 = [&](double y) { return detail::groups_12_cost(Point{y, 0.0}, inst, m); };
    const double lo = 4.0 * B / 5.0, hi = 16.0 * B / 15.0;
    detail::CheckList c(mB);
    c.add("min group 1+2 cost over interval", ">=", 3.0 * B / 4.0, detail::extremes(detail::sweep(lo, hi, samples), g12).min);
    const detail::Extremes flat = detail::extremes(detail::sweep(lo, B, samples), g12);
    c.add("group 1+2 cost constant on [4B/5, B] (min)", "==", 3.0 * B / 4.0, flat.min);
    c.add("group 1+2 cost constant on [4B/5, B] (max)", "==", 3.0 * B / 4.0, flat.max);
    c.add("min group 1+2 cost outside interval", ">=", B / 4.0,
          detail::extremes(detail::exterior(lo, hi, B, samples), g12).min);
    const detail::Extremes low = detail::extremes(detail::sweep(-B, -3.0 * B / 4.0, samples), g12);
    c.add("group 1+2 cost on [-B, -3B/4] (max)", "==", B / 4.0, low.max);
    return std::move(c).report(obs_id, instance_digest(inst));
  }
  if (obs_id == "thm10_regions") return detail::thm10_regions(spec);
  if (obs_id == "thm11_regions") return detail::thm11_regions(spec);
  throw std::invalid_argument("unknown observation '" + obs_id + "'");
}

}  // namespace dpfl
