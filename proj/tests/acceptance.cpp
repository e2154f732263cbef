// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dpfl/hardness.hpp"
#include "dpfl/mechanisms.hpp"
#include "dpfl/sp_harness.hpp"
#include "support/reference.hpp"

using namespace dpfl;

namespace {

constexpr double kB = 960.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs `f` and fails the outcome if it took longer than `budget` seconds.
template <class F>
void timed(Outcome& o, double budget, const std::string& what, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const double s = seconds_since(t0);
  o.require(s < budget, what + " took " + std::to_string(s) + " s");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FamilySpec random_spec(int n_max, int dim, Norm norm, std::uint64_t seed) {
  FamilySpec s;
  s.family = Family::random;
  s.n = n_max;
  s.B = kB;
  s.dim = dim;
  s.norm = norm;
  s.seed = seed;
  return s;
}

// Fuzz corpora shared by the strategy-proofness, dominance and bound criteria.
constexpr int kLineTrials = 1000, kPlaneTrials = 300;
const FamilySpec kLineFuzz = random_spec(9, 1, Norm::L1, 1000);
const FamilySpec kPlaneFuzz = random_spec(7, 2, Norm::L1, 2000);

Outcome exact_values() {
  Outcome o;
  for (int m : {1, 2, 5}) {
    const double mB = m * kB;
    const Instance i1 = gen_I1(m, kB), i2 = gen_I2(m, kB);
    timed(o, 1.0, "optimum of the first instance", [&] {
      const OracleResult r = opt_1d(i1);
      o.require(r.location().x == -3 * kB / 4 && r.opt_value == 3 * mB / 4,
                "first instance optimum at m=" + std::to_string(m) + " is " + fmt(r.opt_value));
    });
    timed(o, 1.0, "optimum of the second instance", [&] {
      const OracleResult r = opt_1d(i2);
      o.require(r.location().x == kB && r.opt_value == 3 * mB / 4,
                "second instance optimum at m=" + std::to_string(m) + " is " + fmt(r.opt_value));
    });
    timed(o, 1.0, "interval endpoints", [&] {
      o.require(social_cost(-7 * kB / 8, i1) == 7 * mB / 8 && social_cost(-5 * kB / 8, i1) == 7 * mB / 8,
                "first instance interval endpoints");
      o.require(social_cost(4 * kB / 5, i2) == 19 * mB / 20 && social_cost(16 * kB / 15, i2) == 19 * mB / 20,
                "second instance interval endpoints");
    });
  }
  o.detail << "m in {1,2,5} at B=960, exact equality";
  return o;
}

Outcome golden_mechanisms() {
  Outcome o;
  for (int m : {1, 3}) {
    const Instance i1 = gen_I1(m, kB);
    const double mB = m * kB;
    const double med = mech_median(i1), mp = mech_median_plus(i1);
    o.require(med == 0.0 && social_cost(med, i1) == 3 * mB / 2, "median at m=" + std::to_string(m));
    o.require(mp == kB / 4 && social_cost(mp, i1) == 5 * mB / 4, "median_plus at m=" + std::to_string(m));
  }
  o.detail << "m in {1,3}: median 0 with 3mB/2, median_plus B/4 with 5mB/4";
  return o;
}

Outcome lower_bound_witness() {
  Outcome o;
  double worst_ratio = INFINITY;
  for (int m : {1, 2, 3, 5, 8}) {
    const Instance i1 = gen_I1(m, kB), i2 = gen_I2(m, kB);
    const double n = static_cast<double>(i1.size());
    for (const auto& f : {std::function<double(const Instance&)>(mech_median),
                          std::function<double(const Instance&)>(mech_median_plus)}) {
      const double g1 = social_cost(f(i1), i1) - opt_1d(i1).opt_value;
      const double g2 = social_cost(f(i2), i2) - opt_1d(i2).opt_value;
      const double g = std::max(g1, g2);
      worst_ratio = std::min(worst_ratio, g / (n * kB / 24));
      o.require(g >= n * kB / 24, "gap " + fmt(g) + " at m=" + std::to_string(m));
    }
  }
  o.detail << "smallest max-gap / (nB/24) = " << worst_ratio;
  return o;
}

Outcome strategy_proofness() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double pitch = 1.0 / 16.0;

  // Hard families add co-located equal-b groups to the random corpus.
  std::vector<FamilySpec> line_specs{kLineFuzz};
  for (Family f : {Family::I1, Family::I2, Family::det_I1, Family::det_I2}) {
    FamilySpec s;
    s.family = f;
    s.m = 3;
    s.B = kB;
    line_specs.push_back(s);
  }
  const AuditReport mp = audit_mechanism({Mechanism::median_plus}, line_specs, pitch, kLineTrials);
  o.require(mp.pass(true), "median_plus gain " + fmt(mp.worst_gain));

  std::vector<FamilySpec> plane_specs{kPlaneFuzz};
  FamilySpec hard;
  hard.family = Family::hardness_2d_l1;
  hard.m = 5;
  hard.B = kB;
  plane_specs.push_back(hard);
  hard.variant = HardVariant::second;
  plane_specs.push_back(hard);
  const AuditReport mp2 = audit_mechanism({Mechanism::median_plus_2d}, plane_specs, pitch, kPlaneTrials);
  o.require(mp2.pass(true), "2d_median_plus gain " + fmt(mp2.worst_gain));

  int blocks_flagged = 0;
  double weakest_block = INFINITY;
  for (int block = 0; block < 10; ++block) {
    const AuditReport s = audit_mechanism({Mechanism::strawman}, {random_spec(9, 1, Norm::L1, 100u * block)}, pitch, 100);
    weakest_block = std::min(weakest_block, s.worst_gain);
    if (s.worst_gain > kB / 10) ++blocks_flagged;
  }
  o.require(blocks_flagged == 10, "strawman flagged in " + std::to_string(blocks_flagged) + " of 10 blocks");

  const double s = seconds_since(t0);
  o.require(s < 300.0, "runtime " + std::to_string(s) + " s");
  o.detail << mp.instances << " line instances (worst gain " << mp.worst_gain << "), " << mp2.instances
           << " plane instances (worst gain " << mp2.worst_gain << "), " << mp.deviation_searches + mp2.deviation_searches
           << " searches; strawman weakest block gain " << weakest_block << "; " << static_cast<int>(s) << " s";
  return o;
}

Outcome dominance() {
  Outcome o;
  double worst = INFINITY;
  for (int t = 0; t < kLineTrials; ++t) {
    const Instance inst = audit_instance(kLineFuzz, t);
    const double slack = social_cost(mech_median(inst), inst) - social_cost(mech_median_plus(inst), inst);
    worst = std::min(worst, slack);
    o.require(slack >= -1e-9, "line trial " + std::to_string(t));
  }
  for (int t = 0; t < kPlaneTrials; ++t) {
    const Instance inst = audit_instance(kPlaneFuzz, t);
    const double slack = social_cost(mech_coord_median(inst), inst) - social_cost(mech_2d_median_plus(inst), inst);
    worst = std::min(worst, slack);
    o.require(slack >= -1e-9, "plane trial " + std::to_string(t));
  }
  o.detail << kLineTrials + kPlaneTrials << " instances, smallest slack " << worst;
  return o;
}

Outcome additive_bounds() {
  Outcome o;
  auto check = [&](const MechanismSel& sel, const Instance& inst, const std::string& what) {
    const Placement p = run_mechanism(sel, inst);
    const double opt = oracle_for(sel, inst).opt_value;
    o.require(p.social_cost <= additive_bound(sel, inst, opt, p.facilities) + 1e-9, what);
    o.require(p.social_cost >= opt - 1e-6, what + " beats the oracle");
  };
  for (int t = 0; t < kLineTrials; ++t) {
    const Instance inst = audit_instance(kLineFuzz, t);
    check({Mechanism::median_plus}, inst, "median_plus line trial " + std::to_string(t));
    check({Mechanism::median}, inst, "median line trial " + std::to_string(t));
  }
  for (int t = 0; t < kPlaneTrials; ++t)
    check({Mechanism::coord_median}, audit_instance(kPlaneFuzz, t), "coord_median trial " + std::to_string(t));
  const FamilySpec l2 = random_spec(7, 2, Norm::L2, 3000);
  constexpr int kL2Trials = 60;
  for (int t = 0; t < kL2Trials; ++t)
    check({Mechanism::geometric_median}, audit_instance(l2, t), "geometric_median trial " + std::to_string(t));
  int k_cases = 0;
  for (std::size_t k : {1u, 2u})
    for (int n = static_cast<int>(k); n <= 8; ++n)
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        check({Mechanism::k_median, k}, gen_random(n, kB, 1, Norm::L1, 4000 + 100 * n + seed),
              "k_median k=" + std::to_string(k) + " n=" + std::to_string(n));
        ++k_cases;
      }
  o.detail << kLineTrials << " line, " << kPlaneTrials << " plane L1, " << kL2Trials << " plane L2, " << k_cases
           << " k-median cases";
  return o;
}

bool on_diamond(const Point& p, const Agent& a) {
  return std::abs(std::abs(p.x - a.location.x) + std::abs(p.y - a.location.y) - a.b) <= 1e-9 * (1 + a.b);
}

Outcome geometry() {
  Outcome o;
  std::mt19937_64 rng(7);
  int segments = 0, moves = 0;
  constexpr int kTrials = 1000;
  for (int t = 0; t < kTrials; ++t) {
    // Odd trials use small integer coordinates, which make segment meetings common.
    const Instance inst = t % 2 == 0 ? gen_random(1 + t % 9, kB, 2, Norm::L1, 5000 + t)
                                     : ref::random_instance(rng, 1 + t % 9, 4, 2, Norm::L1, true);
    const std::string tag = "trial " + std::to_string(t);
    MedianPlus2d r;
    try {
      r = median_plus_2d_details(inst);
    } catch (const std::exception& e) {
      o.require(false, tag + ": " + e.what());
      continue;
    }
    const double scale = 1e-9 * (1.0 + social_cost(r.med.point(), inst));
    if (r.meet.kind == SplitIntersection::Kind::segment) {
      ++segments;
      bool shared = false;
      for (const Agent& a : inst.agents()) shared = shared || (on_diamond(r.meet.a, a) && on_diamond(r.meet.b, a));
      o.require(std::abs(r.meet.slope) == 1.0 && !(r.meet.a == r.meet.b) &&
                    std::abs(std::abs(r.meet.b.y - r.meet.a.y) - std::abs(r.meet.b.x - r.meet.a.x)) <= scale && shared,
                tag + " segment shape");
    } else {
      o.require(r.meet.a == r.meet.b, tag + " point meeting");
    }
    o.require(r.box.contains(r.output), tag + " output outside the working box");
    const std::vector<Point> path = alternating_moves(r.V, r.H, r.med.point(), r.output);
    o.require(path.back() == r.output, tag + " walk misses the output");
    for (std::size_t k = 1; k < path.size(); ++k, ++moves)
      o.require(social_cost(path[k], inst) <= social_cost(path[k - 1], inst) + scale, tag + " cost rose on a move");
  }
  o.detail << kTrials << " instances, " << segments << " segment meetings, " << moves << " moves";
  return o;
}

Outcome skewed_improvement() {
  Outcome o;
  double worst = INFINITY;
  for (int n : {3, 7, 15})
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Instance inst = gen_skewed(n, kB, seed);
      const double gain = social_cost(mech_median(inst), inst) - social_cost(mech_median_plus(inst), inst);
      const double need = (n - 1) * kB / 4;
      worst = std::min(worst, gain / need);
      o.require(gain >= need, "n=" + std::to_string(n) + " seed " + std::to_string(seed) + " gain " + fmt(gain));
    }
  o.detail << "n in {3,7,15}, 50 seeds each, smallest improvement / ((n-1)B/4) = " << worst;
  return o;
}

Outcome plane_hardness() {
  Outcome o;
  const double beta = default_beta(Norm::L1);
  timed(o, 30.0, "plane L1 optima", [&] {
    for (int m : {5, 10})
      for (HardVariant v : {HardVariant::first, HardVariant::second}) {
        const Instance inst = gen_2d_hardness(m, kB, beta, Norm::L1, v);
        const double want = 3 * m * kB / 4 + 7 * m * kB * beta / 4;
        const double got = opt_2d_l1(inst).opt_value;
        o.require(inst.size() * 5 == static_cast<std::size_t>(19 * m), "n at m=" + std::to_string(m));
        o.require(std::abs(got - want) <= 1e-9 * want, "optimum " + fmt(got) + " vs " + fmt(want));
      }
  });
  FamilySpec s;
  s.B = kB;
  s.m = 5;
  const ObservationReport t10 = validate_observation(s, "thm10_regions");
  o.require(t10.all_pass, "L1 region checks");
  s.m = 1;
  const ObservationReport t11 = validate_observation(s, "thm11_regions");
  o.require(t11.all_pass, "L2 region checks");
  o.detail << "m in {5,10}, both variants; region checks " << t10.checks.size() + t11.checks.size();
  return o;
}

Outcome not_reproducible() {
  Outcome o;
  o.detail << "not checked here: lower bounds quantified over every strategy-proof mechanism, and expected-cost "
              "bounds for randomized mechanisms; criteria 1, 3 and 9 check the instance arithmetic they rest on";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact optimum and interval values", exact_values},
      {"mechanism golden values", golden_mechanisms},
      {"lower-bound witness nB/24", lower_bound_witness},
      {"strategy-proofness search", strategy_proofness},
      {"median_plus dominance", dominance},
      {"additive bounds", additive_bounds},
      {"plane geometry invariants", geometry},
      {"skewed family improvement", skewed_improvement},
      {"plane hardness constructions", plane_hardness},
      {"scope statement", not_reproducible},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s  %s (%.2f s): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
