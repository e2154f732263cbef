#pragma once

// Ground-truth optimisers for OPT(I) and an optimal location.
//
// The 1D and 2D-L1 oracles are exact: the social cost is piecewise linear and
// its minimum sits on a finite candidate set (breakpoints on the line, vertices
// of the line arrangement in the plane). Under L2 the cost has ring-shaped
// zero sets and no finite candidate set, so that oracle is a search and only
// ever reports an upper bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpfl/core.hpp"
#include "dpfl/median.hpp"

namespace dpfl {

enum class OracleMethod { breakpoints_1d, arrangement_2d_l1, grid_refine_2d_l2, dp_k_median, bruteforce_k, grid };

inline const char* to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::breakpoints_1d: return "breakpoints_1d";
    case OracleMethod::arrangement_2d_l1: return "arrangement_2d_l1";
    case OracleMethod::grid_refine_2d_l2: return "grid_refine_2d_l2";
    case OracleMethod::dp_k_median: return "dp_k_median";
    case OracleMethod::bruteforce_k: return "bruteforce_k";
    case OracleMethod::grid: return "grid";
  }
  return "?";
}

struct OracleResult {
  Placement placement;
  double opt_value = 0.0;
  OracleMethod method = OracleMethod::breakpoints_1d;
  bool guaranteed_exact = true;

  const Point& location() const { return placement.facilities.front(); }
};

struct OracleLimits {
  std::size_t max_agents_2d_l1 = 64;
  std::uint64_t max_subsets = 2'000'000;
  std::uint64_t max_grid_cells = 100'000'000;
};

namespace detail {

inline OracleResult make_result(std::vector<Point> facilities, double value, OracleMethod method,
                                bool exact) {
  OracleResult r;
  r.placement.facilities = std::move(facilities);
  r.placement.social_cost = value;
  r.opt_value = value;
  r.method = method;
  r.guaranteed_exact = exact;
  return r;
}

/// Sorted, deduplicated breakpoints x_i - b_i, x_i, x_i + b_i.
inline std::vector<double> breakpoints_1d(const Instance& inst) {
  std::vector<double> c;
  c.reserve(3 * inst.size());
  for (const Agent& a : inst.agents()) {
    c.push_back(a.location.x - a.b);
    c.push_back(a.location.x);
    c.push_back(a.location.x + a.b);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

inline void require_dim(const Instance& inst, int dim, const char* what) {
  if (inst.dim() != dim)
    throw std::invalid_argument(std::string(what) + " requires a " + std::to_string(dim) + "D instance");
}

}  // namespace detail

/// Exact 1D optimum by breakpoint enumeration; smallest coordinate among ties.
inline OracleResult opt_1d(const Instance& inst) {
  detail::require_dim(inst, 1, "opt_1d");
  double best_y = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double y : detail::breakpoints_1d(inst)) {
    const double sc = social_cost(y, inst);
    if (sc < best) {
      best = sc;
      best_y = y;
    }
  }
  return detail::make_result({Point{best_y, 0.0}}, best, OracleMethod::breakpoints_1d, true);
}

/// Every vertex of the arrangement formed by the lines where some agent's L1
/// cost changes slope: x = x_i, y = y_i and the four diamond edge lines
/// x +- y = (x_i +- y_i) +- b_i. Duplicates within 1e-12 are merged.
inline std::vector<Point> l1_arrangement_vertices(const Instance& inst) {
  std::vector<double> vert, horz, diag_sum, diag_diff;
  for (const Agent& a : inst.agents()) {
    const double x = a.location.x, y = a.location.y;
    vert.push_back(x);
    horz.push_back(y);
    diag_sum.push_back(x + y - a.b);
    diag_sum.push_back(x + y + a.b);
    diag_diff.push_back(x - y - a.b);
    diag_diff.push_back(x - y + a.b);
  }
  for (auto* v : {&vert, &horz, &diag_sum, &diag_diff}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  std::vector<Point> pts;
  pts.reserve(vert.size() * horz.size() + 2 * (vert.size() + horz.size()) * diag_sum.size() +
              diag_sum.size() * diag_diff.size());
  for (double cx : vert) {
    for (double cy : horz) pts.push_back({cx, cy});
    for (double s : diag_sum) pts.push_back({cx, s - cx});
    for (double d : diag_diff) pts.push_back({cx, cx - d});
  }
  for (double cy : horz) {
    for (double s : diag_sum) pts.push_back({s - cy, cy});
    for (double d : diag_diff) pts.push_back({d + cy, cy});
  }
  for (double s : diag_sum)
    for (double d : diag_diff) pts.push_back({(s + d) / 2.0, (s - d) / 2.0});

  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const Point& p : pts) {
    if (!out.empty() && std::abs(out.back().x - p.x) <= 1e-12 && std::abs(out.back().y - p.y) <= 1e-12)
      continue;
    out.push_back(p);
  }
  return out;
}

/// Exact 2D-L1 optimum over the arrangement vertices.
inline OracleResult opt_2d_l1(const Instance& inst, const OracleLimits& limits = {}) {
  detail::require_dim(inst, 2, "opt_2d_l1");
  if (inst.norm() != Norm::L1) throw std::invalid_argument("opt_2d_l1 requires the L1 norm");
  if (inst.size() > limits.max_agents_2d_l1)
    throw std::invalid_argument("instance too large for exact 2D oracle");
  Point best_p;
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : l1_arrangement_vertices(inst)) {
    const double sc = social_cost(p, inst);
    if (sc < best) {
      best = sc;
      best_p = p;
    }
  }
  return detail::make_result({best_p}, best, OracleMethod::arrangement_2d_l1, true);
}

/// Approximate 2D-L2 optimum: coarse grid over the agent box grown by B, then
/// compass search from the best grid cells, agent locations and points on
/// each agent's zero-cost circle. The reported value is an upper bound on OPT.
inline OracleResult opt_2d_l2(const Instance& inst, double tol) {
  detail::require_dim(inst, 2, "opt_2d_l2");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const Box box = bounding_box(inst, inst.bound());
  const double extent = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  const double pitch = std::max(10.0 * tol, extent / 160.0);
  const auto nx = static_cast<std::size_t>(std::ceil((box.xmax - box.xmin) / pitch)) + 1;
  const auto ny = static_cast<std::size_t>(std::ceil((box.ymax - box.ymin) / pitch)) + 1;

  struct Cand {
    double sc;
    Point p;
  };
  std::vector<Cand> cands;
  cands.reserve(nx * ny + 9 * inst.size());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const Point p{box.xmin + pitch * static_cast<double>(i), box.ymin + pitch * static_cast<double>(j)};
      cands.push_back({social_cost(p, inst), p});
    }
  for (const Agent& a : inst.agents()) {
    cands.push_back({social_cost(a.location, inst), a.location});
    for (int k = 0; k < 8; ++k) {
      const double t = k * M_PI / 4.0;
      const Point p{a.location.x + a.b * std::cos(t), a.location.y + a.b * std::sin(t)};
      cands.push_back({social_cost(p, inst), p});
    }
  }
  const std::size_t starts = std::min<std::size_t>(24, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(starts), cands.end(),
                    [](const Cand& a, const Cand& b) { return a.sc < b.sc || (a.sc == b.sc && lex_less(a.p, b.p)); });

  // Sixteen compass directions, plus projections onto nearby zero-cost
  // circles so the search can slide along a ring where the cost has a kink.
  std::vector<Point> dirs;
  for (int k = 0; k < 16; ++k) dirs.push_back({std::cos(k * M_PI / 8.0), std::sin(k * M_PI / 8.0)});
  const double stop = tol * 1e-3;
  Cand best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t s = 0; s < starts; ++s) {
    Cand cur = cands[s];
    double step = pitch;
    while (step >= stop) {
      bool moved = false;
      for (const Point& d : dirs) {
        const Point q{cur.p.x + step * d.x, cur.p.y + step * d.y};
        const double sc = social_cost(q, inst);
        if (sc < cur.sc) {
          cur = {sc, q};
          moved = true;
        }
      }
      for (const Agent& a : inst.agents()) {
        const double r = distance(cur.p, a.location, Norm::L2);
        if (r == 0.0 || std::abs(r - a.b) > step) continue;
        const Point on{a.location.x + (cur.p.x - a.location.x) * a.b / r,
                       a.location.y + (cur.p.y - a.location.y) * a.b / r};
        const Point tangent{-(cur.p.y - a.location.y) / r, (cur.p.x - a.location.x) / r};
        for (double sgn : {0.0, 1.0, -1.0}) {
          const Point q{on.x + sgn * step * tangent.x, on.y + sgn * step * tangent.y};
          const double sc = social_cost(q, inst);
          if (sc < cur.sc) {
            cur = {sc, q};
            moved = true;
          }
        }
      }
      if (!moved) step /= 2.0;
    }
    if (cur.sc < best.sc || (cur.sc == best.sc && lex_less(cur.p, best.p))) best = cur;
  }
  return detail::make_result({best.p}, best.sc, OracleMethod::grid_refine_2d_l2, false);
}

/// Optimal k-median of points on a line (every b taken as 0). Facilities sit
/// on input points; among optimal solutions the lexicographically smallest
/// sorted facility vector is returned.
inline Placement opt_k_1d_zero_b(std::vector<double> xs, std::size_t k) {
  const std::size_t n = xs.size();
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > n) throw std::invalid_argument("k exceeds the number of agents");
  std::sort(xs.begin(), xs.end());

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + xs[i];
  // Block [i, j] served by its lower median xs[(i + j) / 2].
  auto block_cost = [&](std::size_t i, std::size_t j) {
    const std::size_t m = (i + j) / 2;
    const double left = xs[m] * static_cast<double>(m - i + 1) - (prefix[m + 1] - prefix[i]);
    const double right = (prefix[j + 1] - prefix[m + 1]) - xs[m] * static_cast<double>(j - m);
    return left + right;
  };

  // tail[c][i]: best cost of xs[i..n-1] using exactly c blocks.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> tail(k + 1, std::vector<double>(n + 1, inf));
  tail[0][n] = 0.0;
  for (std::size_t c = 1; c <= k; ++c)
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = i; j + 1 <= n - (c - 1); ++j) {
        if (tail[c - 1][j + 1] == inf) continue;
        tail[c][i] = std::min(tail[c][i], block_cost(i, j) + tail[c - 1][j + 1]);
      }

  Placement out;
  std::size_t i = 0;
  for (std::size_t c = k; c >= 1; --c) {
    const double target = tail[c][i];
    const double slack = 1e-9 * (1.0 + std::abs(target));
    for (std::size_t j = i; j + 1 <= n - (c - 1); ++j) {
      if (tail[c - 1][j + 1] == inf) continue;
      if (block_cost(i, j) + tail[c - 1][j + 1] <= target + slack) {
        out.facilities.push_back({xs[(i + j) / 2], 0.0});
        i = j + 1;
        break;
      }
    }
  }
  out.social_cost = tail[k][0];
  return out;
}

/// Exact k-facility optimum on the line with general b, by enumerating
/// k-subsets of the distinct breakpoints.
inline OracleResult opt_k_1d_bruteforce(const Instance& inst, std::size_t k, const OracleLimits& limits = {}) {
  detail::require_dim(inst, 1, "opt_k_1d_bruteforce");
  const std::vector<double> cand = detail::breakpoints_1d(inst);
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > cand.size()) throw std::invalid_argument("k exceeds the number of candidate locations");
  // C(|cand|, k) with early exit on the cap.
  double subsets = 1.0;
  for (std::size_t i = 0; i < k; ++i) subsets = subsets * static_cast<double>(cand.size() - i) / static_cast<double>(i + 1);
  if (subsets > static_cast<double>(limits.max_subsets))
    throw std::invalid_argument("subset count exceeds the brute-force cap");

  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<Point> fac(k), best_fac;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t i = 0; i < k; ++i) fac[i] = {cand[idx[i]], 0.0};
    const double sc = social_cost(std::span<const Point>(fac), inst);
    if (sc < best) {
      best = sc;
      best_fac = fac;
    }
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == cand.size() - k + (pos - 1)) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return detail::make_result(std::move(best_fac), best, OracleMethod::bruteforce_k, true);
}

/// Minimum of the social cost over a uniform grid covering the agent box grown
/// by B. Independent cross-check; not exact.
inline OracleResult grid_oracle(const Instance& inst, double resolution, const OracleLimits& limits = {}) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  const Box box = bounding_box(inst, inst.bound());
  const double nxd = std::floor((box.xmax - box.xmin) / resolution) + 1.0;
  const double nyd = inst.dim() == 2 ? std::floor((box.ymax - box.ymin) / resolution) + 1.0 : 1.0;
  if (nxd * nyd > static_cast<double>(limits.max_grid_cells))
    throw std::invalid_argument("grid has too many cells");
  const auto nx = static_cast<std::size_t>(nxd);
  const auto ny = static_cast<std::size_t>(nyd);
  Point best_p;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = box.xmin + resolution * static_cast<double>(i);
    for (std::size_t j = 0; j < ny; ++j) {
      const Point p{x, inst.dim() == 2 ? box.ymin + resolution * static_cast<double>(j) : 0.0};
      const double sc = social_cost(p, inst);
      if (sc < best) {
        best = sc;
        best_p = p;
      }
    }
  }
  return detail::make_result({best_p}, best, OracleMethod::grid, false);
}

}  // namespace dpfl
