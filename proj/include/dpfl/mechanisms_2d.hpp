#pragma once

// Planar mechanisms: coordinate-wise median, geometric median and 2D
// Median-Plus.
//
// 2D Median-Plus works on two families of chains. Each agent contributes a
// vertical chain v_i(y), the half of its L1 diamond that faces the median
// x-coordinate extended by vertical rays, and a horizontal chain h_i(x)
// defined the same way with the axes swapped. The pointwise medians of the two
// families are the vertical and horizontal split lines V(y) and H(x). Their
// intersection is a single point or a single 45-degree segment; on a segment
// the mechanism picks the cheapest point, then the one closest to the
// coordinate median, then the lexicographically smallest.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpfl/core.hpp"
#include "dpfl/median.hpp"
#include "dpfl/polyline.hpp"

namespace dpfl {

namespace detail {
inline void require_plane(const Instance& inst, const char* what) {
  if (inst.dim() != 2) throw std::invalid_argument(std::string(what) + " requires a 2D instance");
}
}  // namespace detail

/// Median keys of the x- and y-coordinates, each under its own (value, id) order.
struct MedianKeys {
  Ranked x;
  Ranked y;

  Point point() const { return {x.value, y.value}; }
};

inline MedianKeys coordinate_median_keys(const Instance& inst) {
  std::vector<Ranked> xs, ys;
  xs.reserve(inst.size());
  ys.reserve(inst.size());
  for (const Agent& a : inst.agents()) {
    xs.push_back({a.location.x, a.id});
    ys.push_back({a.location.y, a.id});
  }
  return {median_rank(xs), median_rank(ys)};
}

inline Point mech_coord_median(const Instance& inst) {
  detail::require_plane(inst, "mech_coord_median");
  return coordinate_median_keys(inst).point();
}

class GeometricMedianError : public std::runtime_error {
 public:
  GeometricMedianError(const std::string& what, Point best) : std::runtime_error(what), best_(best) {}
  Point best_iterate() const { return best_; }

 private:
  Point best_;
};

/// Weiszfeld iteration with the Vardi-Zhang correction at agent locations.
/// Preferred distances are ignored.
inline Point mech_geometric_median(const Instance& inst, double tol, int max_iterations = 1000000) {
  detail::require_plane(inst, "mech_geometric_median");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto& agents = inst.agents();

  // An agent location is optimal when the unit pulls of the others sum to at
  // most its multiplicity. Checked up front because Weiszfeld converges only
  // sublinearly toward such a point.
  for (const Agent& c : agents) {
    double rx = 0.0, ry = 0.0, weight = 0.0;
    for (const Agent& a : agents) {
      const double d = distance(c.location, a.location, Norm::L2);
      if (d == 0.0) {
        weight += 1.0;
        continue;
      }
      rx += (a.location.x - c.location.x) / d;
      ry += (a.location.y - c.location.y) / d;
    }
    if (std::hypot(rx, ry) <= weight) return c.location;
  }

  Point y{0.0, 0.0};
  for (const Agent& a : agents) {
    y.x += a.location.x;
    y.y += a.location.y;
  }
  y.x /= static_cast<double>(agents.size());
  y.y /= static_cast<double>(agents.size());

  auto total = [&](const Point& p) {
    double s = 0.0;
    for (const Agent& a : agents) s += distance(p, a.location, Norm::L2);
    return s;
  };
  Point best = y;
  double best_value = total(y);

  for (int it = 0; it < max_iterations; ++it) {
    double wsum = 0.0, tx = 0.0, ty = 0.0, rx = 0.0, ry = 0.0;
    int coincident = 0;
    for (const Agent& a : agents) {
      const double d = distance(y, a.location, Norm::L2);
      if (d <= tol * 1e-3) {
        ++coincident;
        continue;
      }
      wsum += 1.0 / d;
      tx += a.location.x / d;
      ty += a.location.y / d;
      rx += (a.location.x - y.x) / d;
      ry += (a.location.y - y.y) / d;
    }
    if (wsum == 0.0) return y;  // every agent sits at y
    const Point t{tx / wsum, ty / wsum};
    Point next = t;
    if (coincident > 0) {
      const double r = std::hypot(rx, ry);
      if (r <= coincident) return y;  // subgradient contains zero
      const double eta = coincident / r;
      next = {(1.0 - eta) * t.x + eta * y.x, (1.0 - eta) * t.y + eta * y.y};
    }
    const double step = distance(next, y, Norm::L2);
    y = next;
    const double value = total(y);
    if (value < best_value) {
      best_value = value;
      best = y;
    }
    if (step < tol) return y;
  }
  throw GeometricMedianError("geometric median did not converge", best);
}

/// Agents' bounding box grown by 2B; every chain is clipped to it.
inline Box working_box(const Instance& inst) { return bounding_box(inst, 2.0 * inst.bound()); }

namespace detail {

inline Polyline half_diamond(double center_t, double center_v, double b, double sign, double t_lo, double t_hi,
                             Orientation o) {
  std::vector<double> ts{t_lo, t_hi};
  for (double t : {center_t - b, center_t, center_t + b})
    if (t > t_lo && t < t_hi) ts.push_back(t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<Knot> knots;
  knots.reserve(ts.size());
  for (double t : ts) knots.push_back({t, center_v + sign * std::max(0.0, b - std::abs(t - center_t))});
  return Polyline(o, simplify_knots(knots, 1e-12));
}

}  // namespace detail

/// Vertical chain x = v_i(y) on [y_lo, y_hi]: the right half of the diamond
/// when (x_i, id) <= med_x_key, the left half otherwise.
inline Polyline v_ehd(const Agent& a, const Ranked& med_x_key, double y_lo, double y_hi) {
  const double sign = Ranked{a.location.x, a.id} <= med_x_key ? 1.0 : -1.0;
  return detail::half_diamond(a.location.y, a.location.x, a.b, sign, y_lo, y_hi, Orientation::x_of_y);
}

/// Horizontal chain y = h_i(x) on [x_lo, x_hi]: upper half when
/// (y_i, id) <= med_y_key, lower half otherwise.
inline Polyline h_ehd(const Agent& a, const Ranked& med_y_key, double x_lo, double x_hi) {
  const double sign = Ranked{a.location.y, a.id} <= med_y_key ? 1.0 : -1.0;
  return detail::half_diamond(a.location.x, a.location.y, a.b, sign, x_lo, x_hi, Orientation::y_of_x);
}

/// Pointwise rank-floor((n+1)/2) median of chains sharing an orientation and
/// domain. Exact: the median is evaluated at every chain knot and at every
/// pairwise crossing, and it is linear between consecutive events.
inline Polyline split_line(const std::vector<Polyline>& chains) {
  if (chains.empty()) throw std::invalid_argument("split line of no chains");
  const Orientation o = chains.front().orientation();
  const double lo = chains.front().t_min(), hi = chains.front().t_max();
  for (const Polyline& c : chains) {
    if (c.orientation() != o) throw std::invalid_argument("chains have mixed orientations");
    if (c.t_min() != lo || c.t_max() != hi) throw std::invalid_argument("chains have different domains");
  }
  const double eps = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));

  std::vector<double> knots_t;
  for (const Polyline& c : chains)
    for (const Knot& k : c.knots()) knots_t.push_back(k.t);
  std::sort(knots_t.begin(), knots_t.end());
  knots_t.erase(std::unique(knots_t.begin(), knots_t.end()), knots_t.end());

  std::vector<double> events = knots_t;
  const std::size_t n = chains.size();
  std::vector<double> va(n), slope(n);
  for (std::size_t k = 0; k + 1 < knots_t.size(); ++k) {
    const double a = knots_t[k], b = knots_t[k + 1];
    for (std::size_t i = 0; i < n; ++i) {
      va[i] = chains[i](a);
      slope[i] = std::round((chains[i](b) - va[i]) / (b - a));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (slope[i] == slope[j]) continue;
        const double t = a + (va[j] - va[i]) / (slope[i] - slope[j]);
        if (t > a + eps && t < b - eps) events.push_back(t);
      }
  }
  std::sort(events.begin(), events.end());
  std::vector<double> uniq;
  for (double t : events)
    if (uniq.empty() || t - uniq.back() > eps) uniq.push_back(t);
  if (uniq.back() != hi) uniq.back() = hi;

  std::vector<double> vals(n);
  std::vector<Knot> out;
  out.reserve(uniq.size());
  const std::size_t k_rank = median_rank_of(n) - 1;
  for (double t : uniq) {
    for (std::size_t i = 0; i < n; ++i) vals[i] = chains[i](t);
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(k_rank), vals.end());
    out.push_back({t, vals[k_rank]});
  }
  return Polyline(o, simplify_knots(out, 1e-9));
}

struct SplitIntersection {
  enum class Kind { point, segment };
  Kind kind = Kind::point;
  Point a;
  Point b;               ///< equals a for a point
  double slope = 0.0;    ///< +1 or -1 for a segment
};

/// Intersection of a vertical split line x = V(y) with a horizontal one y = H(x).
/// Found as the zero set of g(y) = H(V(y)) - y, which is piecewise linear with
/// breakpoints at V's knots and where V(y) hits one of H's knots.
inline SplitIntersection split_intersection(const Polyline& V, const Polyline& H, double snap = 1e-9) {
  if (V.orientation() != Orientation::x_of_y || H.orientation() != Orientation::y_of_x)
    throw std::invalid_argument("expected a vertical and a horizontal split line");
  const double scale = 1.0 + std::max({std::abs(V.t_min()), std::abs(V.t_max()), std::abs(H.t_min()), std::abs(H.t_max())});
  const double eps = 1e-12 * scale;

  std::vector<double> ev;
  for (const Knot& k : V.knots()) ev.push_back(k.t);
  const auto& vk = V.knots();
  for (std::size_t s = 0; s < V.segments(); ++s) {
    const double sl = V.slope(s);
    if (sl == 0.0) continue;
    for (const Knot& h : H.knots()) {
      const double y = vk[s].t + (h.t - vk[s].v) / sl;
      if (y > vk[s].t && y < vk[s + 1].t) ev.push_back(y);
    }
  }
  std::sort(ev.begin(), ev.end());
  std::vector<double> ys;
  for (double y : ev)
    if (ys.empty() || y - ys.back() > eps) ys.push_back(y);

  std::vector<double> g(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    g[j] = H(V(ys[j])) - ys[j];
    if (std::abs(g[j]) <= snap) g[j] = 0.0;
  }

  struct Span {
    double lo, hi;
  };
  std::vector<Span> zeros;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (g[j] == 0.0) zeros.push_back({ys[j], ys[j]});
    if (j + 1 == ys.size()) break;
    if (g[j] == 0.0 && g[j + 1] == 0.0) {
      zeros.push_back({ys[j], ys[j + 1]});
    } else if ((g[j] < 0.0 && g[j + 1] > 0.0) || (g[j] > 0.0 && g[j + 1] < 0.0)) {
      const double y = ys[j] + g[j] / (g[j] - g[j + 1]) * (ys[j + 1] - ys[j]);
      zeros.push_back({y, y});
    }
  }
  if (zeros.empty()) throw std::runtime_error("split lines do not meet in working domain");
  std::sort(zeros.begin(), zeros.end(), [](const Span& l, const Span& r) { return l.lo < r.lo; });
  std::vector<Span> comps{zeros.front()};
  for (std::size_t i = 1; i < zeros.size(); ++i) {
    if (zeros[i].lo <= comps.back().hi + snap)
      comps.back().hi = std::max(comps.back().hi, zeros[i].hi);
    else
      comps.push_back(zeros[i]);
  }
  if (comps.size() != 1)
    throw std::logic_error("split line intersection has " + std::to_string(comps.size()) + " components");

  SplitIntersection out;
  const Span c = comps.front();
  out.a = {V(c.lo), c.lo};
  if (c.hi - c.lo <= snap) {
    out.a.y = H(out.a.x);
    out.b = out.a;
    return out;
  }
  out.kind = SplitIntersection::Kind::segment;
  out.b = {V(c.hi), c.hi};
  // V must be a single +-1 piece over the whole segment.
  double sl = 0.0;
  for (std::size_t s = 0; s < V.segments(); ++s) {
    if (vk[s + 1].t <= c.lo + snap || vk[s].t >= c.hi - snap) continue;
    if (V.slope(s) == 0.0 || (sl != 0.0 && V.slope(s) != sl))
      throw std::logic_error("split line intersection is not a 45-degree segment");
    sl = V.slope(s);
  }
  out.slope = sl;
  if (lex_less(out.b, out.a)) std::swap(out.a, out.b);
  return out;
}

/// Everything 2D Median-Plus computes on the way to its output.
struct MedianPlus2d {
  MedianKeys med;
  Box box;
  Polyline V;
  Polyline H;
  SplitIntersection meet;
  Point output;
};

namespace detail {

/// Cheapest point on a 45-degree segment; ties go to the point nearest `med`
/// in L2, then to the lexicographically smallest.
inline Point best_on_segment(const SplitIntersection& seg, const Instance& inst, const Point& med) {
  const Point a = seg.a;
  const double s = seg.slope;  // dx/dy along the segment
  const double y_lo = std::min(seg.a.y, seg.b.y), y_hi = std::max(seg.a.y, seg.b.y);
  auto at = [&](double y) { return Point{a.x + s * (y - a.y), y}; };

  std::vector<double> c{y_lo, y_hi};
  auto add = [&](double y) {
    if (y > y_lo && y < y_hi) c.push_back(y);
  };
  for (const Agent& ag : inst.agents()) {
    add(a.y + (ag.location.x - a.x) / s);
    add(ag.location.y);
  }
  std::sort(c.begin(), c.end());
  // On each piece every agent's L1 distance is linear; add where it equals b.
  const std::size_t base = c.size();
  for (std::size_t k = 0; k + 1 < base; ++k) {
    const double y0 = c[k], y1 = c[k + 1];
    for (const Agent& ag : inst.agents()) {
      const double d0 = distance(at(y0), ag.location, Norm::L1) - ag.b;
      const double d1 = distance(at(y1), ag.location, Norm::L1) - ag.b;
      if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) c.push_back(y0 + d0 / (d0 - d1) * (y1 - y0));
    }
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());

  std::vector<double> sc(c.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.size(); ++k) {
    sc[k] = social_cost(at(c[k]), inst);
    best = std::min(best, sc[k]);
  }
  const double tie = 1e-12 * (1.0 + std::abs(best));
  // On a 45-degree line, L2 distance to med is monotone in |y - y_star|, where
  // y_star is the parameter of med's orthogonal projection. Comparing that
  // linear quantity avoids the second-order flatness of the distance itself.
  const double y_star = a.y + (med.y - a.y - s * (a.x - med.x)) / 2.0;
  std::vector<double> cands;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (sc[k] > best + tie) continue;
    cands.push_back(c[k]);
    if (k + 1 < c.size() && sc[k + 1] <= best + tie) {
      // Flat minimum on [c_k, c_k+1]: the closest point to med may be interior.
      const double y = std::clamp(y_star, c[k], c[k + 1]);
      if (social_cost(at(y), inst) <= best + tie) cands.push_back(y);
    }
  }
  double out_y = cands.front();
  for (double y : cands) {
    const double d = std::abs(y - y_star), out_d = std::abs(out_y - y_star);
    if (d < out_d || (d == out_d && lex_less(at(y), at(out_y)))) out_y = y;
  }
  return at(out_y);
}

}  // namespace detail

inline MedianPlus2d median_plus_2d_details(const Instance& inst) {
  detail::require_plane(inst, "mech_2d_median_plus");
  if (inst.norm() != Norm::L1) throw std::invalid_argument("mech_2d_median_plus requires the L1 norm");
  MedianPlus2d r;
  r.med = coordinate_median_keys(inst);
  r.box = working_box(inst);
  std::vector<Polyline> vs, hs;
  vs.reserve(inst.size());
  hs.reserve(inst.size());
  for (const Agent& a : inst.agents()) {
    vs.push_back(v_ehd(a, r.med.x, r.box.ymin, r.box.ymax));
    hs.push_back(h_ehd(a, r.med.y, r.box.xmin, r.box.xmax));
  }
  r.V = split_line(vs);
  r.H = split_line(hs);
  r.meet = split_intersection(r.V, r.H);
  r.output = r.meet.kind == SplitIntersection::Kind::point ? r.meet.a
                                                           : detail::best_on_segment(r.meet, inst, r.med.point());
  return r;
}

inline Point mech_2d_median_plus(const Instance& inst) { return median_plus_2d_details(inst).output; }

/// Points visited by alternately snapping x to V(y) and y to H(x), starting
/// from `start`. The first element is `start`. Cost along this path can rise.
inline std::vector<Point> snapping_moves(const Polyline& V, const Polyline& H, Point start, int moves) {
  std::vector<Point> path{start};
  Point p = start;
  for (int k = 0; k < moves; ++k) {
    if (k % 2 == 0)
      p.x = V(p.y);
    else
      p.y = H(p.x);
    path.push_back(p);
  }
  return path;
}

/// Monotone walk from `start` to `target` by alternating horizontal and
/// vertical moves. Every move heads toward `target`, never passes its
/// coordinate, and stops no later than the split line it approaches. The
/// walk ends with a straight move onto `target` once no axis move is left.
inline std::vector<Point> alternating_moves(const Polyline& V, const Polyline& H, Point start, Point target,
                                            int max_moves = 1000) {
  auto step = [](double from, double want, double goal) {
    const double dir = goal > from ? 1.0 : goal < from ? -1.0 : 0.0;
    if (dir == 0.0) return from;
    return from + dir * std::clamp(dir * (want - from), 0.0, dir * (goal - from));
  };
  std::vector<Point> path{start};
  Point p = start;
  int idle = 0;
  for (int k = 0; k < max_moves && idle < 2; ++k) {
    const Point q = k % 2 == 0 ? Point{step(p.x, V(p.y), target.x), p.y} : Point{p.x, step(p.y, H(p.x), target.y)};
    if (q == p) {
      ++idle;
      continue;
    }
    idle = 0;
    p = q;
    path.push_back(p);
  }
  if (!(p == target)) path.push_back(target);
  return path;
}

}  // namespace dpfl
