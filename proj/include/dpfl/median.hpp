#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace dpfl {

/// A value tagged with the id that breaks ties between equal values.
struct Ranked {
  double value = 0.0;
  int id = 0;

  friend bool operator==(const Ranked&, const Ranked&) = default;
};

/// Strict total order on (value, id).
inline bool operator<(const Ranked& a, const Ranked& b) {
  return a.value < b.value || (a.value == b.value && a.id < b.id);
}
inline bool operator<=(const Ranked& a, const Ranked& b) { return !(b < a); }

/// 1-indexed rank of the median item among n: floor((n+1)/2).
constexpr std::size_t median_rank_of(std::size_t n) { return (n + 1) / 2; }

/// The rank-floor((n+1)/2) element under the (value, id) order.
inline Ranked median_rank(std::span<const Ranked> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  std::vector<Ranked> v(values.begin(), values.end());
  const auto k = static_cast<std::ptrdiff_t>(median_rank_of(v.size()) - 1);
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[static_cast<std::size_t>(k)];
}

/// Median value only; ties between equal values cannot change it.
inline double median_value(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  const auto k = static_cast<std::ptrdiff_t>(median_rank_of(values.size()) - 1);
  std::nth_element(values.begin(), values.begin() + k, values.end());
  return values[static_cast<std::size_t>(k)];
}

}  // namespace dpfl
