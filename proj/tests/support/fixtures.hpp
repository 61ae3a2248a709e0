#pragma once

#include <cstdlib>
#include <vector>

#include "ucover/space.hpp"

namespace ucover::testing {

inline std::vector<std::vector<double>> cycle_distances(int n) {
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = std::abs(i - j);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a < n - a ? a : n - a;
    }
  return d;
}

inline std::vector<std::vector<double>> line_distances(int n) {
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::abs(i - j);
  return d;
}

/// Hexagon with radii (2, 1).
inline FilteredSpace hexagon() { return from_metric(cycle_distances(6), {2, 1}); }
/// Four points on a line with radii (1, 0.5).
inline FilteredSpace line4() { return from_metric(line_distances(4), {1, 0.5}); }
/// Triangle C3 with radius 1 (all pairs).
inline FilteredSpace triangle() { return from_metric(cycle_distances(3), {1}); }
/// Hexagon with radius 1 only.
inline FilteredSpace hexagon_r1() { return from_metric(cycle_distances(6), {1}); }
/// Hexagon with radii (3, 1, 0): used for the antipodal action suite.
inline FilteredSpace hexagon_ant() { return from_metric(cycle_distances(6), {3, 1, 0}); }

inline std::vector<int> mod3_map() { return {0, 1, 2, 0, 1, 2}; }

}  // namespace ucover::testing
