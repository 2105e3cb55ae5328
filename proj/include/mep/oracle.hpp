#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mep/landscape.hpp"

namespace mep {

struct GridSpec {
  std::array<double, 2> x_range;
  std::array<double, 2> y_range;
  std::size_t resolution = 101;  // nodes per axis

  void validate() const;
  double x(std::size_t i) const;
  double y(std::size_t j) const;
};

struct GridNode {
  std::size_t i;
  std::size_t j;
};

struct GridMepResult {
  double saddle_value;
  std::vector<GridNode> path;
  std::vector<Eigen::Vector2d> points;
};

/// Exact bottleneck path on the 8-connected grid: minimises the maximum node
/// loss between the nodes nearest to `start` and `end`.
GridMepResult grid_mep(const Landscape& landscape, const GridSpec& spec, const ParamVector& start,
                       const ParamVector& end);

}  // namespace mep
