#include "mep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "mep/error.hpp"

namespace mep {

void GridSpec::validate() const {
  if (!(x_range[1] > x_range[0]) || !(y_range[1] > y_range[0])) {
    throw Error(ErrorKind::InvalidArgument, "grid ranges must be non-degenerate");
  }
  if (resolution < 3) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 3");
}

double GridSpec::x(std::size_t i) const {
  return x_range[0] + (x_range[1] - x_range[0]) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

double GridSpec::y(std::size_t j) const {
  return y_range[0] + (y_range[1] - y_range[0]) * static_cast<double>(j) / static_cast<double>(resolution - 1);
}

namespace {

std::size_t snap(double value, const std::array<double, 2>& range, std::size_t resolution, const char* axis) {
  if (!(value >= range[0] && value <= range[1])) {
    throw Error(ErrorKind::InvalidArgument, std::string("point outside the grid along ") + axis);
  }
  const double t = (value - range[0]) / (range[1] - range[0]) * static_cast<double>(resolution - 1);
  return std::min(resolution - 1, static_cast<std::size_t>(std::llround(t)));
}

}  // namespace

GridMepResult grid_mep(const Landscape& landscape, const GridSpec& spec, const ParamVector& start, const ParamVector& end) {
  spec.validate();
  if (landscape.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "grid oracle needs a 2D landscape");
  if (start.size() != 2 || end.size() != 2) throw Error(ErrorKind::DimensionMismatch, "grid oracle endpoints must be 2D");

  const std::size_t r = spec.resolution;
  auto index = [r](std::size_t i, std::size_t j) { return i * r + j; };
  const std::size_t source = index(snap(start[0], spec.x_range, r, "x"), snap(start[1], spec.y_range, r, "y"));
  const std::size_t target = index(snap(end[0], spec.x_range, r, "x"), snap(end[1], spec.y_range, r, "y"));

  std::vector<double> value(r * r);
  ParamVector p(2);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      p << spec.x(i), spec.y(j);
      value[index(i, j)] = landscape.loss(p);
    }
  }

  // Best-first search where a path's cost is its largest node value.
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> cost(r * r, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(r * r, kNone);
  std::vector<bool> done(r * r, false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  cost[source] = value[source];
  queue.push({cost[source], source});
  while (!queue.empty()) {
    const auto [c, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == target) break;
    const auto ui = static_cast<long>(u / r), uj = static_cast<long>(u % r);
    for (long di = -1; di <= 1; ++di) {
      for (long dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const long vi = ui + di, vj = uj + dj;
        if (vi < 0 || vj < 0 || vi >= static_cast<long>(r) || vj >= static_cast<long>(r)) continue;
        const auto v = index(static_cast<std::size_t>(vi), static_cast<std::size_t>(vj));
        const double through = std::max(c, value[v]);
        if (!done[v] && through < cost[v]) {
          cost[v] = through;
          prev[v] = u;
          queue.push({through, v});
        }
      }
    }
  }

  GridMepResult result;
  result.saddle_value = cost[target];
  for (std::size_t u = target; u != kNone; u = prev[u]) {
    result.path.push_back({u / r, u % r});
    if (u == source) break;
  }
  std::reverse(result.path.begin(), result.path.end());
  for (const auto& node : result.path) result.points.emplace_back(spec.x(node.i), spec.y(node.j));
  return result;
}

}  // namespace mep
