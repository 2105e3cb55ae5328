#include "mep/chain.hpp"

#include <algorithm>
#include <cmath>

#include "mep/error.hpp"

namespace mep {

Chain::Chain(std::vector<ParamVector> pivots) : pivots_(std::move(pivots)) {
  if (pivots_.size() < 2) throw Error(ErrorKind::InvalidArgument, "a chain needs at least two pivots");
  const auto d = pivots_.front().size();
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "pivots must have positive dimension");
  for (const auto& p : pivots_) {
    if (p.size() != d) throw Error(ErrorKind::DimensionMismatch, "all pivots must have the same dimension");
    if (!all_finite(p)) throw Error(ErrorKind::NonFinite, "pivot contains NaN or Inf");
  }
}

Chain Chain::straight(const ParamVector& start, const ParamVector& end, std::size_t interior) {
  if (start.size() != end.size()) throw Error(ErrorKind::DimensionMismatch, "endpoints differ in dimension");
  std::vector<ParamVector> pivots;
  pivots.reserve(interior + 2);
  pivots.push_back(start);
  const double segments = static_cast<double>(interior + 1);
  for (std::size_t i = 1; i <= interior; ++i) {
    const double t = static_cast<double>(i) / segments;
    pivots.push_back((1.0 - t) * start + t * end);
  }
  pivots.push_back(end);
  return Chain(std::move(pivots));
}

void Chain::set_interior(std::size_t i, ParamVector value) {
  if (i == 0 || i + 1 >= pivots_.size()) throw Error(ErrorKind::InvalidArgument, "endpoints are immutable");
  if (value.size() != pivots_.front().size()) throw Error(ErrorKind::DimensionMismatch, "pivot dimension mismatch");
  if (!all_finite(value)) throw Error(ErrorKind::NonFinite, "pivot contains NaN or Inf");
  pivots_[i] = std::move(value);
}

std::vector<double> arc_lengths(const Chain& chain) {
  std::vector<double> s(chain.size(), 0.0);
  for (std::size_t i = 1; i < chain.size(); ++i) s[i] = s[i - 1] + (chain[i] - chain[i - 1]).norm();
  return s;
}

double total_length(const Chain& chain) { return arc_lengths(chain).back(); }

Chain redistribute(const Chain& chain) {
  const auto s = arc_lengths(chain);
  const double total = s.back();
  if (total == 0.0) return chain;

  const std::size_t n = chain.size();
  std::vector<ParamVector> out;
  out.reserve(n);
  out.push_back(chain.front());
  std::size_t seg = 0;  // current input segment (seg, seg + 1)
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n - 1);
    while (seg + 2 < n && s[seg + 1] <= target) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double t = len > 0.0 ? std::clamp((target - s[seg]) / len, 0.0, 1.0) : 0.0;
    out.push_back((1.0 - t) * chain[seg] + t * chain[seg + 1]);
  }
  out.push_back(chain.back());
  return Chain(std::move(out));
}

ParamVector tangent(const Chain& chain, std::size_t i, const PivotLosses& losses) {
  if (i == 0 || i + 1 >= chain.size()) throw Error(ErrorKind::InvalidArgument, "tangent needs an interior pivot index");
  if (losses.size() != chain.size()) throw Error(ErrorKind::DimensionMismatch, "losses not aligned with pivots");
  ParamVector t = losses[i + 1] > losses[i - 1] ? ParamVector(chain[i + 1] - chain[i]) : ParamVector(chain[i] - chain[i - 1]);
  const double norm = t.norm();
  if (norm == 0.0) throw Error(ErrorKind::InvalidArgument, "pivot " + std::to_string(i) + " coincides with its neighbour");
  return t / norm;
}

}  // namespace mep
