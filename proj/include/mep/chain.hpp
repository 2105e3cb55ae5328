#pragma once

#include <cstddef>
#include <vector>

#include "mep/types.hpp"

namespace mep {

/// Discretised path p_0 .. p_{N+1}. The endpoints are fixed at construction;
/// only interior pivots can be replaced.
class Chain {
 public:
  /// Requires at least two pivots of equal, positive dimension, all finite.
  explicit Chain(std::vector<ParamVector> pivots);

  /// `interior` pivots equally spaced on the segment (start, end).
  static Chain straight(const ParamVector& start, const ParamVector& end, std::size_t interior);

  std::size_t size() const { return pivots_.size(); }
  std::size_t interior_count() const { return pivots_.size() - 2; }
  std::size_t dim() const { return static_cast<std::size_t>(pivots_.front().size()); }

  const std::vector<ParamVector>& pivots() const { return pivots_; }
  const ParamVector& operator[](std::size_t i) const { return pivots_[i]; }
  const ParamVector& front() const { return pivots_.front(); }
  const ParamVector& back() const { return pivots_.back(); }

  /// Replaces interior pivot i (1 <= i <= N).
  void set_interior(std::size_t i, ParamVector value);

 private:
  std::vector<ParamVector> pivots_;
};

/// Cumulative Euclidean arc length, s_0 = 0.
std::vector<double> arc_lengths(const Chain& chain);

double total_length(const Chain& chain);

/// Interior pivots moved to equal arc-length positions on the input polyline.
/// A zero-length chain is returned unchanged.
Chain redistribute(const Chain& chain);

/// Unit tangent at interior pivot i: towards p_{i+1} if L(p_{i+1}) > L(p_{i-1}),
/// otherwise from p_{i-1}. Ties take the backward difference.
ParamVector tangent(const Chain& chain, std::size_t i, const PivotLosses& losses);

}  // namespace mep
