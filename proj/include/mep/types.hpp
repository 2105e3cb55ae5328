#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mep {

/// A point in parameter space.
using ParamVector = Eigen::VectorXd;

/// Loss and exact gradient at one point.
struct Evaluation {
  double loss = 0.0;
  ParamVector gradient;
};

/// One loss per pivot, aligned with Chain::pivots().
using PivotLosses = std::vector<double>;

bool all_finite(const ParamVector& v);

}  // namespace mep
