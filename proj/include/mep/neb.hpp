#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mep/chain.hpp"
#include "mep/landscape.hpp"

namespace mep {

struct NebConfig {
  std::size_t steps = 1000;
  double learning_rate = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double spring_constant = 0.0;  // 0: string method
  std::size_t workers = 1;

  void validate() const;
};

/// One velocity per interior pivot. Empty means "start from rest".
struct OptimizerState {
  std::vector<ParamVector> velocity;

  void reset() { velocity.clear(); }
};

/// Per-iteration view handed to an observer after forces are computed and
/// before pivots move. Indices are interior pivot indices minus one.
struct NebIteration {
  std::size_t iteration;
  const Chain& chain;
  const PivotLosses& losses;
  const std::vector<ParamVector>& tangents;
  const std::vector<ParamVector>& loss_forces;
  const std::vector<ParamVector>& spring_forces;
};

using NebObserver = std::function<void(const NebIteration&)>;

struct NebResult {
  Chain chain;
  std::vector<double> max_interior_loss;  // one entry per iteration
};

/// Diagnostic elastic-band energy: sum of interior losses plus (k/2) |p_{i+1} - p_i|^2.
double elastic_band_energy(const Chain& chain, const PivotLosses& losses, double k);

/// -(g - (g . tau) tau). `tau` must have unit norm within 1e-9.
ParamVector loss_force_perp(const ParamVector& gradient, const ParamVector& tau);

/// -k (|p_i - p_{i-1}| - |p_{i+1} - p_i|) tau.
ParamVector spring_force_parallel(const Chain& chain, std::size_t i, double k, const ParamVector& tau);

/// String-method / NEB relaxation. Each iteration redistributes the pivots,
/// evaluates every interior pivot, and applies one SgdMomentum step along the
/// nudged force. Endpoints never move.
NebResult neb_relax(const Chain& chain, const Landscape& landscape, const NebConfig& cfg,
                    OptimizerState& state, const NebObserver& observer = {});

NebResult neb_relax(const Chain& chain, const Landscape& landscape, const NebConfig& cfg);

}  // namespace mep
