#pragma once

#include <cstdint>

#include "mep/landscape.hpp"

namespace mep {

struct TrainConfig {
  double learning_rate = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::size_t steps = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Heavy-ball SGD with decoupled weight decay:
///   theta <- theta - lr * wd * theta
///   v     <- momentum * v + force
///   theta <- theta + lr * v
/// where force is the descent direction (negative gradient for training).
struct SgdMomentum {
  double learning_rate;
  double momentum;
  double weight_decay;

  void step(ParamVector& theta, ParamVector& velocity, const ParamVector& force) const;
};

/// Runs cfg.steps of SgdMomentum from `init` and returns the iterate with the
/// lowest loss seen (init included). Throws Divergence with the step index
/// when the loss becomes non-finite.
ParamVector train_minimum(const Landscape& landscape, const ParamVector& init, const TrainConfig& cfg);

}  // namespace mep
