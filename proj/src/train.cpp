#include "mep/train.hpp"

#include <cmath>

#include "mep/error.hpp"

namespace mep {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw Error(ErrorKind::InvalidArgument, "momentum must be in [0, 1)");
  if (!(weight_decay >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weight_decay must be >= 0");
}

void SgdMomentum::step(ParamVector& theta, ParamVector& velocity, const ParamVector& force) const {
  if (weight_decay != 0.0) theta -= (learning_rate * weight_decay) * theta;
  velocity = momentum * velocity + force;
  theta += learning_rate * velocity;
}

ParamVector train_minimum(const Landscape& landscape, const ParamVector& init, const TrainConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(init.size()) != landscape.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "initial point does not match the landscape dimension");
  }
  if (cfg.steps == 0) return init;

  const SgdMomentum opt{cfg.learning_rate, cfg.momentum, cfg.weight_decay};
  ParamVector theta = init;
  ParamVector velocity = ParamVector::Zero(init.size());
  ParamVector best = init;
  double best_loss = landscape.loss(init);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const Evaluation e = landscape.evaluate(theta);
    if (!std::isfinite(e.loss) || !all_finite(e.gradient)) throw Error(ErrorKind::Divergence, "loss became non-finite", step);
    if (e.loss < best_loss) {
      best_loss = e.loss;
      best = theta;
    }
    opt.step(theta, velocity, -e.gradient);
    if (!all_finite(theta)) throw Error(ErrorKind::Divergence, "parameters became non-finite", step + 1);
  }
  const double final_loss = landscape.loss(theta);
  if (!std::isfinite(final_loss)) throw Error(ErrorKind::Divergence, "loss became non-finite", cfg.steps);
  if (final_loss < best_loss) best = theta;
  return best;
}

}  // namespace mep
