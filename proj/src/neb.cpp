#include "mep/neb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mep/error.hpp"
#include "mep/parallel.hpp"
#include "mep/train.hpp"

namespace mep {

void NebConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "NEB learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw Error(ErrorKind::InvalidArgument, "NEB momentum must be in [0, 1)");
  if (!(weight_decay >= 0.0)) throw Error(ErrorKind::InvalidArgument, "NEB weight_decay must be >= 0");
  if (!(spring_constant >= 0.0)) throw Error(ErrorKind::InvalidArgument, "spring constant must be >= 0");
}

double elastic_band_energy(const Chain& chain, const PivotLosses& losses, double k) {
  if (losses.size() != chain.size()) throw Error(ErrorKind::DimensionMismatch, "losses not aligned with pivots");
  double energy = 0.0;
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) energy += losses[i];
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) energy += 0.5 * k * (chain[i + 1] - chain[i]).squaredNorm();
  return energy;
}

ParamVector loss_force_perp(const ParamVector& gradient, const ParamVector& tau) {
  if (gradient.size() != tau.size()) throw Error(ErrorKind::DimensionMismatch, "gradient and tangent differ in dimension");
  if (std::abs(tau.norm() - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "tangent must have unit norm");
  ParamVector f = -(gradient - gradient.dot(tau) * tau);
  // One correction pass removes the residual parallel component left by rounding.
  f -= f.dot(tau) * tau;
  return f;
}

ParamVector spring_force_parallel(const Chain& chain, std::size_t i, double k, const ParamVector& tau) {
  if (i == 0 || i + 1 >= chain.size()) throw Error(ErrorKind::InvalidArgument, "spring force needs an interior pivot index");
  const double back = (chain[i] - chain[i - 1]).norm();
  const double fwd = (chain[i + 1] - chain[i]).norm();
  return (-k * (back - fwd)) * tau;
}

NebResult neb_relax(const Chain& chain, const Landscape& landscape, const NebConfig& cfg, OptimizerState& state,
                    const NebObserver& observer) {
  cfg.validate();
  if (chain.dim() != landscape.dim()) throw Error(ErrorKind::DimensionMismatch, "chain and landscape differ in dimension");

  NebResult result{chain, {}};
  const std::size_t n = chain.size();
  const std::size_t interior = chain.interior_count();
  if (cfg.steps == 0 || interior == 0 || total_length(chain) == 0.0) return result;

  if (state.velocity.size() != interior) state.velocity.assign(interior, ParamVector::Zero(static_cast<Eigen::Index>(chain.dim())));

  PivotLosses losses(n);
  losses.front() = landscape.loss(chain.front());
  losses.back() = landscape.loss(chain.back());

  const SgdMomentum opt{cfg.learning_rate, cfg.momentum, cfg.weight_decay};
  std::vector<Evaluation> evals(interior);
  std::vector<ParamVector> tangents(interior), loss_forces(interior), spring_forces(interior);
  result.max_interior_loss.reserve(cfg.steps);

  for (std::size_t t = 0; t < cfg.steps; ++t) {
    Chain current = redistribute(result.chain);

    parallel_for(interior, cfg.workers, [&](std::size_t k) { evals[k] = landscape.evaluate(current[k + 1]); });

    double max_loss = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < interior; ++k) {
      if (!std::isfinite(evals[k].loss) || !all_finite(evals[k].gradient)) {
        throw Error(ErrorKind::Divergence, "non-finite loss at pivot " + std::to_string(k + 1), t);
      }
      losses[k + 1] = evals[k].loss;
      max_loss = std::max(max_loss, evals[k].loss);
    }
    result.max_interior_loss.push_back(max_loss);

    for (std::size_t k = 0; k < interior; ++k) {
      tangents[k] = tangent(current, k + 1, losses);
      loss_forces[k] = loss_force_perp(evals[k].gradient, tangents[k]);
      spring_forces[k] = cfg.spring_constant > 0.0 ? spring_force_parallel(current, k + 1, cfg.spring_constant, tangents[k])
                                                   : ParamVector::Zero(static_cast<Eigen::Index>(chain.dim()));
    }
    if (observer) observer(NebIteration{t, current, losses, tangents, loss_forces, spring_forces});

    for (std::size_t k = 0; k < interior; ++k) {
      ParamVector p = current[k + 1];
      opt.step(p, state.velocity[k], loss_forces[k] + spring_forces[k]);
      if (!all_finite(p)) throw Error(ErrorKind::Divergence, "pivot " + std::to_string(k + 1) + " diverged", t);
      current.set_interior(k + 1, std::move(p));
    }
    result.chain = std::move(current);
  }
  return result;
}

NebResult neb_relax(const Chain& chain, const Landscape& landscape, const NebConfig& cfg) {
  OptimizerState state;
  return neb_relax(chain, landscape, cfg, state);
}

}  // namespace mep
