#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mep/types.hpp"

namespace mep {

/// A differentiable scalar field over a fixed-dimension parameter space.
///
/// Implementations must be reentrant: `evaluate` is called concurrently on
/// distinct points from the NEB and dense-evaluation workers.
class Landscape {
 public:
  virtual ~Landscape() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;

  /// Validates `params` (dimension, finiteness) and returns loss and gradient.
  Evaluation evaluate(const ParamVector& params) const;

  /// Loss only. Defaults to evaluate().loss; MLPs skip the backward pass.
  double loss(const ParamVector& params) const;

 protected:
  virtual Evaluation compute(const ParamVector& params) const = 0;
  virtual double compute_loss(const ParamVector& params) const { return compute(params).loss; }

 private:
  void check(const ParamVector& params) const;
};

using LandscapePtr = std::shared_ptr<const Landscape>;

/// f(x, y) = (1 - x^2)^2 + 2 (y - x^2)^2. Minima at (+-1, 1), saddle (0, 0).
LandscapePtr make_double_well();

/// f(x, y) = x^2 + y^2.
LandscapePtr make_bowl();

/// f(theta) = c . theta, in any dimension.
LandscapePtr make_linear(ParamVector coefficients);

struct GaussianWell {
  Eigen::Vector2d center;
  double depth = 1.0;
  double width = 1.0;
};

/// f(x) = offset - sum_k depth_k exp(-|x - c_k|^2 / (2 width_k^2)) + confinement |x|^2.
LandscapePtr make_gaussian_wells(std::vector<GaussianWell> wells, double offset, double confinement = 0.0);

/// Random surface with `count` wells drawn from `seed`: centres in [-2, 2]^2,
/// depths in [0.5, 1.5], widths in [0.5, 0.9]. The offset is the sum of depths
/// so the surface is non-negative.
LandscapePtr make_random_gaussian_wells(std::uint64_t seed, int count);

}  // namespace mep
