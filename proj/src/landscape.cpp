#include "mep/landscape.hpp"

#include <cmath>
#include <random>

#include "mep/error.hpp"

namespace mep {

void Landscape::check(const ParamVector& params) const {
  if (static_cast<std::size_t>(params.size()) != dim()) {
    throw Error(ErrorKind::DimensionMismatch, name() + " expects " + std::to_string(dim()) + " parameters, got " +
                                                  std::to_string(params.size()));
  }
  if (!all_finite(params)) throw Error(ErrorKind::NonFinite, name() + ": parameters contain NaN or Inf");
}

Evaluation Landscape::evaluate(const ParamVector& params) const {
  check(params);
  return compute(params);
}

double Landscape::loss(const ParamVector& params) const {
  check(params);
  return compute_loss(params);
}

namespace {

class DoubleWell final : public Landscape {
 public:
  std::size_t dim() const override { return 2; }
  std::string name() const override { return "double_well"; }

 protected:
  Evaluation compute(const ParamVector& p) const override {
    const double x = p[0], y = p[1];
    const double a = 1.0 - x * x;
    const double b = y - x * x;
    Evaluation e;
    e.loss = a * a + 2.0 * b * b;
    e.gradient.resize(2);
    e.gradient[0] = -4.0 * x * a - 8.0 * x * b;
    e.gradient[1] = 4.0 * b;
    return e;
  }
};

class Bowl final : public Landscape {
 public:
  std::size_t dim() const override { return 2; }
  std::string name() const override { return "bowl"; }

 protected:
  Evaluation compute(const ParamVector& p) const override { return {p.squaredNorm(), 2.0 * p}; }
};

class Linear final : public Landscape {
 public:
  explicit Linear(ParamVector c) : c_(std::move(c)) {}
  std::size_t dim() const override { return static_cast<std::size_t>(c_.size()); }
  std::string name() const override { return "linear"; }

 protected:
  Evaluation compute(const ParamVector& p) const override { return {c_.dot(p), c_}; }

 private:
  ParamVector c_;
};

class GaussianWells final : public Landscape {
 public:
  GaussianWells(std::vector<GaussianWell> wells, double offset, double confinement)
      : wells_(std::move(wells)), offset_(offset), confinement_(confinement) {}

  std::size_t dim() const override { return 2; }
  std::string name() const override { return "gaussian_wells"; }

 protected:
  Evaluation compute(const ParamVector& p) const override {
    const Eigen::Vector2d x(p[0], p[1]);
    Evaluation e;
    e.loss = offset_ + confinement_ * x.squaredNorm();
    Eigen::Vector2d g = 2.0 * confinement_ * x;
    for (const auto& w : wells_) {
      const Eigen::Vector2d d = x - w.center;
      const double s2 = w.width * w.width;
      const double term = w.depth * std::exp(-d.squaredNorm() / (2.0 * s2));
      e.loss -= term;
      g += term * d / s2;
    }
    e.gradient = g;
    return e;
  }

 private:
  std::vector<GaussianWell> wells_;
  double offset_;
  double confinement_;
};

}  // namespace

LandscapePtr make_double_well() { return std::make_shared<DoubleWell>(); }

LandscapePtr make_bowl() { return std::make_shared<Bowl>(); }

LandscapePtr make_linear(ParamVector coefficients) {
  if (coefficients.size() == 0) throw Error(ErrorKind::InvalidArgument, "linear landscape needs dimension >= 1");
  return std::make_shared<Linear>(std::move(coefficients));
}

LandscapePtr make_gaussian_wells(std::vector<GaussianWell> wells, double offset, double confinement) {
  if (wells.empty()) throw Error(ErrorKind::InvalidArgument, "gaussian_wells needs at least one well");
  for (const auto& w : wells) {
    if (!(w.width > 0.0)) throw Error(ErrorKind::InvalidArgument, "well width must be positive");
  }
  if (confinement < 0.0) throw Error(ErrorKind::InvalidArgument, "confinement must be non-negative");
  return std::make_shared<GaussianWells>(std::move(wells), offset, confinement);
}

LandscapePtr make_random_gaussian_wells(std::uint64_t seed, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one well");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> depth(0.5, 1.5);
  std::uniform_real_distribution<double> width(0.5, 0.9);
  std::vector<GaussianWell> wells;
  double offset = 0.0;
  for (int k = 0; k < count; ++k) {
    GaussianWell w;
    w.center = {pos(rng), pos(rng)};
    w.depth = depth(rng);
    w.width = width(rng);
    offset += w.depth;
    wells.push_back(w);
  }
  return make_gaussian_wells(std::move(wells), offset);
}

}  // namespace mep
