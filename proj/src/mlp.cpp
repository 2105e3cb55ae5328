#include "mep/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mep/error.hpp"

namespace mep {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

std::size_t MlpSpec::param_count() const {
  std::size_t total = 0;
  for (std::size_t l = 1; l < layer_sizes.size(); ++l) total += layer_sizes[l] * (layer_sizes[l - 1] + 1);
  return total;
}

std::size_t MlpSpec::weight_offset(std::size_t l) const {
  if (l == 0 || l >= layer_sizes.size()) throw Error(ErrorKind::InvalidArgument, "layer index out of range");
  std::size_t offset = 0;
  for (std::size_t k = 1; k < l; ++k) offset += layer_sizes[k] * (layer_sizes[k - 1] + 1);
  return offset;
}

std::size_t MlpSpec::bias_offset(std::size_t l) const {
  return weight_offset(l) + layer_sizes[l] * layer_sizes[l - 1];
}

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) throw Error(ErrorKind::InvalidArgument, "MLP needs at least an input and an output layer");
  for (auto s : layer_sizes) {
    if (s == 0) throw Error(ErrorKind::InvalidArgument, "MLP layer sizes must be positive");
  }
  if (loss_kind == LossKind::CrossEntropy && layer_sizes.back() < 2) {
    throw Error(ErrorKind::InvalidArgument, "cross-entropy needs at least two outputs");
  }
}

Dataset make_xor_dataset() {
  Dataset d;
  d.inputs.resize(4, 2);
  d.inputs << 0, 0, 0, 1, 1, 0, 1, 1;
  d.values.resize(4, 1);
  d.values << 0, 1, 1, 0;
  return d;
}

Dataset make_two_clusters(std::size_t n, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spread);
  Dataset d;
  d.inputs.resize(static_cast<Eigen::Index>(n), 2);
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double cx = label == 0 ? -1.5 : 1.5;
    d.inputs(static_cast<Eigen::Index>(i), 0) = cx + noise(rng);
    d.inputs(static_cast<Eigen::Index>(i), 1) = noise(rng);
    d.labels[i] = label;
  }
  return d;
}

MlpLandscape::MlpLandscape(MlpSpec spec, Dataset data) : spec_(std::move(spec)), data_(std::move(data)) {
  spec_.validate();
  const auto n = data_.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "dataset is empty");
  if (static_cast<std::size_t>(data_.inputs.cols()) != spec_.layer_sizes.front()) {
    throw Error(ErrorKind::DimensionMismatch, "dataset has " + std::to_string(data_.inputs.cols()) +
                                                  " features, network expects " +
                                                  std::to_string(spec_.layer_sizes.front()));
  }
  const auto out = spec_.layer_sizes.back();
  if (spec_.loss_kind == LossKind::CrossEntropy) {
    if (data_.labels.size() != n) throw Error(ErrorKind::DimensionMismatch, "need one class label per sample");
    for (int label : data_.labels) {
      if (label < 0 || static_cast<std::size_t>(label) >= out) {
        throw Error(ErrorKind::InvalidArgument, "class label " + std::to_string(label) + " out of range");
      }
    }
  } else {
    if (static_cast<std::size_t>(data_.values.rows()) != n || static_cast<std::size_t>(data_.values.cols()) != out) {
      throw Error(ErrorKind::DimensionMismatch, "squared-error targets must be n_samples x output size");
    }
  }
  if (!data_.inputs.allFinite() || (data_.values.size() > 0 && !data_.values.allFinite())) {
    throw Error(ErrorKind::NonFinite, "dataset contains NaN or Inf");
  }
}

std::vector<std::size_t> MlpLandscape::batch() const {
  if (!sampler_) return {};
  auto idx = sampler_(data_.size());
  for (auto i : idx) {
    if (i >= data_.size()) throw Error(ErrorKind::InvalidArgument, "batch sampler returned an out-of-range index");
  }
  if (idx.empty()) throw Error(ErrorKind::InvalidArgument, "batch sampler returned an empty batch");
  return idx;
}

Evaluation MlpLandscape::compute(const ParamVector& params) const { return run(params, true); }

double MlpLandscape::compute_loss(const ParamVector& params) const { return run(params, false).loss; }

namespace {

struct Forward {
  std::vector<Eigen::MatrixXd> pre;   // per layer l >= 1
  std::vector<Eigen::MatrixXd> post;  // post[0] = inputs
};

Forward forward(const MlpSpec& spec, const ParamVector& params, Eigen::MatrixXd inputs) {
  const auto layers = spec.num_layers();
  Forward f;
  f.pre.resize(layers);
  f.post.resize(layers);
  f.post[0] = std::move(inputs);
  for (std::size_t l = 1; l < layers; ++l) {
    const auto in = static_cast<Eigen::Index>(spec.layer_sizes[l - 1]);
    const auto out = static_cast<Eigen::Index>(spec.layer_sizes[l]);
    Eigen::Map<const RowMajor> w(params.data() + spec.weight_offset(l), out, in);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + spec.bias_offset(l), out);
    f.pre[l] = f.post[l - 1] * w.transpose();
    f.pre[l].rowwise() += b.transpose();
    if (l + 1 == layers) {
      f.post[l] = f.pre[l];
    } else if (spec.activation == Activation::Tanh) {
      f.post[l] = f.pre[l].array().tanh();
    } else {
      f.post[l] = f.pre[l].array().max(0.0);
    }
  }
  return f;
}

}  // namespace

Evaluation MlpLandscape::run(const ParamVector& params, bool with_gradient) const {
  const auto idx = batch();
  Eigen::MatrixXd x;
  Eigen::MatrixXd targets;
  std::vector<int> labels;
  if (idx.empty()) {
    x = data_.inputs;
    targets = data_.values;
    labels = data_.labels;
  } else {
    x.resize(static_cast<Eigen::Index>(idx.size()), data_.inputs.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) x.row(static_cast<Eigen::Index>(r)) = data_.inputs.row(static_cast<Eigen::Index>(idx[r]));
    if (spec_.loss_kind == LossKind::CrossEntropy) {
      for (auto i : idx) labels.push_back(data_.labels[i]);
    } else {
      targets.resize(static_cast<Eigen::Index>(idx.size()), data_.values.cols());
      for (std::size_t r = 0; r < idx.size(); ++r) targets.row(static_cast<Eigen::Index>(r)) = data_.values.row(static_cast<Eigen::Index>(idx[r]));
    }
  }

  const auto n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Forward f = forward(spec_, params, std::move(x));
  const auto layers = spec_.num_layers();
  const Eigen::MatrixXd& y = f.post[layers - 1];

  Evaluation e;
  Eigen::MatrixXd delta;  // dL/d(pre-activation) of the current layer
  if (spec_.loss_kind == LossKind::SquaredError) {
    const Eigen::MatrixXd diff = y - targets;
    e.loss = diff.squaredNorm() * inv_n;
    if (with_gradient) delta = 2.0 * inv_n * diff;
  } else {
    double total = 0.0;
    if (with_gradient) delta.resize(n, y.cols());
    for (Eigen::Index r = 0; r < n; ++r) {
      const double m = y.row(r).maxCoeff();
      const Eigen::RowVectorXd shifted = y.row(r).array() - m;
      const double log_sum = std::log(shifted.array().exp().sum());
      const int label = labels[static_cast<std::size_t>(r)];
      total += log_sum - shifted[label];
      if (with_gradient) {
        delta.row(r) = (shifted.array() - log_sum).exp();
        delta(r, label) -= 1.0;
      }
    }
    e.loss = total * inv_n;
    if (with_gradient) delta *= inv_n;
  }
  if (!with_gradient) return e;

  e.gradient = ParamVector::Zero(static_cast<Eigen::Index>(spec_.param_count()));
  for (std::size_t l = layers - 1; l >= 1; --l) {
    const auto in = static_cast<Eigen::Index>(spec_.layer_sizes[l - 1]);
    const auto out = static_cast<Eigen::Index>(spec_.layer_sizes[l]);
    Eigen::Map<RowMajor> gw(e.gradient.data() + spec_.weight_offset(l), out, in);
    Eigen::Map<Eigen::VectorXd> gb(e.gradient.data() + spec_.bias_offset(l), out);
    gw = delta.transpose() * f.post[l - 1];
    gb = delta.colwise().sum().transpose();
    if (l == 1) break;
    Eigen::Map<const RowMajor> w(params.data() + spec_.weight_offset(l), out, in);
    Eigen::MatrixXd back = delta * w;
    if (spec_.activation == Activation::Tanh) {
      back.array() *= 1.0 - f.post[l - 1].array().square();
    } else {
      back.array() *= (f.pre[l - 1].array() > 0.0).cast<double>();
    }
    delta = std::move(back);
  }
  return e;
}

Eigen::MatrixXd MlpLandscape::outputs(const ParamVector& params) const {
  if (static_cast<std::size_t>(params.size()) != dim()) throw Error(ErrorKind::DimensionMismatch, "parameter count mismatch");
  return forward(spec_, params, data_.inputs).post.back();
}

std::size_t MlpLandscape::misclassified(const ParamVector& params) const {
  const Eigen::MatrixXd y = outputs(params);
  std::size_t wrong = 0;
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    int predicted = 0;
    int target = 0;
    if (y.cols() == 1) {
      predicted = y(r, 0) > 0.5 ? 1 : 0;
      target = data_.values(r, 0) > 0.5 ? 1 : 0;
    } else {
      y.row(r).maxCoeff(&predicted);
      if (spec_.loss_kind == LossKind::CrossEntropy) {
        target = data_.labels[static_cast<std::size_t>(r)];
      } else {
        data_.values.row(r).maxCoeff(&target);
      }
    }
    if (predicted != target) ++wrong;
  }
  return wrong;
}

double MlpLandscape::min_abs_preactivation(const ParamVector& params) const {
  const Forward f = forward(spec_, params, data_.inputs);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t l = 1; l + 1 < spec_.num_layers(); ++l) smallest = std::min(smallest, f.pre[l].cwiseAbs().minCoeff());
  return smallest;
}

std::shared_ptr<const MlpLandscape> make_mlp(MlpSpec spec, Dataset data) {
  return std::make_shared<MlpLandscape>(std::move(spec), std::move(data));
}

ParamVector init_mlp_params(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  ParamVector p(static_cast<Eigen::Index>(spec.param_count()));
  for (std::size_t l = 1; l < spec.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.layer_sizes[l - 1]));
    std::uniform_real_distribution<double> u(-bound, bound);
    const auto begin = spec.weight_offset(l);
    const auto end = begin + spec.layer_sizes[l] * (spec.layer_sizes[l - 1] + 1);
    for (auto k = begin; k < end; ++k) p[static_cast<Eigen::Index>(k)] = u(rng);
  }
  return p;
}

ParamVector permute_hidden_units(const ParamVector& params, const MlpSpec& spec, std::size_t layer,
                                 const std::vector<std::size_t>& perm) {
  spec.validate();
  if (static_cast<std::size_t>(params.size()) != spec.param_count()) {
    throw Error(ErrorKind::DimensionMismatch, "parameter count does not match the network");
  }
  if (layer == 0 || layer + 1 >= spec.num_layers()) {
    throw Error(ErrorKind::InvalidArgument, "layer " + std::to_string(layer) + " is not a hidden layer");
  }
  const auto width = spec.layer_sizes[layer];
  std::vector<std::size_t> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> identity(width);
  std::iota(identity.begin(), identity.end(), 0);
  if (sorted != identity) throw Error(ErrorKind::InvalidArgument, "not a permutation of the layer's units");

  ParamVector out = params;
  const auto in = spec.layer_sizes[layer - 1];
  const auto next = spec.layer_sizes[layer + 1];
  const auto w_in = spec.weight_offset(layer);
  const auto b_in = spec.bias_offset(layer);
  const auto w_out = spec.weight_offset(layer + 1);
  for (std::size_t dst = 0; dst < width; ++dst) {
    const auto src = perm[dst];
    for (std::size_t c = 0; c < in; ++c) {
      out[static_cast<Eigen::Index>(w_in + dst * in + c)] = params[static_cast<Eigen::Index>(w_in + src * in + c)];
    }
    out[static_cast<Eigen::Index>(b_in + dst)] = params[static_cast<Eigen::Index>(b_in + src)];
    for (std::size_t r = 0; r < next; ++r) {
      out[static_cast<Eigen::Index>(w_out + r * width + dst)] = params[static_cast<Eigen::Index>(w_out + r * width + src)];
    }
  }
  return out;
}

}  // namespace mep
