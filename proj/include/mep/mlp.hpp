#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mep/landscape.hpp"

namespace mep {

enum class Activation { ReLU, Tanh };
enum class LossKind { CrossEntropy, SquaredError };

struct MlpSpec {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., output
  Activation activation = Activation::Tanh;
  LossKind loss_kind = LossKind::SquaredError;

  std::size_t num_layers() const { return layer_sizes.size(); }
  /// Total number of weights and biases.
  std::size_t param_count() const;
  /// Offset of layer `l`'s weight block (l = 1 .. num_layers()-1). The block is
  /// the row-major (out x in) weight matrix followed by the out biases.
  std::size_t weight_offset(std::size_t l) const;
  std::size_t bias_offset(std::size_t l) const;

  void validate() const;
};

/// In-memory samples. Cross-entropy datasets use `labels`, squared-error
/// datasets use `values` (n_samples x output size).
struct Dataset {
  Eigen::MatrixXd inputs;  // n_samples x input_dim
  std::vector<int> labels;
  Eigen::MatrixXd values;

  std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }
};

/// The four XOR points with 0/1 targets for a single squared-error output.
Dataset make_xor_dataset();

/// Two Gaussian blobs centred at (-1.5, 0) and (1.5, 0), balanced class labels.
Dataset make_two_clusters(std::size_t n, double spread, std::uint64_t seed);

/// Returns the sample indices used for one evaluation. An empty sampler means
/// full batch. Must be deterministic for the landscape to stay reentrant.
using BatchSampler = std::function<std::vector<std::size_t>(std::size_t n_samples)>;

/// Multilayer perceptron loss over a dataset: mean cross-entropy (softmax
/// output) or mean squared error summed over outputs. Hidden layers use the
/// spec's activation; the output layer is affine. Weight decay is not part of
/// the loss.
class MlpLandscape final : public Landscape {
 public:
  MlpLandscape(MlpSpec spec, Dataset data);

  std::size_t dim() const override { return spec_.param_count(); }
  std::string name() const override { return "mlp"; }

  const MlpSpec& spec() const { return spec_; }
  const Dataset& data() const { return data_; }

  void set_batch_sampler(BatchSampler sampler) { sampler_ = std::move(sampler); }

  /// Network outputs for every sample (n_samples x output size).
  Eigen::MatrixXd outputs(const ParamVector& params) const;

  /// Number of samples whose predicted class differs from the target. For a
  /// single squared-error output the prediction is `output > 0.5`; otherwise
  /// it is the arg-max output.
  std::size_t misclassified(const ParamVector& params) const;

  /// Smallest |pre-activation| over all hidden units and samples; used to
  /// skip ReLU kinks in finite-difference checks.
  double min_abs_preactivation(const ParamVector& params) const;

 protected:
  Evaluation compute(const ParamVector& params) const override;
  double compute_loss(const ParamVector& params) const override;

 private:
  Evaluation run(const ParamVector& params, bool with_gradient) const;
  std::vector<std::size_t> batch() const;

  MlpSpec spec_;
  Dataset data_;
  BatchSampler sampler_;
};

std::shared_ptr<const MlpLandscape> make_mlp(MlpSpec spec, Dataset data);

/// Uniform initialisation in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and
/// biases of each layer.
ParamVector init_mlp_params(const MlpSpec& spec, std::uint64_t seed);

/// Permutes the units of hidden layer `layer` (1 .. num_layers()-2): rows of
/// its incoming weights and biases and columns of the next layer's weights.
/// perm[new_position] = old_unit.
ParamVector permute_hidden_units(const ParamVector& params, const MlpSpec& spec, std::size_t layer,
                                 const std::vector<std::size_t>& perm);

}  // namespace mep
