#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gzsl/numkit/matrix.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::numkit {

enum class Activation { Identity, Relu };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

/// One affine map y = x * weight + bias, weight shaped (in x out).
struct DenseLayer {
  Matrix weight;
  std::vector<float> bias;

  std::size_t input_dim() const { return weight.rows(); }
  std::size_t output_dim() const { return weight.cols(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Fully-connected perceptron. The hidden activation follows every layer but
/// the last; the output activation follows the last.
struct MlpNet {
  std::vector<DenseLayer> layers;
  Activation hidden_activation = Activation::Relu;
  Activation output_activation = Activation::Identity;

  /// `dims` lists widths from input to output; weights and biases are drawn
  /// uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static MlpNet create(std::span<const std::size_t> dims, Activation hidden, Activation output,
                       Rng& rng);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;

  /// Mutable views over every weight block then bias block, layer by layer.
  std::vector<std::span<float>> parameters();
  std::vector<std::span<const float>> parameters() const;

  /// Throws ShapeError when consecutive layers do not chain.
  void validate() const;

  friend bool operator==(const MlpNet&, const MlpNet&) = default;
};

/// Everything `mlp_backward` needs from a forward pass.
struct MlpCache {
  std::vector<Matrix> inputs;          // input to each layer
  std::vector<Matrix> preactivations;  // x * W + b of each layer
};

struct MlpGrads {
  std::vector<DenseLayer> layers;

  static MlpGrads zeros_like(const MlpNet& net);
  std::vector<std::span<float>> parameters();
  std::vector<std::span<const float>> parameters() const;
  void accumulate(const MlpGrads& other);
};

struct MlpForward {
  Matrix output;
  MlpCache cache;
};

struct MlpBackward {
  MlpGrads param_grads;
  Matrix grad_input;
};

MlpForward mlp_forward(const MlpNet& net, const Matrix& batch);

/// Forward pass without keeping the activation record.
Matrix mlp_apply(const MlpNet& net, const Matrix& batch);

MlpBackward mlp_backward(const MlpNet& net, const MlpCache& cache, const Matrix& grad_output);

}  // namespace gzsl::numkit
