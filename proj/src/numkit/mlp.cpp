#include "gzsl/numkit/mlp.hpp"

#include <cmath>
#include <string>

#include "gzsl/errors.hpp"

namespace gzsl::numkit {

namespace {

void apply_activation(Activation act, Matrix& m) {
  if (act == Activation::Relu) {
    for (float& v : m.values()) v = v > 0.0f ? v : 0.0f;
  }
}

// Multiplies `grad` by the activation derivative evaluated at `pre`.
void backprop_activation(Activation act, const Matrix& pre, Matrix& grad) {
  if (act == Activation::Relu) {
    auto g = grad.values();
    auto p = pre.values();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(p[i] > 0.0f)) g[i] = 0.0f;
    }
  }
}

Matrix affine(const DenseLayer& layer, const Matrix& x) {
  Matrix y = matmul(x, layer.weight);
  for (std::size_t r = 0; r < y.rows(); ++r) {
    auto row = y.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += layer.bias[c];
  }
  return y;
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity:
      return "identity";
    case Activation::Relu:
      return "relu";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  throw UsageError("unknown activation '" + std::string(name) + "'");
}

MlpNet MlpNet::create(std::span<const std::size_t> dims, Activation hidden, Activation output,
                      Rng& rng) {
  if (dims.size() < 2) throw UsageError("an MLP needs at least input and output widths");
  MlpNet net;
  net.hidden_activation = hidden;
  net.output_activation = output;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const std::size_t fan_in = dims[k];
    const std::size_t fan_out = dims[k + 1];
    if (fan_in == 0 || fan_out == 0) throw UsageError("MLP layer widths must be positive");
    const float bound = 1.0f / std::sqrt(static_cast<float>(fan_in));
    DenseLayer layer{Matrix(fan_in, fan_out), std::vector<float>(fan_out)};
    for (float& w : layer.weight.values()) w = uniform(-bound, bound, rng);
    for (float& b : layer.bias) b = uniform(-bound, bound, rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::size_t MlpNet::input_dim() const { return layers.empty() ? 0 : layers.front().input_dim(); }

std::size_t MlpNet::output_dim() const { return layers.empty() ? 0 : layers.back().output_dim(); }

std::size_t MlpNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<std::span<float>> MlpNet::parameters() {
  std::vector<std::span<float>> out;
  for (auto& l : layers) {
    out.emplace_back(l.weight.values());
    out.emplace_back(l.bias);
  }
  return out;
}

std::vector<std::span<const float>> MlpNet::parameters() const {
  std::vector<std::span<const float>> out;
  for (const auto& l : layers) {
    out.emplace_back(l.weight.values());
    out.emplace_back(l.bias);
  }
  return out;
}

void MlpNet::validate() const {
  if (layers.empty()) throw ShapeError("MLP has no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (layers[k].bias.size() != layers[k].output_dim()) {
      throw ShapeError("layer " + std::to_string(k) + " bias length mismatch");
    }
    if (k > 0 && layers[k].input_dim() != layers[k - 1].output_dim()) {
      throw ShapeError("layer " + std::to_string(k) + " does not chain with its predecessor");
    }
  }
}

MlpGrads MlpGrads::zeros_like(const MlpNet& net) {
  MlpGrads g;
  for (const auto& l : net.layers) {
    g.layers.push_back({Matrix(l.weight.rows(), l.weight.cols()),
                        std::vector<float>(l.bias.size(), 0.0f)});
  }
  return g;
}

std::vector<std::span<float>> MlpGrads::parameters() {
  std::vector<std::span<float>> out;
  for (auto& l : layers) {
    out.emplace_back(l.weight.values());
    out.emplace_back(l.bias);
  }
  return out;
}

std::vector<std::span<const float>> MlpGrads::parameters() const {
  std::vector<std::span<const float>> out;
  for (const auto& l : layers) {
    out.emplace_back(l.weight.values());
    out.emplace_back(l.bias);
  }
  return out;
}

void MlpGrads::accumulate(const MlpGrads& other) {
  if (other.layers.size() != layers.size()) throw ShapeError("MlpGrads layer count mismatch");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    add_in_place(layers[k].weight, other.layers[k].weight);
    if (layers[k].bias.size() != other.layers[k].bias.size()) {
      throw ShapeError("MlpGrads bias mismatch");
    }
    for (std::size_t i = 0; i < layers[k].bias.size(); ++i) {
      layers[k].bias[i] += other.layers[k].bias[i];
    }
  }
}

MlpForward mlp_forward(const MlpNet& net, const Matrix& batch) {
  net.validate();
  if (batch.cols() != net.input_dim()) {
    throw ShapeError("mlp_forward: batch " + batch.shape_string() + " into input dim " +
                     std::to_string(net.input_dim()));
  }
  MlpForward fwd;
  Matrix x = batch;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    Matrix pre = affine(net.layers[k], x);
    Matrix act = pre;
    const bool last = k + 1 == net.layers.size();
    apply_activation(last ? net.output_activation : net.hidden_activation, act);
    fwd.cache.inputs.push_back(std::move(x));
    fwd.cache.preactivations.push_back(std::move(pre));
    x = std::move(act);
  }
  fwd.output = std::move(x);
  return fwd;
}

Matrix mlp_apply(const MlpNet& net, const Matrix& batch) { return mlp_forward(net, batch).output; }

MlpBackward mlp_backward(const MlpNet& net, const MlpCache& cache, const Matrix& grad_output) {
  const std::size_t n_layers = net.layers.size();
  if (cache.inputs.size() != n_layers || cache.preactivations.size() != n_layers) {
    throw ShapeError("mlp_backward: cache does not belong to this network");
  }
  for (std::size_t k = 0; k < n_layers; ++k) {
    const auto& l = net.layers[k];
    const auto& in = cache.inputs[k];
    const auto& pre = cache.preactivations[k];
    if (in.cols() != l.input_dim() || pre.cols() != l.output_dim() || in.rows() != pre.rows() ||
        in.rows() != grad_output.rows()) {
      throw ShapeError("mlp_backward: stale or mismatched cache at layer " + std::to_string(k));
    }
  }
  if (grad_output.cols() != net.output_dim()) {
    throw ShapeError("mlp_backward: grad_output " + grad_output.shape_string() +
                     " does not match output dim " + std::to_string(net.output_dim()));
  }

  MlpBackward out;
  out.param_grads.layers.resize(n_layers);
  Matrix grad = grad_output;
  for (std::size_t k = n_layers; k-- > 0;) {
    const bool last = k + 1 == n_layers;
    backprop_activation(last ? net.output_activation : net.hidden_activation,
                        cache.preactivations[k], grad);
    auto& lg = out.param_grads.layers[k];
    lg.weight = matmul_at_b(cache.inputs[k], grad);
    lg.bias.assign(grad.cols(), 0.0f);
    for (std::size_t c = 0; c < grad.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < grad.rows(); ++r) acc += grad(r, c);
      lg.bias[c] = static_cast<float>(acc);
    }
    grad = matmul_a_bt(grad, net.layers[k].weight);
  }
  out.grad_input = std::move(grad);
  return out;
}

}  // namespace gzsl::numkit
