#include "gzsl/numkit/adam.hpp"

#include <cmath>
#include <string>

#include "gzsl/errors.hpp"

namespace gzsl::numkit {

AdamState::AdamState(AdamHyper hyper, std::span<const std::size_t> block_sizes) : hyper_(hyper) {
  for (std::size_t n : block_sizes) {
    m_.emplace_back(n, 0.0f);
    v_.emplace_back(n, 0.0f);
  }
}

void adam_step(std::span<const std::span<float>> params,
               std::span<const std::span<const float>> grads, AdamState& state) {
  if (params.size() != state.m_.size() || grads.size() != state.m_.size()) {
    throw ShapeError("adam_step: expected " + std::to_string(state.m_.size()) +
                     " parameter blocks");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size() != state.m_[b].size() || grads[b].size() != state.m_[b].size()) {
      throw ShapeError("adam_step: block " + std::to_string(b) + " size mismatch");
    }
  }

  const AdamHyper& h = state.hyper_;
  state.step_ += 1;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(h.beta1, t);
  const double correction2 = 1.0 - std::pow(h.beta2, t);

  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    auto& m = state.m_[b];
    auto& v = state.v_[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = h.beta1 * m[i] + (1.0 - h.beta1) * gi;
      const double vi = h.beta2 * v[i] + (1.0 - h.beta2) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      const double m_hat = mi / correction1;
      const double v_hat = vi / correction2;
      p[i] = static_cast<float>(p[i] - h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon));
    }
  }
}

}  // namespace gzsl::numkit
