#include "gzsl/gml/dual_vae.hpp"

#include <array>

#include "gzsl/errors.hpp"

namespace gzsl::gml {

using numkit::Activation;

DualVae DualVae::create(const DualVaeShape& shape, numkit::Rng& rng) {
  if (shape.visual_dim == 0 || shape.attribute_dim == 0 || shape.latent_dim == 0) {
    throw UsageError("DualVae: visual, attribute and latent dims must be positive");
  }
  const std::size_t code = 2 * shape.latent_dim;
  const std::array<std::size_t, 3> qv{shape.visual_dim, shape.hidden_qv, code};
  const std::array<std::size_t, 3> qs{shape.attribute_dim, shape.hidden_qs, code};
  const std::array<std::size_t, 3> pv{shape.latent_dim, shape.hidden_pv, shape.visual_dim};
  const std::array<std::size_t, 3> ps{shape.latent_dim, shape.hidden_ps, shape.attribute_dim};
  DualVae vae;
  vae.latent_dim = shape.latent_dim;
  vae.q_v = MlpNet::create(qv, Activation::Relu, Activation::Identity, rng);
  vae.q_s = MlpNet::create(qs, Activation::Relu, Activation::Identity, rng);
  vae.p_v = MlpNet::create(pv, Activation::Relu, Activation::Identity, rng);
  vae.p_s = MlpNet::create(ps, Activation::Relu, Activation::Identity, rng);
  return vae;
}

std::size_t DualVae::parameter_count() const {
  return q_v.parameter_count() + q_s.parameter_count() + p_v.parameter_count() +
         p_s.parameter_count();
}

std::vector<std::span<float>> DualVae::parameters() {
  std::vector<std::span<float>> out;
  for (MlpNet* net : {&q_v, &q_s, &p_v, &p_s}) {
    auto p = net->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<std::span<const float>> DualVae::parameters() const {
  std::vector<std::span<const float>> out;
  for (const MlpNet* net : {&q_v, &q_s, &p_v, &p_s}) {
    auto p = net->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void DualVae::validate() const {
  for (const MlpNet* net : {&q_v, &q_s, &p_v, &p_s}) net->validate();
  if (latent_dim == 0) throw ShapeError("DualVae: latent_dim is zero");
  if (q_v.output_dim() != 2 * latent_dim || q_s.output_dim() != 2 * latent_dim) {
    throw ShapeError("DualVae: encoder output must be 2 x latent_dim");
  }
  if (p_v.input_dim() != latent_dim || p_s.input_dim() != latent_dim) {
    throw ShapeError("DualVae: decoder input must be latent_dim");
  }
  if (p_v.output_dim() != q_v.input_dim()) {
    throw ShapeError("DualVae: visual decoder output does not match visual dim");
  }
  if (p_s.output_dim() != q_s.input_dim()) {
    throw ShapeError("DualVae: semantic decoder output does not match attribute dim");
  }
}

DualVaeGrads DualVaeGrads::zeros_like(const DualVae& vae) {
  return {MlpGrads::zeros_like(vae.q_v), MlpGrads::zeros_like(vae.q_s),
          MlpGrads::zeros_like(vae.p_v), MlpGrads::zeros_like(vae.p_s)};
}

std::vector<std::span<float>> DualVaeGrads::parameters() {
  std::vector<std::span<float>> out;
  for (MlpGrads* g : {&q_v, &q_s, &p_v, &p_s}) {
    auto p = g->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<std::span<const float>> DualVaeGrads::parameters() const {
  std::vector<std::span<const float>> out;
  for (const MlpGrads* g : {&q_v, &q_s, &p_v, &p_s}) {
    auto p = g->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace gzsl::gml
