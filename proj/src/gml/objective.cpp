#include "gzsl/gml/objective.hpp"

#include <array>
#include <cmath>

#include "gzsl/errors.hpp"
#include "gzsl/gml/losses.hpp"
#include "loss_kernels.hpp"

namespace gzsl::gml {

using numkit::mlp_backward;
using numkit::mlp_forward;

GmlNoise GmlNoise::zeros(std::size_t batch, std::size_t latent_dim) {
  return {Matrix(3 * batch, latent_dim), Matrix(3 * batch, latent_dim)};
}

GmlNoise GmlNoise::sample(std::size_t batch, std::size_t latent_dim, numkit::Rng& rng) {
  Matrix v = numkit::standard_normal(3 * batch, latent_dim, rng);
  Matrix s = numkit::standard_normal(3 * batch, latent_dim, rng);
  return {std::move(v), std::move(s)};
}

ObjectiveCoefficients ObjectiveCoefficients::from_weights(const LossWeights& w) {
  w.validate();
  ObjectiveCoefficients c;
  c.v_recon = 1.0;
  c.v_kl = w.beta1;
  c.s_recon = 1.0;
  c.s_kl = w.beta2;
  c.wasserstein = w.lambda_w;
  c.cross_recon = 1.0;
  c.v_triplet = w.triplet_weight;
  c.s_triplet = w.include_s_triplet ? w.triplet_weight : 0.0;
  c.mul_triplet = w.triplet_weight;
  c.margin = w.margin_alpha;
  return c;
}

ObjectiveCoefficients ObjectiveCoefficients::none(double margin) {
  ObjectiveCoefficients c;
  c.v_recon = c.v_kl = c.s_recon = c.s_kl = c.wasserstein = c.cross_recon = 0.0;
  c.v_triplet = c.s_triplet = c.mul_triplet = 0.0;
  c.margin = margin;
  return c;
}

namespace {

struct EncoderPass {
  numkit::MlpForward fwd;
  Matrix mean;
  Matrix log_var;
  Matrix z;
};

EncoderPass run_encoder(const MlpNet& encoder, const Matrix& input, const Matrix& noise,
                        std::size_t latent) {
  EncoderPass e;
  e.fwd = mlp_forward(encoder, input);
  e.mean = numkit::slice_cols(e.fwd.output, 0, latent);
  e.log_var = numkit::slice_cols(e.fwd.output, latent, latent);
  numkit::require_same_shape(e.mean, noise, "objective noise");
  e.z = reparameterize({e.mean, e.log_var}, noise, Modality::Visual).z;
  return e;
}

// Pushes d(loss)/dz, d/dmean and d/dlogvar back through the reparameterization
// and the encoder.
numkit::MlpGrads backprop_encoder(const MlpNet& encoder, const EncoderPass& e, const Matrix& noise,
                                  const Matrix& grad_z, Matrix grad_mean, Matrix grad_lv) {
  for (std::size_t i = 0; i < grad_z.size(); ++i) {
    const double dz = grad_z.values()[i];
    const double sd = std::exp(0.5 * static_cast<double>(e.log_var.values()[i]));
    grad_mean.values()[i] += static_cast<float>(dz);
    grad_lv.values()[i] += static_cast<float>(dz * noise.values()[i] * 0.5 * sd);
  }
  return mlp_backward(encoder, e.fwd.cache, numkit::hstack(grad_mean, grad_lv)).param_grads;
}

}  // namespace

LossBreakdown evaluate_objective(const DualVae& vae, const TripletBatch& batch,
                                 const GmlNoise& noise, const ObjectiveCoefficients& coeffs,
                                 DualVaeGrads* grads) {
  vae.validate();
  batch.validate();
  const std::size_t b = batch.size();
  const std::size_t latent = vae.latent_dim;
  if (noise.visual.rows() != 3 * b || noise.semantic.rows() != 3 * b) {
    throw ShapeError("evaluate_objective: noise must have 3 x batch rows");
  }

  const std::array<Matrix, 3> xs{batch.anchor.visual, batch.positive.visual,
                                 batch.negative.visual};
  const std::array<Matrix, 3> ss{batch.anchor.semantic, batch.positive.semantic,
                                 batch.negative.semantic};
  const Matrix x = numkit::vstack(xs);
  const Matrix s = numkit::vstack(ss);
  if (x.cols() != vae.visual_dim() || s.cols() != vae.attribute_dim()) {
    throw ShapeError("evaluate_objective: batch widths do not match the model");
  }

  const EncoderPass ev = run_encoder(vae.q_v, x, noise.visual, latent);
  const EncoderPass es = run_encoder(vae.q_s, s, noise.semantic, latent);
  const auto rec_v = mlp_forward(vae.p_v, ev.z);
  const auto rec_s = mlp_forward(vae.p_s, es.z);
  const auto cross_v = mlp_forward(vae.p_v, es.z);  // visual from semantic code
  const auto cross_s = mlp_forward(vae.p_s, ev.z);  // semantic from visual code

  const bool want = grads != nullptr;
  const std::size_t n = x.rows();
  Matrix g_rec_v(n, x.cols()), g_cross_v(n, x.cols());
  Matrix g_rec_s(n, s.cols()), g_cross_s(n, s.cols());
  Matrix g_mean_v(n, latent), g_lv_v(n, latent), g_z_v(n, latent);
  Matrix g_mean_s(n, latent), g_lv_s(n, latent), g_z_s(n, latent);
  auto k = [want](double c) { return want ? c : 0.0; };

  LossBreakdown out;
  out.v_recon = detail::l1_rows(rec_v.output, x, k(coeffs.v_recon), &g_rec_v);
  out.s_recon = detail::l1_rows(rec_s.output, s, k(coeffs.s_recon), &g_rec_s);
  out.v_kl = detail::kl_rows(ev.mean, ev.log_var, k(coeffs.v_kl), &g_mean_v, &g_lv_v);
  out.s_kl = detail::kl_rows(es.mean, es.log_var, k(coeffs.s_kl), &g_mean_s, &g_lv_s);
  out.wasserstein = detail::w2_rows(ev.mean, ev.log_var, es.mean, es.log_var,
                                    k(coeffs.wasserstein), &g_mean_v, &g_lv_v, &g_mean_s, &g_lv_s);
  out.cross_recon = detail::l1_rows(cross_v.output, x, k(coeffs.cross_recon), &g_cross_v) +
                    detail::l1_rows(cross_s.output, s, k(coeffs.cross_recon), &g_cross_s);

  // Rows [0, b) anchors, [b, 2b) positives, [2b, 3b) negatives.
  const std::array<const Matrix*, 2> z{&ev.z, &es.z};
  const std::array<Matrix*, 2> gz{&g_z_v, &g_z_s};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int m = 0; m < 2; ++m) {
        const bool single = i == j && j == m;
        const double c = single ? (i == 0 ? coeffs.v_triplet : coeffs.s_triplet)
                                : coeffs.mul_triplet;
        const double value = detail::triplet_rows({z[i], 0, gz[i]}, {z[j], b, gz[j]},
                                                  {z[m], 2 * b, gz[m]}, b, coeffs.margin, k(c));
        if (!single) {
          out.mul_triplet += value;
        } else if (i == 0) {
          out.v_triplet = value;
        } else {
          out.s_triplet = value;
        }
      }
    }
  }

  out.total = coeffs.v_recon * out.v_recon + coeffs.v_kl * out.v_kl +
              coeffs.s_recon * out.s_recon + coeffs.s_kl * out.s_kl +
              coeffs.wasserstein * out.wasserstein + coeffs.cross_recon * out.cross_recon +
              coeffs.v_triplet * out.v_triplet + coeffs.s_triplet * out.s_triplet +
              coeffs.mul_triplet * out.mul_triplet;

  if (!want) return out;

  // Each decoder ran twice; its parameter gradients sum over both passes.
  const auto b_rec_v = mlp_backward(vae.p_v, rec_v.cache, g_rec_v);
  const auto b_cross_v = mlp_backward(vae.p_v, cross_v.cache, g_cross_v);
  const auto b_rec_s = mlp_backward(vae.p_s, rec_s.cache, g_rec_s);
  const auto b_cross_s = mlp_backward(vae.p_s, cross_s.cache, g_cross_s);
  grads->p_v.accumulate(b_rec_v.param_grads);
  grads->p_v.accumulate(b_cross_v.param_grads);
  grads->p_s.accumulate(b_rec_s.param_grads);
  grads->p_s.accumulate(b_cross_s.param_grads);

  numkit::add_in_place(g_z_v, b_rec_v.grad_input);
  numkit::add_in_place(g_z_v, b_cross_s.grad_input);
  numkit::add_in_place(g_z_s, b_rec_s.grad_input);
  numkit::add_in_place(g_z_s, b_cross_v.grad_input);

  grads->q_v.accumulate(
      backprop_encoder(vae.q_v, ev, noise.visual, g_z_v, std::move(g_mean_v), std::move(g_lv_v)));
  grads->q_s.accumulate(backprop_encoder(vae.q_s, es, noise.semantic, g_z_s, std::move(g_mean_s),
                                         std::move(g_lv_s)));
  return out;
}

LossBreakdown total_gml_loss(const DualVae& vae, const TripletBatch& batch,
                             const LossWeights& weights, const GmlNoise& noise,
                             DualVaeGrads* grads) {
  return evaluate_objective(vae, batch, noise, ObjectiveCoefficients::from_weights(weights),
                            grads);
}

}  // namespace gzsl::gml
