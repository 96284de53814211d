#include "gzsl/gml/losses.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gzsl/errors.hpp"
#include "loss_kernels.hpp"

namespace gzsl::gml {

using numkit::mlp_backward;
using numkit::mlp_forward;

GaussianParams encode(const MlpNet& encoder, const Matrix& batch) {
  const Matrix out = numkit::mlp_apply(encoder, batch);
  if (out.cols() % 2 != 0) throw ShapeError("encode: encoder output width is odd");
  const std::size_t latent = out.cols() / 2;
  return {numkit::slice_cols(out, 0, latent), numkit::slice_cols(out, latent, latent)};
}

LatentBatch reparameterize(const GaussianParams& gp, const Matrix& noise, Modality source) {
  gp.validate();
  numkit::require_same_shape(gp.mean, noise, "reparameterize");
  Matrix z = gp.mean;
  auto zv = z.values();
  auto lv = gp.log_variance.values();
  auto eps = noise.values();
  for (std::size_t i = 0; i < zv.size(); ++i) {
    zv[i] = static_cast<float>(zv[i] + std::exp(0.5 * static_cast<double>(lv[i])) * eps[i]);
  }
  return {std::move(z), source};
}

double kl_to_standard_normal(const GaussianParams& gp) {
  gp.validate();
  return detail::kl_rows(gp.mean, gp.log_variance, 0.0, nullptr, nullptr);
}

GaussianParams kl_to_standard_normal_grad(const GaussianParams& gp) {
  gp.validate();
  GaussianParams g{Matrix(gp.rows(), gp.latent_dim()), Matrix(gp.rows(), gp.latent_dim())};
  detail::kl_rows(gp.mean, gp.log_variance, 1.0, &g.mean, &g.log_variance);
  return g;
}

double wasserstein2_diag(const GaussianParams& a, const GaussianParams& b) {
  a.validate();
  b.validate();
  return detail::w2_rows(a.mean, a.log_variance, b.mean, b.log_variance, 0.0, nullptr, nullptr,
                         nullptr, nullptr);
}

GaussianPairGrad wasserstein2_diag_grad(const GaussianParams& a, const GaussianParams& b) {
  a.validate();
  b.validate();
  const std::size_t n = a.rows(), d = a.latent_dim();
  GaussianPairGrad g{{Matrix(n, d), Matrix(n, d)}, {Matrix(n, d), Matrix(n, d)}};
  detail::w2_rows(a.mean, a.log_variance, b.mean, b.log_variance, 1.0, &g.a.mean,
                  &g.a.log_variance, &g.b.mean, &g.b.log_variance);
  return g;
}

namespace {

void require_triplet_shapes(const Matrix& a, const Matrix& p, const Matrix& n) {
  numkit::require_same_shape(a, p, "triplet_loss anchor/positive");
  numkit::require_same_shape(a, n, "triplet_loss anchor/negative");
}

}  // namespace

double triplet_loss(const LatentBatch& anchor, const LatentBatch& positive,
                    const LatentBatch& negative, double alpha) {
  require_triplet_shapes(anchor.z, positive.z, negative.z);
  return detail::triplet_rows({&anchor.z, 0, nullptr}, {&positive.z, 0, nullptr},
                              {&negative.z, 0, nullptr}, anchor.z.rows(), alpha, 0.0);
}

TripletGrad triplet_loss_grad(const LatentBatch& anchor, const LatentBatch& positive,
                              const LatentBatch& negative, double alpha) {
  require_triplet_shapes(anchor.z, positive.z, negative.z);
  const std::size_t n = anchor.z.rows(), d = anchor.z.cols();
  TripletGrad g{Matrix(n, d), Matrix(n, d), Matrix(n, d)};
  detail::triplet_rows({&anchor.z, 0, &g.anchor}, {&positive.z, 0, &g.positive},
                       {&negative.z, 0, &g.negative}, n, alpha, 1.0);
  return g;
}

namespace {

void require_modalities(const TripletLatents& visual, const TripletLatents& semantic) {
  for (const LatentBatch* z : {&visual.anchor, &visual.positive, &visual.negative}) {
    if (z->source != Modality::Visual) {
      throw UsageError("multimodal_triplet_loss: visual slot holds a semantic latent");
    }
  }
  for (const LatentBatch* z : {&semantic.anchor, &semantic.positive, &semantic.negative}) {
    if (z->source != Modality::Semantic) {
      throw UsageError("multimodal_triplet_loss: semantic slot holds a visual latent");
    }
  }
  const Matrix& ref = visual.anchor.z;
  for (const LatentBatch* z : {&visual.positive, &visual.negative, &semantic.anchor,
                               &semantic.positive, &semantic.negative}) {
    numkit::require_same_shape(ref, z->z, "multimodal_triplet_loss");
  }
}

double multimodal_impl(const TripletLatents& visual, const TripletLatents& semantic,
                       double alpha, MultimodalTripletGrad* grad) {
  require_modalities(visual, semantic);
  const std::array<const TripletLatents*, 2> lat{&visual, &semantic};
  std::array<TripletGrad*, 2> g{nullptr, nullptr};
  if (grad != nullptr) g = {&grad->visual, &grad->semantic};
  const std::size_t count = visual.anchor.z.rows();
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int m = 0; m < 2; ++m) {
        if (i == j && j == m) continue;
        total += detail::triplet_rows(
            {&lat[i]->anchor.z, 0, g[i] ? &g[i]->anchor : nullptr},
            {&lat[j]->positive.z, 0, g[j] ? &g[j]->positive : nullptr},
            {&lat[m]->negative.z, 0, g[m] ? &g[m]->negative : nullptr}, count, alpha,
            grad != nullptr ? 1.0 : 0.0);
      }
    }
  }
  return total;
}

}  // namespace

double multimodal_triplet_loss(const TripletLatents& visual, const TripletLatents& semantic,
                               double alpha) {
  return multimodal_impl(visual, semantic, alpha, nullptr);
}

MultimodalTripletGrad multimodal_triplet_loss_grad(const TripletLatents& visual,
                                                   const TripletLatents& semantic, double alpha) {
  require_modalities(visual, semantic);
  const std::size_t n = visual.anchor.z.rows(), d = visual.anchor.z.cols();
  auto zeros = [&] { return TripletGrad{Matrix(n, d), Matrix(n, d), Matrix(n, d)}; };
  MultimodalTripletGrad g{zeros(), zeros()};
  multimodal_impl(visual, semantic, alpha, &g);
  return g;
}

double cross_reconstruction_loss(const Matrix& x, const Matrix& s, const LatentBatch& z_v,
                                 const LatentBatch& z_s, const DualVae& vae) {
  if (z_v.source != Modality::Visual) {
    throw UsageError("cross_reconstruction_loss: z_v was not produced by the visual encoder");
  }
  if (z_s.source != Modality::Semantic) {
    throw UsageError("cross_reconstruction_loss: z_s was not produced by the semantic encoder");
  }
  if (z_v.z.rows() != x.rows() || z_s.z.rows() != s.rows() || x.rows() != s.rows()) {
    throw ShapeError("cross_reconstruction_loss: batch sizes differ");
  }
  const Matrix x_hat = numkit::mlp_apply(vae.p_v, z_s.z);
  const Matrix s_hat = numkit::mlp_apply(vae.p_s, z_v.z);
  return detail::l1_rows(x_hat, x, 0.0, nullptr) + detail::l1_rows(s_hat, s, 0.0, nullptr);
}

double vae_loss(const DualVae& vae, Modality side, const Matrix& batch, const Matrix& noise,
                const LossWeights& weights, DualVaeGrads* grads) {
  weights.validate();
  const bool visual = side == Modality::Visual;
  const MlpNet& encoder = visual ? vae.q_v : vae.q_s;
  const MlpNet& decoder = visual ? vae.p_v : vae.p_s;
  const double beta = visual ? weights.beta1 : weights.beta2;
  if (batch.cols() != encoder.input_dim()) {
    throw ShapeError("vae_loss: batch width " + std::to_string(batch.cols()) +
                     " does not match the " + std::string(to_string(side)) + " encoder");
  }

  const auto enc = mlp_forward(encoder, batch);
  const std::size_t latent = vae.latent_dim;
  GaussianParams gp{numkit::slice_cols(enc.output, 0, latent),
                    numkit::slice_cols(enc.output, latent, latent)};
  const LatentBatch z = reparameterize(gp, noise, side);
  const auto dec = mlp_forward(decoder, z.z);

  const std::size_t n = batch.rows(), out_dim = dec.output.cols();
  Matrix grad_rec(n, out_dim);
  Matrix grad_mean(n, latent), grad_lv(n, latent);
  const double want = grads != nullptr ? 1.0 : 0.0;
  const double recon = detail::l1_rows(dec.output, batch, want, &grad_rec);
  const double kl = detail::kl_rows(gp.mean, gp.log_variance, want * beta, &grad_mean, &grad_lv);

  if (grads != nullptr) {
    const auto dec_back = mlp_backward(decoder, dec.cache, grad_rec);
    (visual ? grads->p_v : grads->p_s).accumulate(dec_back.param_grads);
    const Matrix& dz = dec_back.grad_input;
    for (std::size_t i = 0; i < dz.size(); ++i) {
      const double sd = std::exp(0.5 * static_cast<double>(gp.log_variance.values()[i]));
      grad_mean.values()[i] += dz.values()[i];
      grad_lv.values()[i] +=
          static_cast<float>(static_cast<double>(dz.values()[i]) * noise.values()[i] * 0.5 * sd);
    }
    const auto enc_back = mlp_backward(encoder, enc.cache, numkit::hstack(grad_mean, grad_lv));
    (visual ? grads->q_v : grads->q_s).accumulate(enc_back.param_grads);
  }
  return recon + beta * kl;
}

}  // namespace gzsl::gml
