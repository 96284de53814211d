#pragma once

#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/types.hpp"

// Loss primitives of the dual VAE. Every reduction is a mean over batch rows,
// so magnitudes do not depend on the batch size. Each value function has a
// matching `_grad` giving the derivative with respect to its inputs.

namespace gzsl::gml {

/// Runs an encoder and splits its output into (mean, log-variance) halves.
GaussianParams encode(const MlpNet& encoder, const Matrix& batch);

/// z = mean + exp(log_variance / 2) * noise
LatentBatch reparameterize(const GaussianParams& gp, const Matrix& noise, Modality source);

/// Batch mean of 1/2 sum_i (mu_i^2 + sigma_i^2 - 1 - ln sigma_i^2).
double kl_to_standard_normal(const GaussianParams& gp);
GaussianParams kl_to_standard_normal_grad(const GaussianParams& gp);

/// Squared 2-Wasserstein distance between diagonal Gaussians, batch mean of
/// ||mu_a - mu_b||^2 + sum_i (sd_a,i - sd_b,i)^2.
double wasserstein2_diag(const GaussianParams& a, const GaussianParams& b);

struct GaussianPairGrad {
  GaussianParams a;
  GaussianParams b;
};
GaussianPairGrad wasserstein2_diag_grad(const GaussianParams& a, const GaussianParams& b);

/// Batch mean of max(||a - p||^2 - ||a - n||^2 + alpha, 0).
double triplet_loss(const LatentBatch& anchor, const LatentBatch& positive,
                    const LatentBatch& negative, double alpha);

struct TripletGrad {
  Matrix anchor;
  Matrix positive;
  Matrix negative;
};
TripletGrad triplet_loss_grad(const LatentBatch& anchor, const LatentBatch& positive,
                              const LatentBatch& negative, double alpha);

/// Anchor, positive and negative codes from one encoder.
struct TripletLatents {
  LatentBatch anchor;
  LatentBatch positive;
  LatentBatch negative;
};

/// Sum of the six cross-modal hinge terms: every (anchor, positive, negative)
/// modality assignment in {visual, semantic}^3 except the two single-modality
/// ones.
double multimodal_triplet_loss(const TripletLatents& visual, const TripletLatents& semantic,
                               double alpha);

struct MultimodalTripletGrad {
  TripletGrad visual;
  TripletGrad semantic;
};
MultimodalTripletGrad multimodal_triplet_loss_grad(const TripletLatents& visual,
                                                   const TripletLatents& semantic, double alpha);

/// Batch mean of ||P_v(z_s) - x||_1 + ||P_s(z_v) - s||_1.
double cross_reconstruction_loss(const Matrix& x, const Matrix& s, const LatentBatch& z_v,
                                 const LatentBatch& z_s, const DualVae& vae);

/// L1 self-reconstruction of one side plus beta * KL, where beta is beta1 for
/// the visual side and beta2 for the semantic side. Accumulates parameter
/// gradients into `grads` when given.
double vae_loss(const DualVae& vae, Modality side, const Matrix& batch, const Matrix& noise,
                const LossWeights& weights, DualVaeGrads* grads = nullptr);

}  // namespace gzsl::gml
