#pragma once

#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/types.hpp"

namespace gzsl::gml {

/// Standard-normal noise for one triplet batch: one draw per encoder, each
/// (3 * batch) x latent, rows ordered anchor, positive, negative.
struct GmlNoise {
  Matrix visual;
  Matrix semantic;

  static GmlNoise zeros(std::size_t batch, std::size_t latent_dim);
  static GmlNoise sample(std::size_t batch, std::size_t latent_dim, numkit::Rng& rng);
};

/// Multiplier applied to each raw term. `from_weights` gives the full
/// objective; zeroing all but one isolates a term (used by gradient checks).
struct ObjectiveCoefficients {
  double v_recon = 1.0;
  double v_kl = 1.0;
  double s_recon = 1.0;
  double s_kl = 1.0;
  double wasserstein = 1.0;
  double cross_recon = 1.0;
  double v_triplet = 0.1;
  double s_triplet = 0.1;
  double mul_triplet = 0.1;
  double margin = 5.0;

  static ObjectiveCoefficients from_weights(const LossWeights& w);
  static ObjectiveCoefficients none(double margin);
};

/// Raw (unweighted) value of every term plus the weighted total.
struct LossBreakdown {
  double v_recon = 0.0;
  double v_kl = 0.0;
  double s_recon = 0.0;
  double s_kl = 0.0;
  double wasserstein = 0.0;
  double cross_recon = 0.0;
  double v_triplet = 0.0;
  double s_triplet = 0.0;
  double mul_triplet = 0.0;
  double total = 0.0;
};

/// Evaluates the combined objective on a triplet batch. The reconstruction,
/// KL, alignment and cross-reconstruction terms average over all 3 * batch
/// rows (anchor, positive and negative members alike); triplet terms average
/// over the batch. Parameter gradients are accumulated into `grads` when given.
LossBreakdown evaluate_objective(const DualVae& vae, const TripletBatch& batch,
                                 const GmlNoise& noise, const ObjectiveCoefficients& coeffs,
                                 DualVaeGrads* grads = nullptr);

/// L_vVAE + L_sVAE + lambda W^2 + L_cross + w_trip (L_v-trip [+ L_s-trip] + L_mul-trip)
LossBreakdown total_gml_loss(const DualVae& vae, const TripletBatch& batch,
                             const LossWeights& weights, const GmlNoise& noise,
                             DualVaeGrads* grads = nullptr);

}  // namespace gzsl::gml
