#include "gzsl/gml/train.hpp"

#include <cmath>
#include <string>

#include "gzsl/datakit/sampling.hpp"
#include "gzsl/errors.hpp"

namespace gzsl::gml {

TrainResult train_gml(DualVae vae, const datakit::ZslDataset& dataset,
                      const TrainSchedule& schedule, numkit::Rng& rng) {
  if (dataset.seen_classes.size() < 2) {
    throw UsageError("train_gml: need at least two seen classes to form negatives");
  }
  if (schedule.batch_size == 0) throw UsageError("train_gml: batch size must be positive");
  schedule.weights.validate();
  vae.validate();
  if (vae.visual_dim() != dataset.visual_dim() || vae.attribute_dim() != dataset.attribute_dim()) {
    throw ShapeError("train_gml: model dims do not match the dataset");
  }

  TrainResult result;
  if (schedule.epochs == 0) {
    result.model = std::move(vae);
    return result;
  }

  const datakit::TripletSampler sampler(dataset);
  const auto coeffs = ObjectiveCoefficients::from_weights(schedule.weights);
  auto state = numkit::AdamState::for_blocks(schedule.adam, vae.parameters());
  const std::size_t rows = dataset.train_index.size();
  const std::size_t batches = std::max<std::size_t>(1, (rows + schedule.batch_size - 1) / schedule.batch_size);

  for (std::size_t epoch = 0; epoch < schedule.epochs; ++epoch) {
    LossBreakdown sum;
    for (std::size_t step = 0; step < batches; ++step) {
      const TripletBatch batch = sampler.sample(schedule.batch_size, rng);
      const GmlNoise noise = GmlNoise::sample(batch.size(), vae.latent_dim, rng);
      DualVaeGrads grads = DualVaeGrads::zeros_like(vae);
      const LossBreakdown loss = evaluate_objective(vae, batch, noise, coeffs, &grads);
      if (!std::isfinite(loss.total)) {
        throw NumericError("train_gml: non-finite loss at epoch " + std::to_string(epoch));
      }
      const auto params = vae.parameters();
      const auto grad_blocks = grads.parameters();
      std::vector<std::span<const float>> const_grads(grad_blocks.begin(), grad_blocks.end());
      numkit::adam_step(params, const_grads, state);

      sum.v_recon += loss.v_recon;
      sum.v_kl += loss.v_kl;
      sum.s_recon += loss.s_recon;
      sum.s_kl += loss.s_kl;
      sum.wasserstein += loss.wasserstein;
      sum.cross_recon += loss.cross_recon;
      sum.v_triplet += loss.v_triplet;
      sum.s_triplet += loss.s_triplet;
      sum.mul_triplet += loss.mul_triplet;
      sum.total += loss.total;
    }
    const double inv = 1.0 / static_cast<double>(batches);
    for (double* v : {&sum.v_recon, &sum.v_kl, &sum.s_recon, &sum.s_kl, &sum.wasserstein,
                      &sum.cross_recon, &sum.v_triplet, &sum.s_triplet, &sum.mul_triplet,
                      &sum.total}) {
      *v *= inv;
    }
    result.epoch_losses.push_back(sum);
  }
  for (const auto block : vae.parameters()) {
    for (float v : block) {
      if (!std::isfinite(v)) throw NumericError("train_gml: parameters diverged");
    }
  }
  result.model = std::move(vae);
  return result;
}

}  // namespace gzsl::gml
