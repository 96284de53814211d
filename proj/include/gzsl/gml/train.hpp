#pragma once

#include <cstddef>
#include <vector>

#include "gzsl/datakit/dataset.hpp"
#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/objective.hpp"
#include "gzsl/numkit/adam.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::gml {

struct TrainSchedule {
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  numkit::AdamHyper adam;
  LossWeights weights;
};

struct TrainResult {
  DualVae model;
  /// Mean per-batch breakdown, one entry per epoch.
  std::vector<LossBreakdown> epoch_losses;
};

/// Trains all four networks jointly with Adam on sampled triplet batches.
/// An epoch is ceil(train rows / batch size) batches. All randomness
/// (sampling, reparameterization noise) comes from `rng`. Throws UsageError
/// with fewer than two seen classes and NumericError on a non-finite loss.
TrainResult train_gml(DualVae vae, const datakit::ZslDataset& dataset,
                      const TrainSchedule& schedule, numkit::Rng& rng);

}  // namespace gzsl::gml
