#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gzsl/calib/cascade.hpp"
#include "gzsl/calib/softmax.hpp"
#include "gzsl/datakit/dataset.hpp"
#include "gzsl/datakit/latent_set.hpp"
#include "gzsl/evalkit/metrics.hpp"
#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/train.hpp"

namespace gzsl::evalkit {

/// Everything needed to train the model and both classifiers from a dataset.
/// Visual and attribute widths in `shape` are taken from the dataset.
struct ExperimentRecipe {
  gml::DualVaeShape shape;
  gml::TrainSchedule schedule;
  std::size_t n_seen = 200;
  std::size_t n_unseen = 400;
  datakit::LatentMode latent_mode = datakit::LatentMode::Sampled;
  calib::SoftmaxTrainConfig classifier;
  std::size_t zsl_per_class = 400;  // 0 skips the unseen-only classifier
  std::uint64_t seed = 0;
};

struct TrainedArtifacts {
  gml::DualVae vae;
  calib::SoftmaxClassifier general;  // latent features, all classes
  calib::SoftmaxClassifier seen;     // raw visual features, seen classes
  std::optional<calib::SoftmaxClassifier> zsl;  // latent features, unseen classes
  std::vector<gml::LossBreakdown> epoch_losses;
};

/// Runs the whole training chain from one generator seeded with recipe.seed.
TrainedArtifacts train_artifacts(const ExperimentRecipe& recipe,
                                 const datakit::ZslDataset& dataset);

struct Evaluation {
  double tau = 0.0;
  MetricsReport metrics;
  std::vector<calib::Prediction> predictions;  // one per test row
  std::size_t seen_routed = 0;
};

/// Scores the dataset's test rows once; evaluation at any tau then only
/// re-applies the routing rule.
class CascadeEvaluator {
 public:
  CascadeEvaluator(const TrainedArtifacts& artifacts, const datakit::ZslDataset& dataset,
                   calib::EntropyMode mode);

  Evaluation evaluate(double tau) const;

  const std::vector<int>& labels() const { return labels_; }
  std::vector<bool> seen_flags() const;
  const calib::CascadePredictor::Scores& scores() const { return scores_; }
  std::optional<double> zsl_accuracy() const { return zsl_acc_; }

 private:
  const datakit::ZslDataset* dataset_;
  std::vector<int> labels_;
  calib::CascadePredictor::Scores scores_;
  std::optional<double> zsl_acc_;
};

struct TauChoice {
  double tau = 0.0;
  Evaluation evaluation;
};

/// Grid value with the largest harmonic mean; the first one wins ties.
/// Throws UsageError for an empty grid.
TauChoice tune_tau(const CascadeEvaluator& evaluator, std::span<const double> grid);

/// Default tuning grid: 0 to ln(seen count) + 0.05 in steps of 0.01.
std::vector<double> default_tau_grid(std::size_t seen_count);

}  // namespace gzsl::evalkit
