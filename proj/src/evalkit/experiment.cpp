#include "gzsl/evalkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gzsl/errors.hpp"
#include "gzsl/gml/losses.hpp"

namespace gzsl::evalkit {

using numkit::Matrix;

namespace {

std::vector<int> all_classes(const datakit::ZslDataset& ds) {
  std::vector<int> ids(ds.num_classes());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

// Unseen-only classifier over semantic-encoder latents, n per class.
calib::SoftmaxClassifier train_zsl_classifier(const gml::DualVae& vae,
                                              const datakit::ZslDataset& ds, std::size_t n,
                                              datakit::LatentMode mode,
                                              const calib::SoftmaxTrainConfig& cfg,
                                              numkit::Rng& rng) {
  Matrix attrs(n * ds.unseen_classes.size(), ds.attribute_dim());
  std::vector<int> labels;
  std::size_t r = 0;
  for (int cls : ds.unseen_classes) {
    auto src = ds.attributes.row(static_cast<std::size_t>(cls));
    for (std::size_t k = 0; k < n; ++k, ++r) {
      std::copy(src.begin(), src.end(), attrs.row(r).begin());
      labels.push_back(cls);
    }
  }
  const Matrix z = datakit::encode_latents(vae.q_s, attrs, mode, rng);
  return calib::train_softmax(z, labels, ds.unseen_classes, cfg);
}

}  // namespace

TrainedArtifacts train_artifacts(const ExperimentRecipe& recipe,
                                 const datakit::ZslDataset& dataset) {
  dataset.validate();
  numkit::Rng rng(recipe.seed);
  gml::DualVaeShape shape = recipe.shape;
  shape.visual_dim = dataset.visual_dim();
  shape.attribute_dim = dataset.attribute_dim();

  TrainedArtifacts out;
  auto trained = gml::train_gml(gml::DualVae::create(shape, rng), dataset, recipe.schedule, rng);
  out.vae = std::move(trained.model);
  out.epoch_losses = std::move(trained.epoch_losses);

  const auto latent_set = datakit::build_latent_train_set(out.vae, dataset, recipe.n_seen,
                                                          recipe.n_unseen, recipe.latent_mode, rng);
  const auto ids = all_classes(dataset);
  out.general = calib::train_softmax(latent_set.latents, latent_set.labels, ids, recipe.classifier);

  const Matrix train_visual = numkit::gather_rows(dataset.visual, dataset.train_index);
  std::vector<int> train_labels;
  for (std::size_t i : dataset.train_index) train_labels.push_back(dataset.labels[i]);
  out.seen = calib::train_softmax(train_visual, train_labels, dataset.seen_classes,
                                  recipe.classifier);

  if (recipe.zsl_per_class > 0 && dataset.unseen_classes.size() >= 2) {
    out.zsl = train_zsl_classifier(out.vae, dataset, recipe.zsl_per_class, recipe.latent_mode,
                                   recipe.classifier, rng);
  }
  return out;
}

CascadeEvaluator::CascadeEvaluator(const TrainedArtifacts& artifacts,
                                   const datakit::ZslDataset& dataset, calib::EntropyMode mode)
    : dataset_(&dataset) {
  if (dataset.test_index.empty()) throw UsageError("evaluation needs test rows");
  const Matrix test_visual = numkit::gather_rows(dataset.visual, dataset.test_index);
  for (std::size_t i : dataset.test_index) labels_.push_back(dataset.labels[i]);
  const calib::CascadePredictor predictor(artifacts.general, artifacts.seen, artifacts.vae);
  scores_ = predictor.score(test_visual, mode);

  if (artifacts.zsl) {
    std::vector<std::size_t> unseen_rows;
    std::vector<int> unseen_labels;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      if (dataset.is_unseen(labels_[k])) {
        unseen_rows.push_back(k);
        unseen_labels.push_back(labels_[k]);
      }
    }
    if (!unseen_rows.empty()) {
      const Matrix z =
          gml::encode(artifacts.vae.q_v, numkit::gather_rows(test_visual, unseen_rows)).mean;
      zsl_acc_ = per_class_top1(calib::predict(*artifacts.zsl, z), unseen_labels,
                                dataset.unseen_classes);
    }
  }
}

std::vector<bool> CascadeEvaluator::seen_flags() const {
  std::vector<bool> flags;
  for (int l : labels_) flags.push_back(dataset_->is_seen(l));
  return flags;
}

Evaluation CascadeEvaluator::evaluate(double tau) const {
  calib::CascadeConfig{tau, calib::EntropyMode::RenormalizedSeen}.validate();
  Evaluation ev;
  ev.tau = tau;
  ev.predictions = calib::CascadePredictor::route(scores_, tau);
  std::vector<int> predicted;
  for (const auto& p : ev.predictions) {
    predicted.push_back(p.class_id);
    if (p.route == calib::Route::SeenClassifier) ++ev.seen_routed;
  }
  ev.metrics = compute_metrics(predicted, labels_, dataset_->seen_classes,
                               dataset_->unseen_classes);
  ev.metrics.zsl_acc = zsl_acc_;
  return ev;
}

TauChoice tune_tau(const CascadeEvaluator& evaluator, std::span<const double> grid) {
  if (grid.empty()) throw UsageError("tune_tau: empty grid");
  std::optional<TauChoice> best;
  for (double tau : grid) {
    Evaluation ev = evaluator.evaluate(tau);
    if (!best || ev.metrics.harmonic > best->evaluation.metrics.harmonic) {
      best = TauChoice{tau, std::move(ev)};
    }
  }
  return std::move(*best);
}

std::vector<double> default_tau_grid(std::size_t seen_count) {
  if (seen_count == 0) throw UsageError("default_tau_grid: no seen classes");
  const double top = std::log(static_cast<double>(seen_count)) + 0.05;
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = 0.01 * static_cast<double>(i);
    if (v > top) break;
    grid.push_back(v);
  }
  return grid;
}

}  // namespace gzsl::evalkit
