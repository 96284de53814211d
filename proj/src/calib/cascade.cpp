#include "gzsl/calib/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gzsl/errors.hpp"
#include "gzsl/gml/losses.hpp"

namespace gzsl::calib {

std::string_view to_string(EntropyMode m) {
  return m == EntropyMode::RenormalizedSeen ? "renormalized-seen" : "full-distribution";
}

EntropyMode entropy_mode_from_string(std::string_view name) {
  if (name == "renormalized-seen") return EntropyMode::RenormalizedSeen;
  if (name == "full-distribution") return EntropyMode::FullDistribution;
  throw UsageError("unknown entropy mode '" + std::string(name) + "'");
}

std::string_view to_string(Route r) {
  return r == Route::SeenClassifier ? "seen-classifier" : "general-classifier";
}

double seen_entropy(std::span<const double> probs, std::span<const std::size_t> seen_positions,
                    EntropyMode mode) {
  if (seen_positions.empty()) throw UsageError("seen_entropy: empty seen set");
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  double h = 0.0;
  if (mode == EntropyMode::FullDistribution) {
    double total = 0.0;
    for (double p : probs) total += p;
    for (double p : probs) h += term(p / total);
    return std::max(0.0, h);
  }
  double mass = 0.0;
  for (std::size_t pos : seen_positions) {
    if (pos >= probs.size()) throw ShapeError("seen_entropy: seen position out of range");
    mass += probs[pos];
  }
  if (!(mass > 0.0)) {
    // All seen mass underflowed: the seen distribution is undefined, treat as
    // maximally uncertain.
    return std::log(static_cast<double>(seen_positions.size()));
  }
  for (std::size_t pos : seen_positions) h += term(probs[pos] / mass);
  return std::max(0.0, h);
}

void CascadeConfig::validate() const {
  if (std::isnan(tau) || tau < 0.0) throw UsageError("cascade tau must be >= 0");
}

CascadePredictor::CascadePredictor(const SoftmaxClassifier& general,
                                   const SoftmaxClassifier& seen_clf, const gml::DualVae& vae)
    : general_(&general), seen_clf_(&seen_clf), vae_(&vae) {
  general.validate();
  seen_clf.validate();
  if (general.input_dim() != vae.latent_dim) {
    throw UsageError("cascade: general classifier input is not the latent dim");
  }
  if (seen_clf.input_dim() != vae.visual_dim()) {
    throw UsageError("cascade: seen classifier input is not the visual dim");
  }
  for (int cls : seen_clf.class_ids) {
    const auto pos = general.position_of(cls);
    if (pos < 0) {
      throw UsageError("cascade: seen class " + std::to_string(cls) +
                       " is unknown to the general classifier");
    }
    seen_positions_.push_back(static_cast<std::size_t>(pos));
  }
  std::sort(seen_positions_.begin(), seen_positions_.end());
}

CascadePredictor::Scores CascadePredictor::score(const numkit::Matrix& visual,
                                                 EntropyMode mode) const {
  if (visual.cols() != vae_->visual_dim()) {
    throw UsageError("cascade: visual width " + std::to_string(visual.cols()) +
                     " does not match the model");
  }
  Scores s;
  const numkit::Matrix z = gml::encode(vae_->q_v, visual).mean;
  const numkit::Matrix logit = logits(*general_, z);
  s.seen_class = calib::predict(*seen_clf_, visual);
  std::vector<double> probs;
  for (std::size_t r = 0; r < logit.rows(); ++r) {
    auto row = logit.row(r);
    double peak = -INFINITY;
    for (float v : row) peak = std::max(peak, static_cast<double>(v));
    probs.assign(row.size(), 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      probs[k] = std::exp(static_cast<double>(row[k]) - peak);
      sum += probs[k];
    }
    for (double& p : probs) p /= sum;
    s.entropy.push_back(seen_entropy(probs, seen_positions_, mode));
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    s.general_class.push_back(general_->class_ids[static_cast<std::size_t>(best)]);
  }
  return s;
}

std::vector<Prediction> CascadePredictor::route(const Scores& scores, double tau) {
  std::vector<Prediction> out(scores.entropy.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].entropy = scores.entropy[i];
    if (scores.entropy[i] < tau) {
      out[i].route = Route::SeenClassifier;
      out[i].class_id = scores.seen_class[i];
    } else {
      out[i].route = Route::GeneralClassifier;
      out[i].class_id = scores.general_class[i];
    }
  }
  return out;
}

std::vector<Prediction> CascadePredictor::predict(const numkit::Matrix& visual,
                                                  const CascadeConfig& cfg) const {
  cfg.validate();
  return route(score(visual, cfg.entropy_mode), cfg.tau);
}

Prediction cascade_predict(const SoftmaxClassifier& general, const SoftmaxClassifier& seen_clf,
                           const gml::DualVae& vae, std::span<const float> x_visual,
                           const CascadeConfig& cfg) {
  const numkit::Matrix row(1, x_visual.size(), std::vector<float>(x_visual.begin(), x_visual.end()));
  return CascadePredictor(general, seen_clf, vae).predict(row, cfg).front();
}

}  // namespace gzsl::calib
