#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "gzsl/calib/softmax.hpp"
#include "gzsl/gml/dual_vae.hpp"

namespace gzsl::calib {

enum class EntropyMode {
  RenormalizedSeen,  // restrict to seen classes and renormalize
  FullDistribution,  // entropy of the whole softmax output
};

std::string_view to_string(EntropyMode m);
EntropyMode entropy_mode_from_string(std::string_view name);

/// Shannon entropy in nats. `seen_positions` index into `probs`.
double seen_entropy(std::span<const double> probs, std::span<const std::size_t> seen_positions,
                    EntropyMode mode = EntropyMode::RenormalizedSeen);

struct CascadeConfig {
  double tau = 2.7;  // nats
  EntropyMode entropy_mode = EntropyMode::RenormalizedSeen;

  void validate() const;
};

enum class Route { SeenClassifier, GeneralClassifier };

std::string_view to_string(Route r);

struct Prediction {
  int class_id = -1;
  Route route = Route::GeneralClassifier;
  double entropy = 0.0;
};

/// Two-stage predictor. The visual feature is mean-encoded by the visual
/// encoder and scored by the general classifier; when the seen-class entropy
/// is strictly below tau the raw feature goes to the seen classifier,
/// otherwise the general arg-max over all classes is returned.
class CascadePredictor {
 public:
  /// Throws UsageError when the classifiers do not fit the model or the seen
  /// classifier knows a class the general one lacks.
  CascadePredictor(const SoftmaxClassifier& general, const SoftmaxClassifier& seen_clf,
                   const gml::DualVae& vae);

  std::vector<Prediction> predict(const numkit::Matrix& visual, const CascadeConfig& cfg) const;

  /// Entropy and general-classifier arg-max per row; tau-independent, so a
  /// threshold sweep computes these once.
  struct Scores {
    std::vector<double> entropy;
    std::vector<int> general_class;
    std::vector<int> seen_class;
  };
  Scores score(const numkit::Matrix& visual, EntropyMode mode) const;

  /// Applies the routing rule to precomputed scores.
  static std::vector<Prediction> route(const Scores& scores, double tau);

  const std::vector<std::size_t>& seen_positions() const { return seen_positions_; }

 private:
  const SoftmaxClassifier* general_;
  const SoftmaxClassifier* seen_clf_;
  const gml::DualVae* vae_;
  std::vector<std::size_t> seen_positions_;
};

Prediction cascade_predict(const SoftmaxClassifier& general, const SoftmaxClassifier& seen_clf,
                           const gml::DualVae& vae, std::span<const float> x_visual,
                           const CascadeConfig& cfg);

}  // namespace gzsl::calib
