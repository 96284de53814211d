#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gzsl/gml/checkpoint.hpp"
#include "gzsl/numkit/adam.hpp"
#include "gzsl/numkit/matrix.hpp"

namespace gzsl::calib {

using numkit::Matrix;

/// Linear softmax over an ordered list of class ids.
struct SoftmaxClassifier {
  Matrix weight;  // input_dim x class count
  std::vector<float> bias;
  std::vector<int> class_ids;

  std::size_t input_dim() const { return weight.rows(); }
  std::size_t class_count() const { return class_ids.size(); }
  /// Position of `cls` in class_ids, or -1.
  std::ptrdiff_t position_of(int cls) const;
  void validate() const;

  friend bool operator==(const SoftmaxClassifier&, const SoftmaxClassifier&) = default;
};

struct SoftmaxTrainConfig {
  std::size_t steps = 300;
  numkit::AdamHyper adam{1e-2, 0.9, 0.999, 1e-8};
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;      // only used for mini-batch draws
};

/// Mean cross-entropy training from zero weights with Adam. Throws
/// ValidationError for labels outside class_ids and UsageError for fewer than
/// two classes, duplicate ids, or a class without samples.
SoftmaxClassifier train_softmax(const Matrix& features, std::span<const int> labels,
                                std::span<const int> class_ids,
                                const SoftmaxTrainConfig& config = {});

/// Class probabilities for one row, computed with max-shifted exponentials.
std::vector<double> softmax_probs(const SoftmaxClassifier& clf, std::span<const float> x);

/// Logits for every row of `x`.
Matrix logits(const SoftmaxClassifier& clf, const Matrix& x);

/// Arg-max class id per row (first maximum on ties).
std::vector<int> predict(const SoftmaxClassifier& clf, const Matrix& x);

/// Classifier section ("CLF1") for the model container; `role` names the
/// classifier, e.g. "general" or "seen".
gml::CheckpointSection encode_classifier(const std::string& role, const SoftmaxClassifier& clf);
/// Returns the role and classifier stored in a CLF1 section.
std::pair<std::string, SoftmaxClassifier> decode_classifier(const gml::CheckpointSection& section);

}  // namespace gzsl::calib
