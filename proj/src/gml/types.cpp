#include "gzsl/gml/types.hpp"

#include <cmath>
#include <string>

#include "gzsl/errors.hpp"

namespace gzsl::gml {

std::string_view to_string(Modality m) {
  return m == Modality::Visual ? "visual" : "semantic";
}

void GaussianParams::validate() const {
  numkit::require_same_shape(mean, log_variance, "GaussianParams");
  if (!log_variance.all_finite()) throw NumericError("GaussianParams: non-finite log-variance");
}

void LossWeights::validate() const {
  const double values[] = {beta1, beta2, lambda_w, triplet_weight, margin_alpha};
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw UsageError("loss weights must be finite and >= 0");
  }
}

void TripletBatch::validate() const {
  const std::size_t n = anchor.labels.size();
  for (const TripletPart* part : {&anchor, &positive, &negative}) {
    if (part->labels.size() != n || part->visual.rows() != n || part->semantic.rows() != n) {
      throw ShapeError("TripletBatch: roles disagree on batch size");
    }
  }
  if (positive.visual.cols() != anchor.visual.cols() ||
      negative.visual.cols() != anchor.visual.cols() ||
      positive.semantic.cols() != anchor.semantic.cols() ||
      negative.semantic.cols() != anchor.semantic.cols()) {
    throw ShapeError("TripletBatch: roles disagree on feature width");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (anchor.labels[i] != positive.labels[i]) {
      throw ValidationError("TripletBatch row " + std::to_string(i) +
                            ": positive label differs from anchor");
    }
    if (anchor.labels[i] == negative.labels[i]) {
      throw ValidationError("TripletBatch row " + std::to_string(i) +
                            ": negative label equals anchor");
    }
  }
}

}  // namespace gzsl::gml
