#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "gzsl/numkit/matrix.hpp"

namespace gzsl::gml {

using numkit::Matrix;

enum class Modality { Visual, Semantic };

std::string_view to_string(Modality m);

/// Diagonal Gaussian per batch row: mean and log-variance, both (rows x latent).
struct GaussianParams {
  Matrix mean;
  Matrix log_variance;

  std::size_t rows() const { return mean.rows(); }
  std::size_t latent_dim() const { return mean.cols(); }
  void validate() const;
};

/// Latent codes tagged with the encoder that produced them.
struct LatentBatch {
  Matrix z;
  Modality source = Modality::Visual;
};

struct LossWeights {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double lambda_w = 1.0;
  double triplet_weight = 0.1;
  double margin_alpha = 5.0;
  bool include_s_triplet = true;

  /// Throws UsageError when any weight is negative or non-finite.
  void validate() const;
};

/// One role (anchor, positive or negative) of a triplet batch.
struct TripletPart {
  Matrix visual;
  Matrix semantic;
  std::vector<int> labels;
};

struct TripletBatch {
  TripletPart anchor;
  TripletPart positive;
  TripletPart negative;

  std::size_t size() const { return anchor.labels.size(); }
  /// Shapes agree across roles; anchor label equals positive label and
  /// differs from negative label on every row.
  void validate() const;
};

}  // namespace gzsl::gml
