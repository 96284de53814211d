#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "gzsl/datakit/dataset.hpp"
#include "gzsl/gml/dual_vae.hpp"
#include "gzsl/gml/types.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::datakit {

/// How latent codes are drawn from an encoder.
enum class LatentMode {
  Sampled,  // mean + sd * noise, fresh noise per row
  Mean,     // deterministic mean
};

std::string_view to_string(LatentMode m);
LatentMode latent_mode_from_string(std::string_view name);

/// Training data for the general classifier: seen classes come from the
/// visual encoder over training visuals, unseen classes from the semantic
/// encoder over attribute rows.
struct LatentTrainSet {
  Matrix latents;
  std::vector<int> labels;
  std::vector<gml::Modality> provenance;
};

/// n_seen rows per seen class (training rows repeated cyclically when fewer)
/// and n_unseen rows per unseen class. Classes appear in seen-list then
/// unseen-list order.
LatentTrainSet build_latent_train_set(const gml::DualVae& vae, const ZslDataset& dataset,
                                      std::size_t n_seen, std::size_t n_unseen, LatentMode mode,
                                      numkit::Rng& rng);

/// Codes for `inputs` through `encoder`, per `mode`.
Matrix encode_latents(const gml::MlpNet& encoder, const Matrix& inputs, LatentMode mode,
                      numkit::Rng& rng);

}  // namespace gzsl::datakit
