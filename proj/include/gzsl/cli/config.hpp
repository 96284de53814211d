#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "gzsl/calib/cascade.hpp"
#include "gzsl/datakit/synthetic.hpp"
#include "gzsl/evalkit/experiment.hpp"
#include "gzsl/gml/types.hpp"

namespace gzsl::cli {

/// Flat run description. JSON keys match the field names; `synthetic: true`
/// selects the generator, whose settings use the `synth_` prefix.
struct RunConfig {
  std::optional<std::string> data_path;
  std::optional<datakit::SyntheticSpec> synthetic;

  gml::DualVaeShape shape;
  gml::LossWeights weights;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;

  std::size_t n_seen = 200;
  std::size_t n_unseen = 400;
  datakit::LatentMode latent_mode = datakit::LatentMode::Sampled;
  std::size_t clf_steps = 300;
  double clf_learning_rate = 1e-2;
  std::size_t zsl_per_class = 400;

  calib::CascadeConfig cascade;
  bool tune_tau = false;
  std::size_t histogram_bins = 30;

  std::filesystem::path out_dir = ".";  // not part of the resolved snapshot

  /// Throws UsageError when the config cannot describe a run.
  void validate() const;

  /// Training recipe for the configured model and classifiers.
  evalkit::ExperimentRecipe recipe() const;
};

/// Applies the keys of a JSON object onto `base`. Unknown keys and wrongly
/// typed values throw UsageError.
RunConfig apply_config_json(RunConfig base, std::string_view json_text);

/// Reads a config file onto defaults. Throws IoError when unreadable.
RunConfig load_run_config(const std::filesystem::path& path);

/// Every field except out_dir, with the seed always present. Feeding this
/// text back through apply_config_json reproduces the config.
std::string resolved_config_json(const RunConfig& config);

}  // namespace gzsl::cli
