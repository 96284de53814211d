#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gzsl/cli/config.hpp"
#include "gzsl/datakit/dataset.hpp"
#include "gzsl/evalkit/experiment.hpp"
#include "gzsl/evalkit/report.hpp"
#include "gzsl/gml/checkpoint.hpp"

namespace gzsl::cli {

/// Loads data_path or generates the synthetic dataset.
datakit::ZslDataset load_config_dataset(const RunConfig& config);

struct PipelineResult {
  evalkit::TrainedArtifacts artifacts;
  std::vector<evalkit::NamedMetrics> experiments;  // baseline_tau0, cascade
  double cascade_tau = 0.0;
};

/// Trains, calibrates and evaluates, writing into config.out_dir:
/// metrics.csv, metrics.json, entropy_hist.json, confusion.json, model.bin,
/// loss_log.csv and resolved_config.json. Progress lines go to `log` when set.
PipelineResult run_pipeline(const RunConfig& config, std::ostream* log = nullptr);

/// Evaluates the tau = 0 baseline and the cascade at `tau` (tuned on the
/// test rows when `tune` is set) and writes the metrics, histogram and
/// confusion files into `out_dir`.
std::vector<evalkit::NamedMetrics> write_evaluation(const evalkit::CascadeEvaluator& evaluator,
                                                   const datakit::ZslDataset& dataset,
                                                   const calib::CascadeConfig& cascade, bool tune,
                                                   std::size_t histogram_bins,
                                                   const std::filesystem::path& out_dir);

/// Model container with the classifiers stored as "general", "seen" and,
/// when present, "zsl" sections.
gml::Checkpoint make_checkpoint(const evalkit::TrainedArtifacts& artifacts);
/// Inverse of make_checkpoint. Throws ValidationError when a classifier is missing.
evalkit::TrainedArtifacts artifacts_from_checkpoint(const gml::Checkpoint& ckpt);

}  // namespace gzsl::cli
