#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gzsl/evalkit/experiment.hpp"
#include "gzsl/evalkit/metrics.hpp"
#include "gzsl/evalkit/retrieval.hpp"
#include "gzsl/evalkit/sweep.hpp"

namespace gzsl::evalkit {

/// One experiment row of a metrics report.
struct NamedMetrics {
  std::string name;
  double tau = 0.0;
  std::size_t seen_routed = 0;
  MetricsReport metrics;
};

/// Header plus one row per experiment; accuracies with six decimals.
std::string metrics_csv(std::span<const NamedMetrics> rows);
/// Full per-class breakdown per experiment.
std::string metrics_json(std::span<const NamedMetrics> rows);

std::string histogram_json(const EntropyHistogram& hist, double tau, std::string_view entropy_mode);
std::string confusion_json(std::span<const int> class_order,
                           const std::vector<std::vector<double>>& matrix);
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);
std::string retrieval_json(const RetrievalReport& report, int ratio_percent);

/// Writes `content` to `path`, replacing it. Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace gzsl::evalkit
