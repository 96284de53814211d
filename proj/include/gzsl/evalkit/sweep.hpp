#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gzsl/calib/cascade.hpp"
#include "gzsl/evalkit/experiment.hpp"

namespace gzsl::evalkit {

enum class SweepAxis { Tau, TripletWeight, Margin, SamplesPerClass };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

/// Parses "start:stop:step" (inclusive of stop up to rounding), a comma list,
/// or a single number. Throws UsageError on malformed input or a non-positive
/// step.
std::vector<double> parse_values(std::string_view text);

struct SweepRow {
  double value = 0.0;
  double acc_seen = 0.0;
  double acc_unseen = 0.0;
  double harmonic = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Tau;
  std::vector<double> values;
  std::vector<SweepRow> rows;
};

/// One row per value. Tau sweeps score a single trained model (`trained` when
/// given, else trained from the recipe); other axes retrain per value and
/// evaluate at `cascade.tau`. samples_per_class sets both n_seen and n_unseen.
/// Throws UsageError for empty values.
SweepResult sweep(SweepAxis axis, const std::vector<double>& values,
                  const ExperimentRecipe& recipe, const datakit::ZslDataset& dataset,
                  const calib::CascadeConfig& cascade, const TrainedArtifacts* trained = nullptr);

}  // namespace gzsl::evalkit
