#include "gzsl/evalkit/sweep.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <string>

#include "gzsl/errors.hpp"

namespace gzsl::evalkit {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Tau:
      return "tau";
    case SweepAxis::TripletWeight:
      return "triplet_weight";
    case SweepAxis::Margin:
      return "margin";
    case SweepAxis::SamplesPerClass:
      return "samples_per_class";
  }
  return "tau";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  if (name == "tau") return SweepAxis::Tau;
  if (name == "triplet_weight") return SweepAxis::TripletWeight;
  if (name == "margin") return SweepAxis::Margin;
  if (name == "samples_per_class") return SweepAxis::SamplesPerClass;
  throw UsageError("unknown sweep axis '" + std::string(name) + "'");
}

namespace {

double parse_number(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw UsageError("empty number in value list");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw UsageError("'" + s + "' is not a number");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> parse_values(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("range must be start:stop:step");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0)) throw UsageError("range step must be positive");
    if (stop < start) throw UsageError("range stop is below start");
    // Small slack so 0:3.2:0.1 includes 3.2 despite rounding.
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> values;
    for (std::size_t i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
    return values;
  }
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_number(part));
  return values;
}

SweepResult sweep(SweepAxis axis, const std::vector<double>& values,
                  const ExperimentRecipe& recipe, const datakit::ZslDataset& dataset,
                  const calib::CascadeConfig& cascade, const TrainedArtifacts* trained) {
  if (values.empty()) throw UsageError("sweep: no values");
  cascade.validate();
  SweepResult res;
  res.axis = axis;
  res.values = values;
  auto push = [&res](double v, const MetricsReport& m) {
    res.rows.push_back({v, m.acc_seen, m.acc_unseen, m.harmonic});
  };

  if (axis == SweepAxis::Tau) {
    for (double v : values) calib::CascadeConfig{v, cascade.entropy_mode}.validate();
    std::optional<TrainedArtifacts> own;
    if (trained == nullptr) {
      own = train_artifacts(recipe, dataset);
      trained = &*own;
    }
    const CascadeEvaluator evaluator(*trained, dataset, cascade.entropy_mode);
    for (double v : values) push(v, evaluator.evaluate(v).metrics);
    return res;
  }

  for (double v : values) {
    ExperimentRecipe r = recipe;
    switch (axis) {
      case SweepAxis::TripletWeight:
        r.schedule.weights.triplet_weight = v;
        break;
      case SweepAxis::Margin:
        r.schedule.weights.margin_alpha = v;
        break;
      case SweepAxis::SamplesPerClass: {
        if (v < 1.0 || v != std::floor(v)) {
          throw UsageError("samples_per_class values must be positive integers");
        }
        r.n_seen = r.n_unseen = static_cast<std::size_t>(v);
        break;
      }
      case SweepAxis::Tau:
        break;
    }
    r.schedule.weights.validate();
    const auto artifacts = train_artifacts(r, dataset);
    const CascadeEvaluator evaluator(artifacts, dataset, cascade.entropy_mode);
    push(v, evaluator.evaluate(cascade.tau).metrics);
  }
  return res;
}

}  // namespace gzsl::evalkit
