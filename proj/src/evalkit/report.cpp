#include "gzsl/evalkit/report.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "gzsl/errors.hpp"

namespace gzsl::evalkit {

using nlohmann::json;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json metrics_to_json(const MetricsReport& m) {
  json per_class = json::object();
  for (const auto& [cls, acc] : m.per_class_acc) per_class[std::to_string(cls)] = acc;
  json j = {{"acc_seen", m.acc_seen},
            {"acc_unseen", m.acc_unseen},
            {"harmonic", m.harmonic},
            {"per_class_acc", per_class}};
  j["zsl_acc"] = m.zsl_acc ? json(*m.zsl_acc) : json(nullptr);
  return j;
}

}  // namespace

std::string metrics_csv(std::span<const NamedMetrics> rows) {
  std::string out = "experiment,tau,acc_seen,acc_unseen,harmonic,zsl_acc,seen_routed\n";
  for (const auto& r : rows) {
    out += r.name + "," + fixed6(r.tau) + "," + fixed6(r.metrics.acc_seen) + "," +
           fixed6(r.metrics.acc_unseen) + "," + fixed6(r.metrics.harmonic) + "," +
           (r.metrics.zsl_acc ? fixed6(*r.metrics.zsl_acc) : std::string()) + "," +
           std::to_string(r.seen_routed) + "\n";
  }
  return out;
}

std::string metrics_json(std::span<const NamedMetrics> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = metrics_to_json(r.metrics);
    j["experiment"] = r.name;
    j["tau"] = r.tau;
    j["seen_routed"] = r.seen_routed;
    arr.push_back(std::move(j));
  }
  return json{{"experiments", arr}}.dump(2) + "\n";
}

std::string histogram_json(const EntropyHistogram& hist, double tau,
                           std::string_view entropy_mode) {
  json j = {{"edges", hist.edges},
            {"seen", hist.seen},
            {"unseen", hist.unseen},
            {"threshold", tau},
            {"entropy_mode", std::string(entropy_mode)},
            {"unit", "nats"}};
  return j.dump(2) + "\n";
}

std::string confusion_json(std::span<const int> class_order,
                           const std::vector<std::vector<double>>& matrix) {
  json j = {{"class_order", std::vector<int>(class_order.begin(), class_order.end())},
            {"matrix", matrix}};
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = std::string(to_string(result.axis)) + ",acc_seen,acc_unseen,harmonic\n";
  for (const auto& r : result.rows) {
    out += fixed6(r.value) + "," + fixed6(r.acc_seen) + "," + fixed6(r.acc_unseen) + "," +
           fixed6(r.harmonic) + "\n";
  }
  return out;
}

std::string sweep_json(const SweepResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"value", r.value},
                    {"acc_seen", r.acc_seen},
                    {"acc_unseen", r.acc_unseen},
                    {"harmonic", r.harmonic}});
  }
  return json{{"axis", std::string(to_string(result.axis))}, {"rows", rows}}.dump(2) + "\n";
}

std::string retrieval_json(const RetrievalReport& report, int ratio_percent) {
  json per_class = json::array();
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    per_class.push_back({{"class", report.classes[i]}, {"ap", report.average_precision[i]}});
  }
  return json{{"ratio_percent", ratio_percent},
              {"mAP", report.mean_average_precision},
              {"per_class", per_class}}
             .dump(2) +
         "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << content;
  if (!os) throw IoError("write failed for " + path.string());
}

}  // namespace gzsl::evalkit
