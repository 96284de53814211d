#include "gzsl/cli/pipeline.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>

#include "gzsl/calib/softmax.hpp"
#include "gzsl/datakit/synthetic.hpp"
#include "gzsl/errors.hpp"

namespace gzsl::cli {

namespace fs = std::filesystem;

datakit::ZslDataset load_config_dataset(const RunConfig& config) {
  config.validate();
  if (config.synthetic) return datakit::make_synthetic(*config.synthetic);
  return datakit::load_dataset(*config.data_path);
}

gml::Checkpoint make_checkpoint(const evalkit::TrainedArtifacts& artifacts) {
  gml::Checkpoint ckpt{artifacts.vae, {}};
  ckpt.sections.push_back(calib::encode_classifier("general", artifacts.general));
  ckpt.sections.push_back(calib::encode_classifier("seen", artifacts.seen));
  if (artifacts.zsl) ckpt.sections.push_back(calib::encode_classifier("zsl", *artifacts.zsl));
  return ckpt;
}

evalkit::TrainedArtifacts artifacts_from_checkpoint(const gml::Checkpoint& ckpt) {
  evalkit::TrainedArtifacts a;
  a.vae = ckpt.model;
  bool have_general = false, have_seen = false;
  for (const auto& section : ckpt.sections) {
    if (section.tag != "CLF1") continue;
    auto [role, clf] = calib::decode_classifier(section);
    if (role == "general") {
      a.general = std::move(clf);
      have_general = true;
    } else if (role == "seen") {
      a.seen = std::move(clf);
      have_seen = true;
    } else if (role == "zsl") {
      a.zsl = std::move(clf);
    }
  }
  if (!have_general || !have_seen) {
    throw ValidationError("model file lacks the general or seen classifier");
  }
  return a;
}

std::vector<evalkit::NamedMetrics> write_evaluation(const evalkit::CascadeEvaluator& evaluator,
                                                   const datakit::ZslDataset& dataset,
                                                   const calib::CascadeConfig& cascade, bool tune,
                                                   std::size_t histogram_bins,
                                                   const fs::path& out_dir) {
  cascade.validate();
  const evalkit::Evaluation baseline = evaluator.evaluate(0.0);
  evalkit::Evaluation calibrated =
      tune ? evalkit::tune_tau(evaluator, evalkit::default_tau_grid(dataset.seen_classes.size()))
                 .evaluation
           : evaluator.evaluate(cascade.tau);

  std::vector<evalkit::NamedMetrics> rows{
      {"baseline_tau0", baseline.tau, baseline.seen_routed, baseline.metrics},
      {"cascade", calibrated.tau, calibrated.seen_routed, calibrated.metrics}};

  std::vector<int> predicted;
  for (const auto& p : calibrated.predictions) predicted.push_back(p.class_id);
  std::vector<int> order(dataset.num_classes());
  std::iota(order.begin(), order.end(), 0);
  const auto confusion = evalkit::confusion_matrix(predicted, evaluator.labels(), order);
  const auto hist = evalkit::entropy_histogram(evaluator.scores().entropy, evaluator.seen_flags(),
                                               histogram_bins);

  fs::create_directories(out_dir);
  evalkit::write_text_file(out_dir / "metrics.csv", evalkit::metrics_csv(rows));
  evalkit::write_text_file(out_dir / "metrics.json", evalkit::metrics_json(rows));
  evalkit::write_text_file(
      out_dir / "entropy_hist.json",
      evalkit::histogram_json(hist, calibrated.tau, calib::to_string(cascade.entropy_mode)));
  evalkit::write_text_file(out_dir / "confusion.json", evalkit::confusion_json(order, confusion));
  return rows;
}

namespace {

std::string loss_log_csv(const std::vector<gml::LossBreakdown>& losses) {
  std::string out =
      "epoch,total,v_recon,v_kl,s_recon,s_kl,wasserstein,cross_recon,v_triplet,s_triplet,"
      "mul_triplet\n";
  char buf[512];
  for (std::size_t e = 0; e < losses.size(); ++e) {
    const auto& l = losses[e];
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", e + 1,
                  l.total, l.v_recon, l.v_kl, l.s_recon, l.s_kl, l.wasserstein, l.cross_recon,
                  l.v_triplet, l.s_triplet, l.mul_triplet);
    out += buf;
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, std::ostream* log) {
  config.validate();
  const datakit::ZslDataset dataset = load_config_dataset(config);
  if (log) {
    *log << "dataset: " << dataset.num_samples() << " samples, " << dataset.seen_classes.size()
         << " seen / " << dataset.unseen_classes.size() << " unseen classes\n";
  }

  PipelineResult res;
  res.artifacts = evalkit::train_artifacts(config.recipe(), dataset);
  if (log && !res.artifacts.epoch_losses.empty()) {
    *log << "trained " << res.artifacts.epoch_losses.size()
         << " epochs, final loss " << res.artifacts.epoch_losses.back().total << "\n";
  }

  const evalkit::CascadeEvaluator evaluator(res.artifacts, dataset, config.cascade.entropy_mode);
  fs::create_directories(config.out_dir);
  res.experiments = write_evaluation(evaluator, dataset, config.cascade, config.tune_tau,
                                     config.histogram_bins, config.out_dir);
  res.cascade_tau = res.experiments.back().tau;
  gml::save_checkpoint(config.out_dir / "model.bin", make_checkpoint(res.artifacts));
  evalkit::write_text_file(config.out_dir / "loss_log.csv",
                           loss_log_csv(res.artifacts.epoch_losses));
  evalkit::write_text_file(config.out_dir / "resolved_config.json", resolved_config_json(config));

  if (log) {
    for (const auto& e : res.experiments) {
      *log << e.name << ": tau " << e.tau << "  S " << e.metrics.acc_seen << "  U "
           << e.metrics.acc_unseen << "  H " << e.metrics.harmonic << "\n";
    }
  }
  return res;
}

}  // namespace gzsl::cli
