#include "gzsl/cli/app.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gzsl/cli/config.hpp"
#include "gzsl/cli/pipeline.hpp"
#include "gzsl/datakit/synthetic.hpp"
#include "gzsl/errors.hpp"
#include "gzsl/evalkit/retrieval.hpp"
#include "gzsl/evalkit/sweep.hpp"

namespace gzsl::cli {

namespace fs = std::filesystem;

namespace {

struct SharedFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config;
  std::string out = ".";
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--seed", f.seed, "Seed for every random draw of the run");
  cmd->add_option("--config", f.config, "JSON run config; flags override its values");
  cmd->add_option("-o,--out", f.out, "Output directory")->capture_default_str();
}

// Flags that override RunConfig fields for train and sweep.
struct RunOverrides {
  std::optional<std::string> data;
  bool synthetic = false;
  std::optional<std::size_t> epochs, batch_size, latent_dim, hidden, n_seen, n_unseen, clf_steps;
  std::optional<double> learning_rate, triplet_weight, margin, lambda_w, tau;
  std::optional<std::string> latent_mode, entropy_mode;
  bool tune_tau = false;
};

void add_run_overrides(CLI::App* cmd, RunOverrides& o) {
  cmd->add_option("--data", o.data, "Dataset directory");
  cmd->add_flag("--synthetic", o.synthetic, "Use the synthetic generator (synth_* config keys)");
  cmd->add_option("--epochs", o.epochs);
  cmd->add_option("--batch-size", o.batch_size);
  cmd->add_option("--learning-rate", o.learning_rate);
  cmd->add_option("--latent-dim", o.latent_dim);
  cmd->add_option("--hidden", o.hidden, "Hidden width of all four networks");
  cmd->add_option("--triplet-weight", o.triplet_weight);
  cmd->add_option("--margin", o.margin);
  cmd->add_option("--lambda-w", o.lambda_w);
  cmd->add_option("--n-seen", o.n_seen, "Latents per seen class for the general classifier");
  cmd->add_option("--n-unseen", o.n_unseen, "Latents per unseen class for the general classifier");
  cmd->add_option("--latent-mode", o.latent_mode, "sampled | mean");
  cmd->add_option("--clf-steps", o.clf_steps);
  cmd->add_option("--tau", o.tau, "Entropy threshold in nats");
  cmd->add_option("--entropy-mode", o.entropy_mode, "renormalized-seen | full-distribution");
  cmd->add_flag("--tune-tau", o.tune_tau, "Pick tau by harmonic mean on the test rows");
}

RunConfig build_config(const SharedFlags& f, const RunOverrides& o) {
  RunConfig c = f.config ? load_run_config(*f.config) : RunConfig{};
  if (o.data) {
    c.data_path = *o.data;
    c.synthetic.reset();
  }
  if (o.synthetic) {
    if (!c.synthetic) c.synthetic.emplace();
    c.data_path.reset();
  }
  if (o.epochs) c.epochs = *o.epochs;
  if (o.batch_size) c.batch_size = *o.batch_size;
  if (o.learning_rate) c.learning_rate = *o.learning_rate;
  if (o.latent_dim) c.shape.latent_dim = *o.latent_dim;
  if (o.hidden) c.shape.hidden_qv = c.shape.hidden_qs = c.shape.hidden_pv = c.shape.hidden_ps = *o.hidden;
  if (o.triplet_weight) c.weights.triplet_weight = *o.triplet_weight;
  if (o.margin) c.weights.margin_alpha = *o.margin;
  if (o.lambda_w) c.weights.lambda_w = *o.lambda_w;
  if (o.n_seen) c.n_seen = *o.n_seen;
  if (o.n_unseen) c.n_unseen = *o.n_unseen;
  if (o.latent_mode) c.latent_mode = datakit::latent_mode_from_string(*o.latent_mode);
  if (o.clf_steps) c.clf_steps = *o.clf_steps;
  if (o.tau) c.cascade.tau = *o.tau;
  if (o.entropy_mode) c.cascade.entropy_mode = calib::entropy_mode_from_string(*o.entropy_mode);
  if (o.tune_tau) c.tune_tau = true;
  if (f.seed) c.seed = *f.seed;
  c.out_dir = f.out;
  c.validate();
  return c;
}

struct SynthFlags {
  std::size_t seen = 8, unseen = 4, visual_dim = 32, attribute_dim = 16, samples = 100;
  float spread = 1.0f, overlap = 0.0f, test_fraction = 0.2f;
};

void add_synth(CLI::App* cmd, SynthFlags& s) {
  cmd->add_option("--seen", s.seen)->capture_default_str();
  cmd->add_option("--unseen", s.unseen)->capture_default_str();
  cmd->add_option("--visual-dim", s.visual_dim)->capture_default_str();
  cmd->add_option("--attribute-dim", s.attribute_dim)->capture_default_str();
  cmd->add_option("--samples", s.samples, "Samples per class")->capture_default_str();
  cmd->add_option("--spread", s.spread, "Cluster standard deviation")->capture_default_str();
  cmd->add_option("--overlap", s.overlap, "Unseen-to-seen centroid pull in [0, 1]")
      ->capture_default_str();
  cmd->add_option("--test-fraction", s.test_fraction)->capture_default_str();
}

int cmd_synth(const SharedFlags& f, const SynthFlags& s, CLI::App* cmd, std::ostream& out) {
  datakit::SyntheticSpec spec;
  if (f.config) {
    const RunConfig c = load_run_config(*f.config);
    if (c.synthetic) spec = *c.synthetic;
  }
  auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
  if (given("--seen")) spec.seen_count = s.seen;
  if (given("--unseen")) spec.unseen_count = s.unseen;
  if (given("--visual-dim")) spec.visual_dim = s.visual_dim;
  if (given("--attribute-dim")) spec.attribute_dim = s.attribute_dim;
  if (given("--samples")) spec.samples_per_class = s.samples;
  if (given("--spread")) spec.cluster_spread = s.spread;
  if (given("--overlap")) spec.overlap = s.overlap;
  if (given("--test-fraction")) spec.test_fraction = s.test_fraction;
  if (f.seed) spec.seed = *f.seed;
  const auto ds = datakit::make_synthetic(spec);
  datakit::save_dataset(ds, f.out);
  out << "wrote " << ds.num_samples() << " samples (" << ds.seen_classes.size() << " seen, "
      << ds.unseen_classes.size() << " unseen classes) to " << f.out << "\n";
  return kExitOk;
}

struct EvalFlags {
  std::string model;
  std::optional<std::string> data;
  std::optional<double> tau;
  std::optional<std::string> entropy_mode;
  bool tune_tau = false;
  std::optional<std::size_t> bins;
};

int cmd_eval(const SharedFlags& f, const EvalFlags& e, std::ostream& out) {
  RunConfig c = f.config ? load_run_config(*f.config) : RunConfig{};
  if (e.data) c.data_path = *e.data;
  if (!c.data_path) throw UsageError("eval needs --data or data_path in the config");
  if (e.tau) c.cascade.tau = *e.tau;
  if (e.entropy_mode) c.cascade.entropy_mode = calib::entropy_mode_from_string(*e.entropy_mode);
  if (e.tune_tau) c.tune_tau = true;
  if (e.bins) c.histogram_bins = *e.bins;
  if (f.seed) c.seed = *f.seed;
  c.synthetic.reset();
  c.validate();

  const auto artifacts = artifacts_from_checkpoint(gml::load_checkpoint(e.model));
  const auto dataset = datakit::load_dataset(*c.data_path);
  const evalkit::CascadeEvaluator evaluator(artifacts, dataset, c.cascade.entropy_mode);
  const fs::path dir = f.out;
  const auto rows =
      write_evaluation(evaluator, dataset, c.cascade, c.tune_tau, c.histogram_bins, dir);
  nlohmann::json snapshot = {{"command", "eval"},
                             {"model", e.model},
                             {"data_path", *c.data_path},
                             {"tau", c.cascade.tau},
                             {"entropy_mode", std::string(calib::to_string(c.cascade.entropy_mode))},
                             {"tune_tau", c.tune_tau},
                             {"histogram_bins", c.histogram_bins},
                             {"seed", c.seed}};
  evalkit::write_text_file(dir / "resolved_config.json", snapshot.dump(2) + "\n");
  for (const auto& r : rows) {
    out << r.name << ": tau " << r.tau << "  S " << r.metrics.acc_seen << "  U "
        << r.metrics.acc_unseen << "  H " << r.metrics.harmonic << "\n";
  }
  return kExitOk;
}

struct SweepFlags {
  std::string axis;
  std::string values;
  std::optional<std::string> model;
};

int cmd_sweep(const SharedFlags& f, const RunOverrides& o, const SweepFlags& s, std::ostream& out) {
  const auto axis = evalkit::sweep_axis_from_string(s.axis);
  const auto values = evalkit::parse_values(s.values);
  const RunConfig c = build_config(f, o);
  const auto dataset = load_config_dataset(c);
  std::optional<evalkit::TrainedArtifacts> trained;
  if (s.model) {
    if (axis != evalkit::SweepAxis::Tau) throw UsageError("--model only applies to the tau axis");
    trained = artifacts_from_checkpoint(gml::load_checkpoint(*s.model));
  }
  const auto result = evalkit::sweep(axis, values, c.recipe(), dataset, c.cascade,
                                     trained ? &*trained : nullptr);
  const fs::path dir = c.out_dir;
  fs::create_directories(dir);
  evalkit::write_text_file(dir / "sweep.csv", evalkit::sweep_csv(result));
  evalkit::write_text_file(dir / "sweep.json", evalkit::sweep_json(result));
  evalkit::write_text_file(dir / "resolved_config.json", resolved_config_json(c));
  out << "swept " << result.rows.size() << " " << evalkit::to_string(axis) << " values into "
      << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

struct RetrieveFlags {
  std::string model;
  std::optional<std::string> data;
  int ratio = 100;
  std::size_t n_generate = 50;
  std::vector<int> classes;
};

int cmd_retrieve(const SharedFlags& f, const RetrieveFlags& r, std::ostream& out) {
  evalkit::validate_ratio(r.ratio);
  RunConfig c = f.config ? load_run_config(*f.config) : RunConfig{};
  if (r.data) c.data_path = *r.data;
  if (!c.data_path) throw UsageError("retrieve needs --data or data_path in the config");
  if (f.seed) c.seed = *f.seed;
  const auto ckpt = gml::load_checkpoint(r.model);
  const auto dataset = datakit::load_dataset(*c.data_path);
  const std::vector<int> classes = r.classes.empty() ? dataset.unseen_classes : r.classes;
  numkit::Rng rng(c.seed);
  const auto report =
      evalkit::retrieve_classes(ckpt.model, dataset, classes, r.n_generate, r.ratio, rng);
  const fs::path dir = f.out;
  fs::create_directories(dir);
  evalkit::write_text_file(dir / "retrieval.json", evalkit::retrieval_json(report, r.ratio));
  nlohmann::json snapshot = {{"command", "retrieve"}, {"model", r.model},
                             {"data_path", *c.data_path}, {"ratio", r.ratio},
                             {"n_generate", r.n_generate}, {"classes", classes},
                             {"seed", c.seed}};
  evalkit::write_text_file(dir / "resolved_config.json", snapshot.dump(2) + "\n");
  out << "mAP@" << r.ratio << "%: " << report.mean_average_precision << "\n";
  return kExitOk;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized zero-shot learning with a dual VAE and entropy-calibrated cascade",
               "gzsl"};
  app.require_subcommand(1, 1);

  SharedFlags synth_shared, train_shared, eval_shared, sweep_shared, retrieve_shared;
  SynthFlags synth_flags;
  RunOverrides train_over, sweep_over;
  EvalFlags eval_flags;
  SweepFlags sweep_flags;
  RetrieveFlags retrieve_flags;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset directory");
  add_shared(synth, synth_shared);
  add_synth(synth, synth_flags);

  auto* train = app.add_subcommand("train", "Train, calibrate and evaluate from a run config");
  add_shared(train, train_shared);
  add_run_overrides(train, train_over);

  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  add_shared(eval, eval_shared);
  eval->add_option("--model", eval_flags.model, "model.bin written by train")->required();
  eval->add_option("--data", eval_flags.data, "Dataset directory");
  eval->add_option("--tau", eval_flags.tau, "Entropy threshold in nats");
  eval->add_option("--entropy-mode", eval_flags.entropy_mode);
  eval->add_flag("--tune-tau", eval_flags.tune_tau);
  eval->add_option("--bins", eval_flags.bins, "Entropy histogram bins");

  auto* sweep = app.add_subcommand("sweep", "Sweep tau or a training hyperparameter");
  add_shared(sweep, sweep_shared);
  add_run_overrides(sweep, sweep_over);
  sweep->add_option("--axis", sweep_flags.axis, "tau | triplet_weight | margin | samples_per_class")
      ->required();
  sweep->add_option("--values", sweep_flags.values, "start:stop:step or a comma list")->required();
  sweep->add_option("--model", sweep_flags.model, "Reuse a trained model (tau axis only)");

  auto* retrieve = app.add_subcommand("retrieve", "Attribute-to-image retrieval with mAP");
  add_shared(retrieve, retrieve_shared);
  retrieve->add_option("--model", retrieve_flags.model)->required();
  retrieve->add_option("--data", retrieve_flags.data, "Dataset directory");
  retrieve->add_option("--ratio", retrieve_flags.ratio, "25, 50 or 100 percent")
      ->capture_default_str();
  retrieve->add_option("--n-generate", retrieve_flags.n_generate, "Latents averaged per query")
      ->capture_default_str();
  retrieve->add_option("--classes", retrieve_flags.classes, "Query classes (default: unseen)")
      ->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_shared, synth_flags, synth, out);
    if (*train) {
      const RunConfig c = build_config(train_shared, train_over);
      run_pipeline(c, &out);
      return kExitOk;
    }
    if (*eval) return cmd_eval(eval_shared, eval_flags, out);
    if (*sweep) return cmd_sweep(sweep_shared, sweep_over, sweep_flags, out);
    if (*retrieve) return cmd_retrieve(retrieve_shared, retrieve_flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gzsl::cli
