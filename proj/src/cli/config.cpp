#include "gzsl/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gzsl/errors.hpp"

namespace gzsl::cli {

using nlohmann::json;

void RunConfig::validate() const {
  if (data_path.has_value() == synthetic.has_value()) {
    throw UsageError("config needs exactly one of data_path or synthetic");
  }
  if (synthetic) synthetic->validate();
  weights.validate();
  if (shape.latent_dim == 0 || shape.hidden_qv == 0 || shape.hidden_qs == 0 ||
      shape.hidden_pv == 0 || shape.hidden_ps == 0) {
    throw UsageError("latent and hidden sizes must be >= 1");
  }
  if (batch_size == 0) throw UsageError("batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !(clf_learning_rate > 0.0)) {
    throw UsageError("learning rates must be positive");
  }
  if (n_seen == 0 || n_unseen == 0) throw UsageError("n_seen and n_unseen must be >= 1");
  if (clf_steps == 0) throw UsageError("clf_steps must be >= 1");
  if (histogram_bins == 0) throw UsageError("histogram_bins must be >= 1");
  cascade.validate();
}

evalkit::ExperimentRecipe RunConfig::recipe() const {
  evalkit::ExperimentRecipe r;
  r.shape = shape;
  r.schedule.epochs = epochs;
  r.schedule.batch_size = batch_size;
  r.schedule.adam.learning_rate = learning_rate;
  r.schedule.weights = weights;
  r.n_seen = n_seen;
  r.n_unseen = n_unseen;
  r.latent_mode = latent_mode;
  r.classifier.steps = clf_steps;
  r.classifier.adam.learning_rate = clf_learning_rate;
  r.classifier.seed = seed;
  r.zsl_per_class = zsl_per_class;
  r.seed = seed;
  return r;
}

namespace {

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw UsageError("config key '" + key + "' must be a non-negative integer");
      }
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw UsageError("config key '" + key + "' must be a boolean");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
    } else {
      if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw UsageError("config key '" + key + "': " + e.what());
  }
}

datakit::SyntheticSpec& synth(RunConfig& c) {
  if (!c.synthetic) c.synthetic.emplace();
  return *c.synthetic;
}

}  // namespace

RunConfig apply_config_json(RunConfig c, std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");

  // `synthetic` first so synth_* keys land on the right spec.
  if (j.contains("synthetic")) {
    if (get_as<bool>(j["synthetic"], "synthetic")) {
      synth(c);
    } else {
      c.synthetic.reset();
    }
  }
  for (const auto& [key, v] : j.items()) {
    if (key == "synthetic") continue;
    if (key == "data_path") {
      if (v.is_null()) {
        c.data_path.reset();
      } else {
        c.data_path = get_as<std::string>(v, key);
      }
    } else if (key == "synth_seen") {
      synth(c).seen_count = get_as<std::size_t>(v, key);
    } else if (key == "synth_unseen") {
      synth(c).unseen_count = get_as<std::size_t>(v, key);
    } else if (key == "synth_visual_dim") {
      synth(c).visual_dim = get_as<std::size_t>(v, key);
    } else if (key == "synth_attribute_dim") {
      synth(c).attribute_dim = get_as<std::size_t>(v, key);
    } else if (key == "synth_samples_per_class") {
      synth(c).samples_per_class = get_as<std::size_t>(v, key);
    } else if (key == "synth_spread") {
      synth(c).cluster_spread = get_as<float>(v, key);
    } else if (key == "synth_overlap") {
      synth(c).overlap = get_as<float>(v, key);
    } else if (key == "synth_test_fraction") {
      synth(c).test_fraction = get_as<float>(v, key);
    } else if (key == "synth_attribute_noise") {
      synth(c).attribute_noise = get_as<float>(v, key);
    } else if (key == "synth_seed") {
      synth(c).seed = get_as<std::uint64_t>(v, key);
    } else if (key == "latent_dim") {
      c.shape.latent_dim = get_as<std::size_t>(v, key);
    } else if (key == "hidden_qv") {
      c.shape.hidden_qv = get_as<std::size_t>(v, key);
    } else if (key == "hidden_qs") {
      c.shape.hidden_qs = get_as<std::size_t>(v, key);
    } else if (key == "hidden_pv") {
      c.shape.hidden_pv = get_as<std::size_t>(v, key);
    } else if (key == "hidden_ps") {
      c.shape.hidden_ps = get_as<std::size_t>(v, key);
    } else if (key == "beta1") {
      c.weights.beta1 = get_as<double>(v, key);
    } else if (key == "beta2") {
      c.weights.beta2 = get_as<double>(v, key);
    } else if (key == "lambda_w") {
      c.weights.lambda_w = get_as<double>(v, key);
    } else if (key == "triplet_weight") {
      c.weights.triplet_weight = get_as<double>(v, key);
    } else if (key == "margin") {
      c.weights.margin_alpha = get_as<double>(v, key);
    } else if (key == "include_s_triplet") {
      c.weights.include_s_triplet = get_as<bool>(v, key);
    } else if (key == "epochs") {
      c.epochs = get_as<std::size_t>(v, key);
    } else if (key == "batch_size") {
      c.batch_size = get_as<std::size_t>(v, key);
    } else if (key == "learning_rate") {
      c.learning_rate = get_as<double>(v, key);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(v, key);
    } else if (key == "n_seen") {
      c.n_seen = get_as<std::size_t>(v, key);
    } else if (key == "n_unseen") {
      c.n_unseen = get_as<std::size_t>(v, key);
    } else if (key == "latent_mode") {
      c.latent_mode = datakit::latent_mode_from_string(get_as<std::string>(v, key));
    } else if (key == "clf_steps") {
      c.clf_steps = get_as<std::size_t>(v, key);
    } else if (key == "clf_learning_rate") {
      c.clf_learning_rate = get_as<double>(v, key);
    } else if (key == "zsl_per_class") {
      c.zsl_per_class = get_as<std::size_t>(v, key);
    } else if (key == "tau") {
      c.cascade.tau = get_as<double>(v, key);
    } else if (key == "entropy_mode") {
      c.cascade.entropy_mode = calib::entropy_mode_from_string(get_as<std::string>(v, key));
    } else if (key == "tune_tau") {
      c.tune_tau = get_as<bool>(v, key);
    } else if (key == "histogram_bins") {
      c.histogram_bins = get_as<std::size_t>(v, key);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return apply_config_json(RunConfig{}, ss.str());
}

std::string resolved_config_json(const RunConfig& c) {
  json j = json::object();
  j["data_path"] = c.data_path ? json(*c.data_path) : json(nullptr);
  j["synthetic"] = c.synthetic.has_value();
  if (c.synthetic) {
    const auto& s = *c.synthetic;
    j["synth_seen"] = s.seen_count;
    j["synth_unseen"] = s.unseen_count;
    j["synth_visual_dim"] = s.visual_dim;
    j["synth_attribute_dim"] = s.attribute_dim;
    j["synth_samples_per_class"] = s.samples_per_class;
    j["synth_spread"] = s.cluster_spread;
    j["synth_overlap"] = s.overlap;
    j["synth_test_fraction"] = s.test_fraction;
    j["synth_attribute_noise"] = s.attribute_noise;
    j["synth_seed"] = s.seed;
  }
  j["latent_dim"] = c.shape.latent_dim;
  j["hidden_qv"] = c.shape.hidden_qv;
  j["hidden_qs"] = c.shape.hidden_qs;
  j["hidden_pv"] = c.shape.hidden_pv;
  j["hidden_ps"] = c.shape.hidden_ps;
  j["beta1"] = c.weights.beta1;
  j["beta2"] = c.weights.beta2;
  j["lambda_w"] = c.weights.lambda_w;
  j["triplet_weight"] = c.weights.triplet_weight;
  j["margin"] = c.weights.margin_alpha;
  j["include_s_triplet"] = c.weights.include_s_triplet;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["seed"] = c.seed;
  j["n_seen"] = c.n_seen;
  j["n_unseen"] = c.n_unseen;
  j["latent_mode"] = std::string(datakit::to_string(c.latent_mode));
  j["clf_steps"] = c.clf_steps;
  j["clf_learning_rate"] = c.clf_learning_rate;
  j["zsl_per_class"] = c.zsl_per_class;
  j["tau"] = c.cascade.tau;
  j["entropy_mode"] = std::string(calib::to_string(c.cascade.entropy_mode));
  j["tune_tau"] = c.tune_tau;
  j["histogram_bins"] = c.histogram_bins;
  return j.dump(2) + "\n";
}

}  // namespace gzsl::cli
