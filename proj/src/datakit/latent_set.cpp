#include "gzsl/datakit/latent_set.hpp"

#include <string>

#include "gzsl/errors.hpp"
#include "gzsl/gml/losses.hpp"

namespace gzsl::datakit {

std::string_view to_string(LatentMode m) { return m == LatentMode::Mean ? "mean" : "sampled"; }

LatentMode latent_mode_from_string(std::string_view name) {
  if (name == "mean") return LatentMode::Mean;
  if (name == "sampled") return LatentMode::Sampled;
  throw UsageError("unknown latent mode '" + std::string(name) + "'");
}

Matrix encode_latents(const gml::MlpNet& encoder, const Matrix& inputs, LatentMode mode,
                      numkit::Rng& rng) {
  gml::GaussianParams gp = gml::encode(encoder, inputs);
  if (mode == LatentMode::Mean) return std::move(gp.mean);
  const Matrix noise = numkit::standard_normal(gp.rows(), gp.latent_dim(), rng);
  return gml::reparameterize(gp, noise, gml::Modality::Visual).z;
}

LatentTrainSet build_latent_train_set(const gml::DualVae& vae, const ZslDataset& dataset,
                                      std::size_t n_seen, std::size_t n_unseen, LatentMode mode,
                                      numkit::Rng& rng) {
  try {
    vae.validate();
  } catch (const ShapeError& e) {
    throw UsageError(std::string("build_latent_train_set: invalid model: ") + e.what());
  }
  if (vae.visual_dim() != dataset.visual_dim() || vae.attribute_dim() != dataset.attribute_dim()) {
    throw UsageError("build_latent_train_set: model dims do not match the dataset");
  }

  std::vector<Matrix> blocks;
  LatentTrainSet out;
  for (int cls : dataset.seen_classes) {
    const auto rows = dataset.train_rows_of(cls);
    if (rows.empty() && n_seen > 0) {
      throw SamplingError("seen class " + std::to_string(cls) + " has no training rows");
    }
    std::vector<std::size_t> picks(n_seen);
    for (std::size_t k = 0; k < n_seen; ++k) picks[k] = rows[k % rows.size()];
    blocks.push_back(encode_latents(vae.q_v, numkit::gather_rows(dataset.visual, picks), mode, rng));
    out.labels.insert(out.labels.end(), n_seen, cls);
    out.provenance.insert(out.provenance.end(), n_seen, gml::Modality::Visual);
  }
  for (int cls : dataset.unseen_classes) {
    const std::vector<std::size_t> picks(n_unseen, static_cast<std::size_t>(cls));
    blocks.push_back(
        encode_latents(vae.q_s, numkit::gather_rows(dataset.attributes, picks), mode, rng));
    out.labels.insert(out.labels.end(), n_unseen, cls);
    out.provenance.insert(out.provenance.end(), n_unseen, gml::Modality::Semantic);
  }
  out.latents = blocks.empty() ? Matrix(0, vae.latent_dim) : numkit::vstack(blocks);
  return out;
}

}  // namespace gzsl::datakit
