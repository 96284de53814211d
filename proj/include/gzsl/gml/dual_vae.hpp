#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gzsl/numkit/mlp.hpp"
#include "gzsl/numkit/rng.hpp"

namespace gzsl::gml {

using numkit::MlpGrads;
using numkit::MlpNet;

/// Widths of the four two-layer networks. Hidden defaults follow the reference
/// configuration (visual/semantic encoder, visual/semantic decoder).
struct DualVaeShape {
  std::size_t visual_dim = 0;
  std::size_t attribute_dim = 0;
  std::size_t latent_dim = 64;
  std::size_t hidden_qv = 1560;
  std::size_t hidden_qs = 1450;
  std::size_t hidden_pv = 1660;
  std::size_t hidden_ps = 665;
};

/// Visual and semantic VAEs sharing one latent space. Encoders emit
/// [mean | log-variance], decoders map a latent code back to their modality.
struct DualVae {
  MlpNet q_v;
  MlpNet q_s;
  MlpNet p_v;
  MlpNet p_s;
  std::size_t latent_dim = 0;

  static DualVae create(const DualVaeShape& shape, numkit::Rng& rng);

  std::size_t visual_dim() const { return q_v.input_dim(); }
  std::size_t attribute_dim() const { return q_s.input_dim(); }
  std::size_t parameter_count() const;

  /// Parameter blocks of q_v, q_s, p_v, p_s in that order.
  std::vector<std::span<float>> parameters();
  std::vector<std::span<const float>> parameters() const;

  void validate() const;

  friend bool operator==(const DualVae&, const DualVae&) = default;
};

struct DualVaeGrads {
  MlpGrads q_v;
  MlpGrads q_s;
  MlpGrads p_v;
  MlpGrads p_s;

  static DualVaeGrads zeros_like(const DualVae& vae);
  std::vector<std::span<float>> parameters();
  std::vector<std::span<const float>> parameters() const;
};

}  // namespace gzsl::gml
