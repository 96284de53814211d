#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gzsl/gml/dual_vae.hpp"

namespace gzsl::gml {

/// Tagged payload appended after the model weights (e.g. "CLF1" classifiers).
struct CheckpointSection {
  std::string tag;  // exactly four characters
  std::vector<char> payload;
};

/// Model container layout, all integers little-endian u32:
///   "GMLV1" | latent_dim | net count (4)
///   per net (q_v, q_s, p_v, p_s): layer count | hidden act | output act
///     per layer: in | out | in*out float32 weights | out float32 biases
///   section count | per section: 4-byte tag | byte length | payload
struct Checkpoint {
  DualVae model;
  std::vector<CheckpointSection> sections;

  const CheckpointSection* find(const std::string& tag) const;
};

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
/// Throws IoError for unreadable files and ValidationError for a bad container.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gzsl::gml
