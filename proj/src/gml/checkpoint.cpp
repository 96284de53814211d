#include "gzsl/gml/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gzsl/errors.hpp"
#include "gzsl/numkit/binary_io.hpp"

namespace gzsl::gml {

namespace {

constexpr char kMagic[5] = {'G', 'M', 'L', 'V', '1'};
constexpr std::uint32_t kMaxDim = 1u << 24;

using numkit::read_u32_le;
using numkit::write_u32_le;

void write_net(std::ostream& os, const MlpNet& net) {
  write_u32_le(os, static_cast<std::uint32_t>(net.layers.size()));
  write_u32_le(os, static_cast<std::uint32_t>(net.hidden_activation));
  write_u32_le(os, static_cast<std::uint32_t>(net.output_activation));
  for (const auto& layer : net.layers) {
    write_u32_le(os, static_cast<std::uint32_t>(layer.input_dim()));
    write_u32_le(os, static_cast<std::uint32_t>(layer.output_dim()));
    numkit::write_f32_le(os, layer.weight.values());
    numkit::write_f32_le(os, layer.bias);
  }
}

numkit::Activation read_activation(std::istream& is) {
  const std::uint32_t v = read_u32_le(is);
  if (v > static_cast<std::uint32_t>(numkit::Activation::Relu)) {
    throw ValidationError("checkpoint: unknown activation code");
  }
  return static_cast<numkit::Activation>(v);
}

MlpNet read_net(std::istream& is) {
  MlpNet net;
  const std::uint32_t layers = read_u32_le(is);
  if (layers == 0 || layers > 64) throw ValidationError("checkpoint: bad layer count");
  net.hidden_activation = read_activation(is);
  net.output_activation = read_activation(is);
  for (std::uint32_t k = 0; k < layers; ++k) {
    const std::uint32_t in = read_u32_le(is);
    const std::uint32_t out = read_u32_le(is);
    if (in == 0 || out == 0 || in > kMaxDim || out > kMaxDim) {
      throw ValidationError("checkpoint: bad layer dims");
    }
    numkit::DenseLayer layer;
    layer.weight = numkit::Matrix(in, out, numkit::read_f32_le(is, std::size_t{in} * out));
    layer.bias = numkit::read_f32_le(is, out);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace

const CheckpointSection* Checkpoint::find(const std::string& tag) const {
  for (const auto& s : sections) {
    if (s.tag == tag) return &s;
  }
  return nullptr;
}

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt) {
  ckpt.model.validate();
  os.write(kMagic, sizeof kMagic);
  write_u32_le(os, static_cast<std::uint32_t>(ckpt.model.latent_dim));
  write_u32_le(os, 4);
  for (const MlpNet* net : {&ckpt.model.q_v, &ckpt.model.q_s, &ckpt.model.p_v, &ckpt.model.p_s}) {
    write_net(os, *net);
  }
  write_u32_le(os, static_cast<std::uint32_t>(ckpt.sections.size()));
  for (const auto& s : ckpt.sections) {
    if (s.tag.size() != 4) throw UsageError("checkpoint section tags are four characters");
    os.write(s.tag.data(), 4);
    write_u32_le(os, static_cast<std::uint32_t>(s.payload.size()));
    os.write(s.payload.data(), static_cast<std::streamsize>(s.payload.size()));
  }
  if (!os) throw IoError("checkpoint write failed");
}

Checkpoint read_checkpoint(std::istream& is) {
  char magic[sizeof kMagic];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ValidationError("not a GMLV1 model container");
  }
  Checkpoint ckpt;
  try {
    ckpt.model.latent_dim = read_u32_le(is);
    if (read_u32_le(is) != 4) throw ValidationError("checkpoint: expected four networks");
    ckpt.model.q_v = read_net(is);
    ckpt.model.q_s = read_net(is);
    ckpt.model.p_v = read_net(is);
    ckpt.model.p_s = read_net(is);
    const std::uint32_t sections = read_u32_le(is);
    for (std::uint32_t k = 0; k < sections; ++k) {
      CheckpointSection s;
      s.tag.resize(4);
      if (!is.read(s.tag.data(), 4)) throw IoError("checkpoint: truncated section tag");
      const std::uint32_t len = read_u32_le(is);
      s.payload.resize(len);
      if (!is.read(s.payload.data(), static_cast<std::streamsize>(len))) {
        throw IoError("checkpoint: truncated section payload");
      }
      ckpt.sections.push_back(std::move(s));
    }
  } catch (const IoError& e) {
    throw ValidationError(std::string("truncated model container: ") + e.what());
  }
  try {
    ckpt.model.validate();
  } catch (const ShapeError& e) {
    throw ValidationError(std::string("checkpoint: inconsistent model: ") + e.what());
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  write_checkpoint(os, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_checkpoint(is);
}

}  // namespace gzsl::gml
