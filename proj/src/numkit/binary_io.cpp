#include "gzsl/numkit/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "gzsl/errors.hpp"

namespace gzsl::numkit {

namespace {

std::array<char, 4> to_le(std::uint32_t v) {
  return {static_cast<char>(v & 0xffu), static_cast<char>((v >> 8) & 0xffu),
          static_cast<char>((v >> 16) & 0xffu), static_cast<char>((v >> 24) & 0xffu)};
}

std::uint32_t from_le(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_u32_le(std::ostream& os, std::uint32_t v) {
  const auto bytes = to_le(v);
  os.write(bytes.data(), 4);
}

void write_i32_le(std::ostream& os, std::int32_t v) {
  write_u32_le(os, std::bit_cast<std::uint32_t>(v));
}

void write_f32_le(std::ostream& os, std::span<const float> values) {
  std::vector<char> buf(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bytes = to_le(std::bit_cast<std::uint32_t>(values[i]));
    std::memcpy(buf.data() + 4 * i, bytes.data(), 4);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::uint32_t read_u32_le(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw IoError("unexpected end of binary stream");
  return from_le(b);
}

std::int32_t read_i32_le(std::istream& is) { return std::bit_cast<std::int32_t>(read_u32_le(is)); }

std::vector<float> read_f32_le(std::istream& is, std::size_t count) {
  std::vector<unsigned char> buf(count * 4);
  if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw IoError("unexpected end of binary stream");
  }
  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::bit_cast<float>(from_le(buf.data() + 4 * i));
  return out;
}

}  // namespace gzsl::numkit
