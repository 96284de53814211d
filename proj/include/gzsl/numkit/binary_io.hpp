#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

// Little-endian scalar and float-block I/O, independent of host byte order.

namespace gzsl::numkit {

void write_u32_le(std::ostream& os, std::uint32_t v);
void write_i32_le(std::ostream& os, std::int32_t v);
void write_f32_le(std::ostream& os, std::span<const float> values);

std::uint32_t read_u32_le(std::istream& is);
std::int32_t read_i32_le(std::istream& is);
/// Reads exactly `count` floats; throws IoError on a short read.
std::vector<float> read_f32_le(std::istream& is, std::size_t count);

}  // namespace gzsl::numkit
