#pragma once

#include <string>
#include <vector>

#include "hiermud/core/bytes.hpp"
#include "hiermud/prep/tensorize.hpp"

namespace hiermud::prep {

// Tensor cache file: header (magic "TEN1", u32 count, u32 C, u32 W, u32 H),
// then per record a u8 location class, u8 severity class, u8 domain tag and
// C*W*H float32 little-endian values.
inline std::string encode_tensors(const std::vector<InputTensor>& tensors) {
  std::string out;
  out.reserve(20 + tensors.size() * (3 + 4 * InputTensor::size()));
  out += "TEN1";
  core::put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  core::put_u32(out, static_cast<std::uint32_t>(kTensorChannels));
  core::put_u32(out, static_cast<std::uint32_t>(kTensorWidth));
  core::put_u32(out, static_cast<std::uint32_t>(kTensorHeight));
  for (const auto& t : tensors) {
    out.push_back(static_cast<char>(t.location_class));
    out.push_back(static_cast<char>(t.severity_class));
    out.push_back(static_cast<char>(t.domain_tag));
    for (double v : t.data) core::put_f32(out, static_cast<float>(v));
  }
  return out;
}

inline std::vector<InputTensor> decode_tensors(const std::string& bytes) {
  core::ByteReader r(bytes);
  if (r.raw(4) != "TEN1") throw std::runtime_error("bad tensor cache magic");
  const std::uint32_t count = r.u32();
  const std::uint32_t c = r.u32(), w = r.u32(), h = r.u32();
  if (c != kTensorChannels || w != kTensorWidth || h != kTensorHeight)
    throw std::runtime_error("tensor cache shape mismatch");
  std::vector<InputTensor> out(count);
  for (auto& t : out) {
    t.location_class = r.u8();
    t.severity_class = r.u8();
    t.domain_tag = r.u8();
    t.data.resize(InputTensor::size());
    for (double& v : t.data) v = static_cast<double>(r.f32());
  }
  if (!r.at_end()) throw std::runtime_error("trailing bytes in tensor cache");
  return out;
}

inline void save_tensors(const std::string& path, const std::vector<InputTensor>& tensors) {
  core::write_file(path, encode_tensors(tensors));
}

inline std::vector<InputTensor> load_tensors(const std::string& path) {
  return decode_tensors(core::read_file(path));
}

}  // namespace hiermud::prep
