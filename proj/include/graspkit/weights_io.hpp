#pragma once
// Weight container, little-endian:
//   "FVTW" | u32 version (1) | u32 count |
//   count x { u16 name_len | name | u8 ndim | u32 dims[ndim] | f32 payload }
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "graspkit/fvit.hpp"
#include "graspkit/tensor.hpp"

namespace graspkit {

inline constexpr std::uint32_t kWeightsVersion = 1;

struct NamedTensor {
  std::string name;
  TensorF tensor;
};

std::vector<std::uint8_t> encode_tensors(std::span<const NamedTensor> tensors);
/// Throws BadMagic, VersionUnsupported or Truncated; never reads past the end.
std::vector<NamedTensor> decode_tensors(std::span<const std::uint8_t> bytes);

/// All thirteen tensors in canonical order.
std::vector<std::uint8_t> encode_weights(const HeadWeights& w);
/// Picks the named tensors (unknown names are ignored). Throws MissingTensor
/// naming the first absent tensor; shapes are checked by the forward passes
/// or by load_weights.
HeadWeights decode_weights(std::span<const std::uint8_t> bytes);

void save_weights(const std::filesystem::path& path, const HeadWeights& w);
/// Decodes and validates shapes against `cfg` and the regression head
/// (ShapeMismatch names the offending tensor). Throws Io when unreadable.
HeadWeights load_weights(const std::filesystem::path& path, const HiLoConfig& cfg);
/// Reads the container without shape validation.
HeadWeights load_weights_unchecked(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace graspkit
