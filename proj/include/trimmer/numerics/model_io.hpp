#pragma once

#include "trimmer/numerics/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace trimmer::numerics {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Binary layout, little-endian throughout:
//   "TRMW" | u32 version | per tensor: u32 name length, name bytes,
//   u32 rank, rank x u64 dims, prod(dims) x f64 payload
// Tensors appear in canonical order; the conv kernel is one rank-3 tensor
// [out, in, 3].
std::string serialize_model(const ParameterSet& params);
ParameterSet deserialize_model(const std::string& bytes);

void save_model(const ParameterSet& params, const std::filesystem::path& path);
ParameterSet load_model(const std::filesystem::path& path);

}  // namespace trimmer::numerics
