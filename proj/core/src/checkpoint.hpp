#pragma once

// Shared model-checkpoint container: magic "SCWM", u32 version, u32 JSON
// header length, header bytes, then the named tensors as little-endian
// float32 row-major blocks in header order. Round trips are bit-exact.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "scarwid/common.hpp"
#include "scarwid/nn.hpp"

namespace scarwid::detail {

inline constexpr char kModelMagic[4] = {'S', 'C', 'W', 'M'};
inline constexpr std::uint32_t kModelVersion = 1;

struct LoadedCheckpoint {
    nlohmann::json header;
    std::map<std::string, Matrix> tensors;
};

/// Serialize header + all parameters of `params` (in creation order).
std::string serialize_checkpoint(nlohmann::json header, const nn::ParamStore& params);

void save_checkpoint(const std::filesystem::path& path, nlohmann::json header,
                     const nn::ParamStore& params);

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 const std::string& expected_kind);

}  // namespace scarwid::detail
