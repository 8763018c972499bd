#pragma once

#include "trimmer/evaluation.hpp"
#include "trimmer/numerics/tensor.hpp"
#include "trimmer/pretrain.hpp"
#include "trimmer/reinforce.hpp"
#include "trimmer/segmentation.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace trimmer {

struct RunConfig {
  std::uint64_t seed = 0;
  std::string data_path;
  numerics::Architecture arch;  // input_dim is taken from the data
  pretrain::PretrainConfig pretrain;
  rl::RLConfig rl;
  seg::SegmentationConfig segmentation;
  eval::EvalMode eval_mode = eval::EvalMode::per_annotator_mean;
  std::size_t folds = 5;
  std::size_t runs = 10;
  std::size_t jobs = 1;

  void validate() const;
};

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

std::span<const ConfigKey> config_keys();

// Sets one typed key; unknown keys and malformed values raise UsageError.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

// Flat "key = value" lines; '#' starts a comment; blank lines are ignored.
void apply_config_text(RunConfig& cfg, std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical "key = value" rendering of every key.
std::string render_config(const RunConfig& cfg);

// Independent, reproducible sub-seeds (splitmix64 of master ^ stream hash).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

namespace seed_stream {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kPretrain = 2;
inline constexpr std::uint64_t kFinetune = 3;
}  // namespace seed_stream

}  // namespace trimmer
