#pragma once

#include "trimmer/scorer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trimmer::data {

inline constexpr std::uint32_t kVsfVersion = 1;

struct VideoRecord {
  FeatureSequence sequence;  // video id and N x d features
  std::uint64_t n_original_frames = 0;
  std::vector<std::uint64_t> picks;                  // strictly ascending, < n_original_frames
  std::vector<std::vector<double>> annotations;      // A vectors of length N
  std::optional<std::vector<std::uint64_t>> change_points;

  const std::string& id() const noexcept { return sequence.video_id; }
  std::size_t n_frames() const noexcept { return sequence.n_frames(); }

  // Annotator-mean score per frame; empty when there are no annotations.
  std::vector<double> mean_annotation() const;

  // Throws DataError naming the first violated invariant.
  void validate() const;

  bool operator==(const VideoRecord& other) const;
};

// VSF container, little-endian:
//   "VSF1" | u32 version | u32 video count | per video:
//     u16 id length, UTF-8 id | u64 n_original_frames | u64 N | u64 d | u64 A |
//     N x u64 picks | N*d x f64 features (row-major) | A*N x f64 annotations |
//     u8 has_change_points [ u64 count | count x u64 ]
std::string encode_vsf(std::span<const VideoRecord> records);
std::vector<VideoRecord> decode_vsf(std::string_view bytes);

void write_vsf(std::span<const VideoRecord> records, const std::filesystem::path& path);
std::vector<VideoRecord> read_vsf(const std::filesystem::path& path);

// A VSF file, or a directory whose *.vsf files are read in name order.
std::vector<VideoRecord> load_dataset(const std::filesystem::path& path);

std::vector<FeatureSequence> sequences(std::span<const VideoRecord> records);

struct SyntheticDataset {
  std::vector<VideoRecord> videos;
  std::vector<std::vector<double>> salience;  // planted per-frame salience
};

// Videos made of latent scenes. Each scene is a Gaussian cluster around its
// own centre; a scene's salience controls how dynamic it is (frame-to-frame
// jitter, hence entropy variation) and how far its centre sits along a
// dataset-wide salient direction. Annotators score frames by that salience
// plus independent noise.
SyntheticDataset synth_dataset(std::size_t n_videos, std::size_t n_frames, std::size_t dim,
                               std::uint64_t structure_seed, std::size_t n_annotators = 5);

}  // namespace trimmer::data
