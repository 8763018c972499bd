#include "trimmer/dataio.hpp"

#include "trimmer/detail/binary.hpp"
#include "trimmer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>

namespace trimmer::data {

namespace {

constexpr std::string_view kMagic = "VSF1";

void fail(const VideoRecord& r, const std::string& what) {
  throw DataError("video '" + r.id() + "': " + what);
}

}  // namespace

std::vector<double> VideoRecord::mean_annotation() const {
  std::vector<double> mean(n_frames(), 0.0);
  if (annotations.empty()) return {};
  for (const auto& a : annotations)
    for (std::size_t t = 0; t < mean.size(); ++t) mean[t] += a[t];
  for (auto& v : mean) v /= static_cast<double>(annotations.size());
  return mean;
}

void VideoRecord::validate() const {
  sequence.validate();
  const std::size_t n = n_frames();
  if (picks.size() != n) fail(*this, "picks length " + std::to_string(picks.size()) + " != N " + std::to_string(n));
  for (std::size_t i = 0; i < picks.size(); ++i) {
    if (i > 0 && picks[i] <= picks[i - 1]) fail(*this, "picks are not strictly ascending at position " + std::to_string(i));
    if (picks[i] >= n_original_frames) fail(*this, "pick " + std::to_string(picks[i]) + " >= n_original_frames");
  }
  for (std::size_t a = 0; a < annotations.size(); ++a) {
    if (annotations[a].size() != n)
      fail(*this, "annotation " + std::to_string(a) + " has length " + std::to_string(annotations[a].size()));
    for (double v : annotations[a])
      if (!std::isfinite(v)) fail(*this, "annotation " + std::to_string(a) + " has non-finite values");
  }
  if (change_points) {
    for (std::size_t i = 0; i < change_points->size(); ++i)
      if (i > 0 && (*change_points)[i] <= (*change_points)[i - 1]) fail(*this, "change points are not ascending");
  }
}

bool VideoRecord::operator==(const VideoRecord& o) const {
  return sequence.video_id == o.sequence.video_id && sequence.features.rows() == o.sequence.features.rows() &&
         sequence.features.cols() == o.sequence.features.cols() && sequence.features == o.sequence.features &&
         n_original_frames == o.n_original_frames && picks == o.picks && annotations == o.annotations &&
         change_points == o.change_points;
}

std::string encode_vsf(std::span<const VideoRecord> records) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.uint(kVsfVersion);
  w.uint(static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    if (r.id().size() > 0xFFFF) throw DataError("video id longer than 65535 bytes");
    w.uint(static_cast<std::uint16_t>(r.id().size()));
    w.bytes(r.id());
    const auto& x = r.sequence.features;
    w.uint(r.n_original_frames);
    w.uint(static_cast<std::uint64_t>(x.rows()));
    w.uint(static_cast<std::uint64_t>(x.cols()));
    w.uint(static_cast<std::uint64_t>(r.annotations.size()));
    for (auto p : r.picks) w.uint(p);
    for (Eigen::Index i = 0; i < x.size(); ++i) w.f64(x.data()[i]);
    for (const auto& a : r.annotations)
      for (double v : a) w.f64(v);
    w.uint(static_cast<std::uint8_t>(r.change_points ? 1 : 0));
    if (r.change_points) {
      w.uint(static_cast<std::uint64_t>(r.change_points->size()));
      for (auto c : *r.change_points) w.uint(c);
    }
  }
  return w.take();
}

std::vector<VideoRecord> decode_vsf(std::string_view bytes) {
  detail::ByteReader r(bytes);
  if (r.bytes(4, "magic") != kMagic) throw ParseError("not a VSF container: bad magic", 0);
  const auto version = r.uint<std::uint32_t>("version");
  if (version != kVsfVersion) throw ParseError("unsupported VSF version " + std::to_string(version), 4);
  const auto count = r.uint<std::uint32_t>("video count");

  std::vector<VideoRecord> out;
  for (std::uint32_t v = 0; v < count; ++v) {
    const std::string tag = "video " + std::to_string(v);
    VideoRecord rec;
    const auto id_len = r.uint<std::uint16_t>(tag + " id length");
    rec.sequence.video_id = std::string(r.bytes(id_len, tag + " id"));
    const std::string ctx = "video '" + rec.sequence.video_id + "'";
    rec.n_original_frames = r.uint<std::uint64_t>(ctx + " n_original_frames");
    const auto n = r.uint<std::uint64_t>(ctx + " frame count");
    const auto d = r.uint<std::uint64_t>(ctx + " feature dim");
    const auto a = r.uint<std::uint64_t>(ctx + " annotator count");

    r.require(n * 8, ctx + " picks");
    rec.picks.resize(n);
    for (auto& p : rec.picks) p = r.uint<std::uint64_t>(ctx + " picks");

    r.require(n * d * 8, ctx + " features");
    rec.sequence.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < rec.sequence.features.size(); ++i)
      rec.sequence.features.data()[i] = r.f64(ctx + " features");

    r.require(a * n * 8, ctx + " annotations");
    rec.annotations.assign(a, std::vector<double>(n));
    for (auto& ann : rec.annotations)
      for (auto& s : ann) s = r.f64(ctx + " annotations");

    const auto has_cp = r.uint<std::uint8_t>(ctx + " change-point flag");
    if (has_cp > 1) throw ParseError(ctx + ": invalid change-point flag", r.offset() - 1);
    if (has_cp) {
      const auto c = r.uint<std::uint64_t>(ctx + " change-point count");
      r.require(c * 8, ctx + " change points");
      std::vector<std::uint64_t> cps(c);
      for (auto& cp : cps) cp = r.uint<std::uint64_t>(ctx + " change points");
      rec.change_points = std::move(cps);
    }

    const auto offset = r.offset();
    try {
      rec.validate();
    } catch (const DataError& e) {
      throw ParseError(std::string("invariant violation: ") + e.what(), offset);
    }
    out.push_back(std::move(rec));
  }
  if (!r.at_end()) throw ParseError("trailing bytes after last video", r.offset());
  return out;
}

void write_vsf(std::span<const VideoRecord> records, const std::filesystem::path& path) {
  for (const auto& r : records) r.validate();
  const auto bytes = encode_vsf(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<VideoRecord> read_vsf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_vsf(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

std::vector<VideoRecord> load_dataset(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return read_vsf(path);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".vsf") files.push_back(entry.path());
  if (files.empty()) throw DataError("no .vsf files in " + path.string());
  std::sort(files.begin(), files.end());
  std::vector<VideoRecord> out;
  for (const auto& f : files) {
    auto part = read_vsf(f);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<FeatureSequence> sequences(std::span<const VideoRecord> records) {
  std::vector<FeatureSequence> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.sequence);
  return out;
}

SyntheticDataset synth_dataset(std::size_t n_videos, std::size_t n_frames, std::size_t dim,
                               std::uint64_t structure_seed, std::size_t n_annotators) {
  if (dim < 2 || n_frames < 8) throw DomainError("synth_dataset: need dim >= 2 and n_frames >= 8");
  std::mt19937_64 rng(structure_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Dataset-wide direction along which salient content sits.
  Vector salient_dir(static_cast<Eigen::Index>(dim));
  for (auto& v : salient_dir) v = gauss(rng);
  salient_dir.normalize();

  constexpr std::size_t kMinScene = 4;
  const std::size_t max_scenes = std::max<std::size_t>(2, std::min<std::size_t>(6, n_frames / 8));

  SyntheticDataset out;
  for (std::size_t v = 0; v < n_videos; ++v) {
    // Scene lengths: at least kMinScene frames each, remainder spread at random.
    std::uniform_int_distribution<std::size_t> scene_count(2, max_scenes);
    const std::size_t scenes = scene_count(rng);
    std::vector<std::size_t> lengths(scenes, kMinScene);
    for (std::size_t extra = n_frames - scenes * kMinScene; extra > 0; --extra)
      ++lengths[std::uniform_int_distribution<std::size_t>(0, scenes - 1)(rng)];

    VideoRecord rec;
    std::string id = std::to_string(v);
    rec.sequence.video_id = "synth_" + std::string(id.size() < 3 ? 3 - id.size() : 0, '0') + id;
    rec.sequence.features.resize(static_cast<Eigen::Index>(n_frames), static_cast<Eigen::Index>(dim));
    std::vector<double> salience(n_frames);
    std::size_t t = 0;
    for (std::size_t s = 0; s < scenes; ++s) {
      const double level = unit(rng);
      Vector centre(static_cast<Eigen::Index>(dim));
      for (auto& c : centre) c = gauss(rng);
      centre += 2.5 * level * salient_dir;
      const double jitter = 0.05 + 0.6 * level;
      for (std::size_t k = 0; k < lengths[s]; ++k, ++t) {
        for (std::size_t j = 0; j < dim; ++j)
          rec.sequence.features(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
              centre(static_cast<Eigen::Index>(j)) + jitter * gauss(rng);
        salience[t] = level;
      }
    }

    // Features are subsampled every 15 original frames.
    constexpr std::uint64_t kStride = 15;
    rec.n_original_frames = n_frames * kStride;
    rec.picks.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) rec.picks[i] = i * kStride;

    std::vector<std::uint64_t> cps;
    for (std::size_t s = 0, acc = 0; s + 1 < scenes; ++s) {
      acc += lengths[s];
      cps.push_back(acc);
    }
    rec.change_points = std::move(cps);

    for (std::size_t a = 0; a < n_annotators; ++a) {
      std::vector<double> ann(n_frames);
      for (std::size_t i = 0; i < n_frames; ++i) ann[i] = salience[i] + 0.1 * gauss(rng);
      rec.annotations.push_back(std::move(ann));
    }
    out.videos.push_back(std::move(rec));
    out.salience.push_back(std::move(salience));
  }
  return out;
}

}  // namespace trimmer::data
