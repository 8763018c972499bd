#include "support.hpp"

#include "trimmer/dataio.hpp"
#include "trimmer/errors.hpp"

#include <doctest.h>

#include <bit>
#include <cstring>

using namespace trimmer;
using namespace trimmer::data;

namespace {

// Byte builder following the documented container layout, written
// independently of the library encoder (as a converter would).
struct Bytes {
  std::string s;
  template <typename T>
  Bytes& le(T v) {
    static_assert(std::endian::native == std::endian::little);
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    s.append(buf, sizeof(T));
    return *this;
  }
  Bytes& raw(const std::string& r) {
    s += r;
    return *this;
  }
};

VideoRecord small_record(const std::string& id, bool with_cps) {
  VideoRecord r;
  r.sequence.video_id = id;
  r.sequence.features.resize(3, 2);
  r.sequence.features << 0.5, -1.25, 3.0, 0.0, 1e-300, -7.5;
  r.n_original_frames = 40;
  r.picks = {0, 15, 30};
  r.annotations = {{1.0, 2.0, 3.0}, {0.5, 0.5, 4.0}};
  if (with_cps) r.change_points = std::vector<std::uint64_t>{1, 2};
  return r;
}

}  // namespace

TEST_SUITE("dataio") {

TEST_CASE("round trip is bit-identical and deterministic") {
  const std::vector<VideoRecord> recs{small_record("a", true), small_record("bb", false)};
  const std::string bytes = encode_vsf(recs);
  CHECK(bytes.substr(0, 4) == "VSF1");
  CHECK(decode_vsf(bytes) == recs);
  CHECK(encode_vsf(recs) == bytes);

  testing::TempDir dir("vsf");
  write_vsf(recs, dir.file("x.vsf"));
  CHECK(read_vsf(dir.file("x.vsf")) == recs);
  CHECK(testing::slurp(dir.file("x.vsf")) == bytes);
}

TEST_CASE("empty record list is a valid header-only file") {
  const std::string bytes = encode_vsf({});
  CHECK(bytes.size() == 12);
  CHECK(decode_vsf(bytes).empty());
}

TEST_CASE("every truncation fails with a located parse error") {
  const std::vector<VideoRecord> recs{small_record("a", true)};
  const std::string bytes = encode_vsf(recs);
  for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
    try {
      decode_vsf(std::string_view(bytes).substr(0, cut));
      FAIL("truncated input accepted at " << cut);
    } catch (const ParseError& e) {
      CHECK(e.offset() <= cut);
      CHECK(std::string(e.what()).find("truncated") != std::string::npos);
    }
  }
}

TEST_CASE("truncation message names the missing section") {
  const std::string bytes = encode_vsf(std::vector<VideoRecord>{small_record("a", false)});
  // Header (12) + id (2 + 1) + four u64 (32) + three picks (24), then features.
  try {
    decode_vsf(std::string_view(bytes).substr(0, 12 + 3 + 32 + 24 + 5));
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("features") != std::string::npos);
  }
}

TEST_CASE("invariant violations and malformed headers") {
  auto bad = small_record("a", false);
  bad.picks = {0, 30, 15};
  CHECK_THROWS_AS(bad.validate(), DataError);
  const std::string bytes = Bytes{}
                                .raw("VSF1")
                                .le<std::uint32_t>(1)
                                .le<std::uint32_t>(1)
                                .le<std::uint16_t>(1)
                                .raw("a")
                                .le<std::uint64_t>(40)
                                .le<std::uint64_t>(2)
                                .le<std::uint64_t>(1)
                                .le<std::uint64_t>(0)
                                .le<std::uint64_t>(20)
                                .le<std::uint64_t>(10)
                                .le<double>(1.0)
                                .le<double>(2.0)
                                .le<std::uint8_t>(0)
                                .s;
  try {
    decode_vsf(bytes);
    FAIL("accepted descending picks");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("invariant violation") != std::string::npos);
    CHECK(std::string(e.what()).find("ascending") != std::string::npos);
  }
  const std::string good = encode_vsf(std::vector<VideoRecord>{small_record("a", false)});
  CHECK_THROWS_AS(decode_vsf("VSF2" + good.substr(4)), ParseError);
  std::string version = good;
  version[4] = 7;
  CHECK_THROWS_AS(decode_vsf(version), ParseError);
  CHECK_THROWS_AS(decode_vsf(good + "x"), ParseError);
}

TEST_CASE("hand-built file with widened single-precision features") {
  // One video, one annotator, float32 source values widened to double.
  const float src[4] = {0.1f, -2.7f, 3.3333333f, 1e-20f};
  Bytes b;
  b.raw("VSF1").le<std::uint32_t>(1).le<std::uint32_t>(1);
  b.le<std::uint16_t>(5).raw("video");
  b.le<std::uint64_t>(9).le<std::uint64_t>(2).le<std::uint64_t>(2).le<std::uint64_t>(1);
  b.le<std::uint64_t>(0).le<std::uint64_t>(5);
  for (float f : src) b.le<double>(static_cast<double>(f));
  b.le<double>(0.25).le<double>(0.75);
  b.le<std::uint8_t>(1).le<std::uint64_t>(1).le<std::uint64_t>(1);

  const auto recs = decode_vsf(b.s);
  REQUIRE(recs.size() == 1);
  const auto& r = recs[0];
  CHECK(r.id() == "video");
  CHECK(r.n_frames() == 2);
  CHECK(r.sequence.dim() == 2);
  CHECK(r.annotations.size() == 1);
  CHECK(r.n_original_frames == 9);
  for (int i = 0; i < 4; ++i) {
    const double got = r.sequence.features(i / 2, i % 2);
    CHECK(std::bit_cast<std::uint64_t>(got) == std::bit_cast<std::uint64_t>(static_cast<double>(src[i])));
  }
  REQUIRE(r.change_points.has_value());
  CHECK(*r.change_points == std::vector<std::uint64_t>{1});
  CHECK(encode_vsf(recs) == b.s);
}

TEST_CASE("header-only source from a converter") {
  const std::string b = Bytes{}.raw("VSF1").le<std::uint32_t>(1).le<std::uint32_t>(0).s;
  CHECK(decode_vsf(b).empty());
}

TEST_CASE("directories load their files in name order") {
  testing::TempDir dir("vsfdir");
  write_vsf(std::vector<VideoRecord>{small_record("second", false)}, dir.file("b.vsf"));
  write_vsf(std::vector<VideoRecord>{small_record("first", false)}, dir.file("a.vsf"));
  testing::TempDir other("ignored");
  std::ofstream(dir.file("notes.txt")) << "x";
  const auto recs = load_dataset(dir.path());
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].id() == "first");
  CHECK(recs[1].id() == "second");
  CHECK_THROWS_AS(load_dataset(other.path()), DataError);
  CHECK_THROWS_AS(read_vsf(dir.file("absent.vsf")), DataError);
}

TEST_CASE("synthetic dataset is seeded and well formed") {
  const auto a = synth_dataset(3, 32, 6, 7);
  const auto b = synth_dataset(3, 32, 6, 7);
  const auto c = synth_dataset(3, 32, 6, 8);
  CHECK(a.videos == b.videos);
  CHECK_FALSE(a.videos == c.videos);
  REQUIRE(a.videos.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& v = a.videos[i];
    CHECK_NOTHROW(v.validate());
    CHECK(v.n_frames() == 32);
    CHECK(v.sequence.dim() == 6);
    CHECK(v.annotations.size() == 5);
    CHECK(a.salience[i].size() == 32);
  }
  CHECK(a.videos[0].id() == "synth_000");
  CHECK_THROWS_AS(synth_dataset(1, 4, 6, 1), DomainError);
  CHECK_THROWS_AS(synth_dataset(1, 16, 1, 1), DomainError);
}

TEST_CASE("feature sequence validation") {
  FeatureSequence x{"v", Matrix2D::Zero(1, 3)};
  CHECK_THROWS_AS(x.validate(), DataError);
  x.features = Matrix2D::Zero(3, 3);
  x.features(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(x.validate(), DataError);
}

}  // TEST_SUITE
