#include "oracles.hpp"
#include "support.hpp"

#include "trimmer/errors.hpp"
#include "trimmer/numerics.hpp"
#include "trimmer/pretrain.hpp"

#include <doctest.h>

#include <cmath>

using namespace trimmer;
using namespace trimmer::numerics;

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

ScoreSequence seq(std::vector<double> v) {
  return ScoreSequence{Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()))};
}

std::vector<FeatureSequence> random_videos(std::size_t count, std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FeatureSequence> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back({"v" + std::to_string(i), oracle::random_matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d), rng)});
  return out;
}

}  // namespace

TEST_SUITE("pretrain") {

TEST_CASE("masking zeroes an exact number of rows and copies the input") {
  std::mt19937_64 rng(1);
  FeatureSequence x{"v", oracle::random_matrix(10, 4, rng)};
  const Matrix2D original = x.features;
  std::mt19937_64 r1(9), r2(9);
  const auto a = pretrain::mask_augment(x, 0.5, r1);
  const auto b = pretrain::mask_augment(x, 0.5, r2);
  CHECK(x.features == original);
  CHECK(a.features == b.features);
  int zero_rows = 0;
  for (Eigen::Index t = 0; t < 10; ++t) {
    if (a.features.row(t).isZero(0.0))
      ++zero_rows;
    else
      CHECK(a.features.row(t) == original.row(t));
  }
  CHECK(zero_rows == 5);
  std::mt19937_64 r3(2);
  CHECK(pretrain::mask_augment(x, 0.0, r3).features == original);
  CHECK_THROWS_AS(pretrain::mask_augment(x, 1.0, r3), DomainError);
  CHECK_THROWS_AS(pretrain::mask_augment(x, -0.1, r3), DomainError);
}

TEST_CASE("correlation loss values") {
  const auto p = seq({0.1, 0.4, 0.2, 0.9});
  CHECK(pretrain::corr_loss(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pretrain::corr_loss(p, seq({0.9, 0.6, 0.8, 0.1})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pretrain::corr_loss(seq({0.1, 0.2, 0.3}), seq({0.3, 0.1, 0.2})) == doctest::Approx(1.5).epsilon(1e-14));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Vector a = oracle::random_matrix(9, 1, rng).col(0);
    const Vector b = oracle::random_matrix(9, 1, rng).col(0);
    CHECK(std::abs(pretrain::corr_loss({a}, {b}) - (1.0 - oracle::pearson(to_std(a), to_std(b)))) < 1e-12);
  }
  CHECK_THROWS_AS(pretrain::corr_loss(seq({0.5, 0.5, 0.5}), seq({0.1, 0.4, 0.2})), DegenerateInputError);
  CHECK_THROWS_AS(pretrain::corr_loss(seq({0.1, 0.4}), seq({0.1, 0.4, 0.2})), ShapeError);
}

TEST_CASE("standard deviation loss values") {
  CHECK(pretrain::sd_loss(seq({0.0, 1.0})) == 2.0);
  std::mt19937_64 rng(5);
  const Vector v = oracle::random_matrix(8, 1, rng).col(0);
  CHECK(std::abs(pretrain::sd_loss({v}) - 1.0 / oracle::population_sd(to_std(v))) < 1e-12);
  CHECK_THROWS_AS(pretrain::sd_loss(seq({0.3, 0.3, 0.3})), DegenerateInputError);
}

TEST_CASE("combined loss gradient matches central differences in the scores") {
  std::mt19937_64 rng(6);
  const Vector p1 = (oracle::random_matrix(10, 1, rng).col(0).array() * 0.2 + 0.5).matrix();
  const Vector p2 = (oracle::random_matrix(10, 1, rng).col(0).array() * 0.2 + 0.5).matrix();
  const double nu = 0.1;
  const auto l = pretrain::pretrain_loss(p1, p2, nu);
  CHECK(l.value == doctest::Approx(l.corr + nu * (l.sd1 + l.sd2)).epsilon(1e-15));
  CHECK(l.sd1 == doctest::Approx(1.0 / oracle::population_sd(to_std(p1))).epsilon(1e-13));
  const double h = 1e-6;
  for (Eigen::Index t = 0; t < 10; ++t) {
    Vector up = p1, dn = p1;
    up(t) += h;
    dn(t) -= h;
    const double fd1 = (pretrain::pretrain_loss(up, p2, nu).value - pretrain::pretrain_loss(dn, p2, nu).value) / (2 * h);
    CHECK(l.grad_view1(t) == doctest::Approx(fd1).epsilon(1e-6));
    up = p2;
    dn = p2;
    up(t) += h;
    dn(t) -= h;
    const double fd2 = (pretrain::pretrain_loss(p1, up, nu).value - pretrain::pretrain_loss(p1, dn, nu).value) / (2 * h);
    CHECK(l.grad_view2(t) == doctest::Approx(fd2).epsilon(1e-6));
  }
}

TEST_CASE("collapsed view is clipped instead of blowing up") {
  const Vector flat = Vector::Constant(6, 0.5);
  const Vector live = Vector::LinSpaced(6, 0.1, 0.9);
  const auto l = pretrain::pretrain_loss(flat, live, 0.005);
  CHECK(l.clipped);
  CHECK(std::isfinite(l.value));
  CHECK(l.sd1 == 1.0 / pretrain::kStdFloor);
  CHECK(l.grad_view1.isZero(0.0));
}

TEST_CASE("network gradient of the pretraining loss") {
  const auto videos = random_videos(1, 10, 8, 7);
  const auto params = ParameterSet::initialize(testing::small_arch(8), 17);
  std::mt19937_64 rng(3);
  const auto v1 = pretrain::mask_augment(videos[0], 0.3, rng);
  const auto v2 = pretrain::mask_augment(videos[0], 0.2, rng);
  LossFunction fn = [&](const ParameterSet& p) {
    const auto a = forward(p, v1.features);
    const auto b = forward(p, v2.features);
    const auto l = pretrain::pretrain_loss(a.scores(), b.scores(), 0.005);
    auto g = backward(p, a, l.grad_view1);
    g += backward(p, b, l.grad_view2);
    return LossAndGradient{l.value, std::move(g)};
  };
  const auto report = finite_diff_check(fn, params);
  CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("identical unmasked views give zero loss when nu is zero") {
  const auto videos = random_videos(2, 10, 6, 8);
  pretrain::PretrainConfig cfg;
  cfg.epochs = 3;
  cfg.nu = 0.0;
  cfg.mask_lo = cfg.mask_hi = 0.0;
  const auto r = pretrain::pretrain(ParameterSet::initialize(testing::small_arch(6), 2), videos, cfg);
  REQUIRE(r.loss_trace.size() == 3);
  for (double l : r.loss_trace) CHECK(std::abs(l) < 1e-12);
}

TEST_CASE("pretraining is deterministic and reduces the loss") {
  const auto videos = random_videos(4, 24, 8, 9);
  pretrain::PretrainConfig cfg;
  cfg.epochs = 40;
  cfg.lr = 1e-3;
  cfg.seed = 5;
  const auto init = ParameterSet::initialize(testing::small_arch(8), 3);
  const auto a = pretrain::pretrain(init, videos, cfg);
  const auto b = pretrain::pretrain(init, videos, cfg);
  CHECK(a.loss_trace == b.loss_trace);
  CHECK(serialize_model(a.model) == serialize_model(b.model));
  CHECK(a.loss_trace.back() < a.loss_trace.front());
}

TEST_CASE("configuration checks") {
  pretrain::PretrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.mask_lo = 0.6;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.mask_hi = 1.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.lr = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

}  // TEST_SUITE
