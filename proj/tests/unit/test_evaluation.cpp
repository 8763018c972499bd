#include "oracles.hpp"

#include "trimmer/dataio.hpp"
#include "trimmer/errors.hpp"
#include "trimmer/evaluation.hpp"
#include "trimmer/rank_correlation.hpp"

#include <doctest.h>

#include <cmath>

using namespace trimmer;
using namespace trimmer::eval;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, int levels = 0) {
  std::vector<double> v(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& x : v) x = levels > 0 ? static_cast<double>(rng() % static_cast<unsigned>(levels)) : u(rng);
  return v;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("kendall tau small cases") {
  const std::vector<double> a{1, 2, 3, 4};
  CHECK(*kendall_tau(a, a) == 1.0);
  CHECK(*kendall_tau(a, std::vector<double>{4, 3, 2, 1}) == -1.0);
  CHECK(*kendall_tau(a, std::vector<double>{1, 3, 2, 4}) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK_FALSE(kendall_tau(a, std::vector<double>{2, 2, 2, 2}).has_value());
  CHECK_THROWS_AS(kendall_tau(a, std::vector<double>{1, 2}), ShapeError);
  CHECK_THROWS_AS(kendall_tau(std::vector<double>{1}, std::vector<double>{1}), ShapeError);
}

TEST_CASE("merge-sort kendall equals the pairwise count exactly") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    const int levels = trial % 3 == 0 ? 0 : 2 + static_cast<int>(rng() % 6);
    const auto a = random_vec(n, rng, levels);
    const auto b = random_vec(n, rng, trial % 2 ? levels : 0);
    const auto got = kendall_tau(a, b);
    const auto want = oracle::kendall_pairs(a, b);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(*got == *want);
  }
}

TEST_CASE("average ranks") {
  CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
  std::mt19937_64 rng(2);
  const auto v = random_vec(30, rng, 5);
  CHECK(average_ranks(v) == oracle::ranks(v));
}

TEST_CASE("spearman rho") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  CHECK(*spearman_rho(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*spearman_rho(a, std::vector<double>{9, 7, 4, 2, 0}) == doctest::Approx(-1.0).epsilon(1e-15));
  const std::vector<double> x{1, 2, 2, 3}, y{1, 2, 3, 3};
  CHECK(std::abs(*spearman_rho(x, y) - oracle::pearson(oracle::ranks(x), oracle::ranks(y))) < 1e-12);
  CHECK_FALSE(spearman_rho(a, std::vector<double>(5, 1.0)).has_value());
}

TEST_CASE("correlations are invariant to increasing transforms and bounded") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_vec(25, rng, trial % 2 ? 4 : 0);
    const auto b = random_vec(25, rng);
    std::vector<double> ea(a.size()), fb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ea[i] = std::exp(a[i]);
      fb[i] = 3.0 * b[i] + 7.0;
    }
    const auto t = kendall_tau(a, b), r = spearman_rho(a, b);
    REQUIRE(t.has_value());
    CHECK(*kendall_tau(ea, fb) == *t);
    CHECK(*spearman_rho(ea, fb) == doctest::Approx(*r).epsilon(1e-12));
    CHECK(std::abs(*t) <= 1.0);
    CHECK(std::abs(*r) <= 1.0);
  }
}

TEST_CASE("modes and aggregation") {
  const auto ds = data::synth_dataset(3, 20, 4, 5);
  std::vector<std::vector<double>> perfect;
  for (const auto& v : ds.videos) perfect.push_back(v.mean_annotation());
  const auto rep = evaluate_predictions(ds.videos, perfect, EvalMode::vs_mean_gt);
  CHECK(rep.mean_tau == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep.mean_rho == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep.per_video.size() == 3);

  auto single = ds.videos;
  for (auto& v : single) v.annotations.resize(1);
  std::mt19937_64 rng(7);
  std::vector<std::vector<double>> preds;
  for (const auto& v : single) preds.push_back(random_vec(v.n_frames(), rng));
  const auto m1 = evaluate_predictions(single, preds, EvalMode::per_annotator_mean);
  const auto m2 = evaluate_predictions(single, preds, EvalMode::vs_mean_gt);
  CHECK(m1.mean_tau == doctest::Approx(m2.mean_tau).epsilon(1e-15));
  CHECK(m1.mean_rho == doctest::Approx(m2.mean_rho).epsilon(1e-15));

  const auto j = m1.to_json();
  CHECK(j["metric"]["tau"] == "kendall tau-b");
  CHECK(j["per_video"].size() == 3);
}

TEST_CASE("constant annotators are skipped, all-constant gives no metric") {
  const std::vector<double> pred{0.1, 0.5, 0.3};
  const auto m = score_against_annotations(pred, {{1, 1, 1}, {1, 3, 2}}, EvalMode::per_annotator_mean);
  CHECK(*m.tau == 1.0);
  const auto none = score_against_annotations(pred, {{2, 2, 2}}, EvalMode::per_annotator_mean);
  CHECK_FALSE(none.tau.has_value());
  CHECK_THROWS_AS(score_against_annotations(pred, {{1, 2}}, EvalMode::vs_mean_gt), DataError);
  CHECK_THROWS_AS(score_against_annotations(pred, {}, EvalMode::vs_mean_gt), DataError);
}

TEST_CASE("mode names") {
  CHECK(parse_eval_mode("vs_mean_gt") == EvalMode::vs_mean_gt);
  CHECK(to_string(EvalMode::per_annotator_mean) == "per_annotator_mean");
  CHECK_THROWS_AS(parse_eval_mode("f1"), UsageError);
}

}  // TEST_SUITE
