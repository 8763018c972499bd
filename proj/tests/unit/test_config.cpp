#include "support.hpp"

#include "trimmer/config.hpp"
#include "trimmer/errors.hpp"
#include "trimmer/protocol.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace trimmer;

namespace {

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.arch = {0, 8, 6, 4};
  cfg.pretrain.epochs = 2;
  cfg.pretrain.lr = 1e-3;
  cfg.rl.epochs = 2;
  cfg.rl.lr = 1e-3;
  cfg.folds = 3;
  cfg.runs = 2;
  return cfg;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("key = value text with comments") {
  RunConfig cfg;
  apply_config_text(cfg,
                    "# desk scale\n"
                    "seed = 11\n"
                    "  lambda=0.5   # trailing comment\n"
                    "\n"
                    "lambda_on = ptrim\n"
                    "eval_mode = vs_mean_gt\n"
                    "hidden1 = 32\n"
                    "data = /some/where\n");
  CHECK(cfg.seed == 11);
  CHECK(cfg.rl.lambda == 0.5);
  CHECK(cfg.rl.lambda_on == rl::LambdaOn::ptrim);
  CHECK(cfg.eval_mode == eval::EvalMode::vs_mean_gt);
  CHECK(cfg.arch.hidden1 == 32);
  CHECK(cfg.data_path == "/some/where");
  CHECK(cfg.pretrain.nu == 0.005);
}

TEST_CASE("errors carry the line number") {
  RunConfig cfg;
  try {
    apply_config_text(cfg, "seed = 1\nbogus = 2\n");
    FAIL("accepted unknown key");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_config_text(cfg, "folds 3\n"), UsageError);
  CHECK_THROWS_AS(apply_config_text(cfg, "folds = three\n"), UsageError);
  CHECK_THROWS_AS(apply_config_text(cfg, "nu = 0.1x\n"), UsageError);
  CHECK_THROWS_AS(apply_config_text(cfg, "lambda_on = both\n"), UsageError);
  CHECK_THROWS_AS(load_config("/nonexistent/trimmer.cfg"), UsageError);
}

TEST_CASE("rendering covers every key and parses back") {
  RunConfig cfg;
  cfg.seed = 99;
  cfg.rl.lr = 3.25e-4;
  cfg.segmentation.penalty_c = 0.1;
  cfg.folds = 4;
  const std::string text = render_config(cfg);
  for (const auto& k : config_keys()) CHECK(text.find(std::string(k.name) + " = ") != std::string::npos);
  RunConfig back;
  apply_config_text(back, text);
  CHECK(render_config(back) == text);
  CHECK(back.rl.lr == cfg.rl.lr);
}

TEST_CASE("validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.folds = 1;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.segmentation.budget_ratio = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.arch.hidden2 = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("derived seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 20; ++m)
    for (std::uint64_t s = 0; s < 20; ++s) seen.insert(derive_seed(m, s));
  CHECK(seen.size() == 400);
  CHECK(derive_seed(7, seed_stream::kInit) == derive_seed(7, seed_stream::kInit));
}

TEST_CASE("fold partition") {
  for (std::size_t n : {5u, 10u, 23u}) {
    const auto folds = fold_partition(n, 5, 3);
    REQUIRE(folds.size() == 5);
    std::vector<int> seen(n, 0);
    std::size_t lo = n, hi = 0;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      for (std::size_t i : f) ++seen[i];
    }
    CHECK(hi - lo <= 1);
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
  CHECK(fold_partition(10, 5, 1) == fold_partition(10, 5, 1));
  CHECK(fold_partition(10, 5, 1) != fold_partition(10, 5, 2));
  CHECK_THROWS_AS(fold_partition(3, 5, 0), DataError);
}

TEST_CASE("cross-validation covers each video once per run regardless of threads") {
  const auto ds = data::synth_dataset(6, 16, 4, 3);
  auto cfg = tiny_config();
  cfg.seed = 5;
  const auto one = cross_validate(ds.videos, cfg);
  cfg.jobs = 3;
  const auto three = cross_validate(ds.videos, cfg);
  CHECK(one.to_json() == three.to_json());
  REQUIRE(one.per_video.size() == 12);
  for (std::size_t run = 0; run < 2; ++run) {
    std::multiset<std::string> ids;
    for (const auto& v : one.per_video)
      if (v.run == run) ids.insert(v.video_id);
    CHECK(ids.size() == 6);
    CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 6);
  }
  CHECK(one.run_mean_tau.size() == 2);
  CHECK(one.seeds.size() == 2);
}

TEST_CASE("leave-one-out evaluates each video once") {
  const auto ds = data::synth_dataset(4, 16, 4, 9);
  auto cfg = tiny_config();
  cfg.runs = 1;
  cfg.folds = 4;
  const auto rep = cross_validate(ds.videos, cfg);
  CHECK(rep.per_video.size() == 4);
}

TEST_CASE("training pipeline is reproducible") {
  const auto ds = data::synth_dataset(3, 16, 4, 1);
  const auto cfg = tiny_config();
  const auto a = train_pipeline(ds.videos, cfg, 42);
  const auto b = train_pipeline(ds.videos, cfg, 42);
  CHECK(a.pretrain_loss == b.pretrain_loss);
  CHECK(a.rewards.mean_total == b.rewards.mean_total);
  CHECK(a.model.architecture().input_dim == 4);
}

}  // TEST_SUITE
