#include "trimmer/protocol.hpp"

#include "trimmer/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace trimmer {

TrainedModel train_pipeline(std::span<const data::VideoRecord> train, const RunConfig& cfg, std::uint64_t seed) {
  if (train.empty()) throw DataError("train_pipeline: empty training set");
  auto arch = cfg.arch;
  arch.input_dim = train.front().sequence.dim();
  const auto seqs = data::sequences(train);

  TrainedModel out;
  auto model = numerics::ParameterSet::initialize(arch, derive_seed(seed, seed_stream::kInit));

  auto pcfg = cfg.pretrain;
  pcfg.seed = derive_seed(seed, seed_stream::kPretrain);
  auto pre = pretrain::pretrain(std::move(model), seqs, pcfg);
  out.pretrain_loss = std::move(pre.loss_trace);
  out.warnings = std::move(pre.warnings);

  auto rcfg = cfg.rl;
  rcfg.seed = derive_seed(seed, seed_stream::kFinetune);
  auto fine = rl::finetune(std::move(pre.model), seqs, rcfg);
  out.model = std::move(fine.model);
  out.rewards = std::move(fine.trace);
  return out;
}

std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 1 || n < folds) throw DataError("need at least as many videos as folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos), order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(out[f].begin(), out[f].end());
    pos += size;
  }
  return out;
}

eval::EvalReport cross_validate(std::span<const data::VideoRecord> videos, const RunConfig& cfg) {
  cfg.validate();
  if (videos.size() < cfg.folds) throw DataError("cross_validate: fewer videos than folds");

  struct Job {
    std::size_t run, fold;
    std::uint64_t seed;
    std::vector<std::size_t> test;
    eval::EvalReport report;
  };
  std::vector<Job> jobs;
  eval::EvalReport final_report;
  final_report.mode = cfg.eval_mode;
  final_report.folds = cfg.folds;
  final_report.runs = cfg.runs;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    const std::uint64_t run_seed = derive_seed(cfg.seed, 1000 + run);
    final_report.seeds.push_back(run_seed);
    auto parts = fold_partition(videos.size(), cfg.folds, run_seed);
    for (std::size_t f = 0; f < cfg.folds; ++f)
      jobs.push_back({run, f, derive_seed(run_seed, f + 1), std::move(parts[f]), {}});
  }

  auto execute = [&](Job& job) {
    std::vector<data::VideoRecord> train, test;
    std::size_t next = 0;
    for (std::size_t i = 0; i < videos.size(); ++i) {
      if (next < job.test.size() && job.test[next] == i) {
        test.push_back(videos[i]);
        ++next;
      } else {
        train.push_back(videos[i]);
      }
    }
    const auto trained = train_pipeline(train, cfg, job.seed);
    job.report = eval::evaluate(trained.model, test, cfg.eval_mode);
  };

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = cursor++; i < jobs.size(); i = cursor++) {
      try {
        execute(jobs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(cfg.jobs, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t run = 0; run < cfg.runs; ++run) {
    double tau = 0.0, rho = 0.0;
    for (auto& job : jobs) {
      if (job.run != run) continue;
      tau += job.report.mean_tau;
      rho += job.report.mean_rho;
      for (auto& v : job.report.per_video) {
        v.run = job.run;
        v.fold = job.fold;
        final_report.per_video.push_back(std::move(v));
      }
    }
    final_report.run_mean_tau.push_back(tau / static_cast<double>(cfg.folds));
    final_report.run_mean_rho.push_back(rho / static_cast<double>(cfg.folds));
  }
  final_report.mean_tau = std::accumulate(final_report.run_mean_tau.begin(), final_report.run_mean_tau.end(), 0.0) /
                          static_cast<double>(cfg.runs);
  final_report.mean_rho = std::accumulate(final_report.run_mean_rho.begin(), final_report.run_mean_rho.end(), 0.0) /
                          static_cast<double>(cfg.runs);
  return final_report;
}

}  // namespace trimmer
