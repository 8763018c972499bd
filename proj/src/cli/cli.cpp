#include "trimmer/cli/cli.hpp"

#include "trimmer/bench.hpp"
#include "trimmer/cli/csv.hpp"
#include "trimmer/cli/plot.hpp"
#include "trimmer/config.hpp"
#include "trimmer/dataio.hpp"
#include "trimmer/errors.hpp"
#include "trimmer/evaluation.hpp"
#include "trimmer/infotheory.hpp"
#include "trimmer/numerics/model_io.hpp"
#include "trimmer/pretrain.hpp"
#include "trimmer/protocol.hpp"
#include "trimmer/reinforce.hpp"
#include "trimmer/segmentation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

namespace trimmer::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() {
  return "trimmer " + std::string(kVersion) + " (VSF format " + std::to_string(data::kVsfVersion) +
         ", model format " + std::to_string(numerics::kModelFormatVersion) + ")";
}

namespace {

std::string dashed(std::string_view key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

// --config plus one flag per config key; flags override the file.
struct ConfigFlags {
  std::string config_path;
  std::string data_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app, bool with_data) {
    app->add_option("--config", config_path, "flat key = value configuration file");
    if (with_data) app->add_option("--data", data_path, "VSF file or directory of VSF files");
    for (const auto& k : config_keys()) {
      if (k.name == "seed" || k.name == "data") continue;
      const std::string name(k.name);
      options[name] = app->add_option("--" + dashed(k.name), values[name], std::string(k.help));
    }
  }

  RunConfig resolve(const std::optional<std::uint64_t>& seed) const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [name, opt] : options)
      if (opt->count() > 0) set_config_value(cfg, name, values.at(name));
    if (!data_path.empty()) cfg.data_path = data_path;
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
  }
};

std::vector<data::VideoRecord> load_videos(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw UsageError("no dataset given (--data or 'data' in the config)");
  auto videos = data::load_dataset(cfg.data_path);
  if (videos.empty()) throw DataError("dataset " + cfg.data_path + " contains no videos");
  const std::size_t d = videos.front().sequence.dim();
  for (const auto& v : videos)
    if (v.sequence.dim() != d)
      throw DataError("video '" + v.id() + "' has feature width " + std::to_string(v.sequence.dim()) +
                      ", expected " + std::to_string(d));
  return videos;
}

void check_model_width(const numerics::ParameterSet& model, const std::vector<data::VideoRecord>& videos) {
  const std::size_t want = model.architecture().input_dim;
  if (videos.front().sequence.dim() != want)
    throw ShapeError("model expects " + std::to_string(want) + "-d features, data has " +
                     std::to_string(videos.front().sequence.dim()));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw DataError("failed writing " + path.string());
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << j.dump(2) << '\n';
  else
    write_text(path, j.dump(2) + "\n");
}

const data::VideoRecord& pick_video(const std::vector<data::VideoRecord>& videos, const std::string& id) {
  for (const auto& v : videos)
    if (v.id() == id) return v;
  throw UsageError("no video with id '" + id + "'");
}

std::vector<const data::VideoRecord*> select_videos(const std::vector<data::VideoRecord>& videos,
                                                    const std::string& id) {
  std::vector<const data::VideoRecord*> out;
  if (!id.empty())
    out.push_back(&pick_video(videos, id));
  else
    for (const auto& v : videos) out.push_back(&v);
  return out;
}

struct Options {
  std::optional<std::uint64_t> seed;

  // synth
  std::size_t synth_videos = 8, synth_frames = 64, synth_dim = 16, synth_annotators = 5;
  std::string synth_out;

  // entropy-profile, summarize
  std::string in_path, video_id, out_path;

  // pretrain / finetune
  std::string model_out, trace_out, init_model, reward_trace;

  // summarize / evaluate
  std::string model_path, mode;

  // bench
  std::string reward;
  bool quick = false;
  std::size_t repetitions = 30;
  double min_batch_ms = 2.0;

  // plot
  std::string x_column, title;
  std::vector<std::string> series;

  ConfigFlags pretrain_cfg, finetune_cfg, summarize_cfg, evaluate_cfg, cv_cfg;
};

std::uint64_t seed_or_zero(const Options& o) { return o.seed.value_or(0); }

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.synth_videos < 1 || o.synth_frames < 2 || o.synth_dim < 1) throw UsageError("synth: need videos >= 1, frames >= 2, dim >= 1");
  const auto ds = data::synth_dataset(o.synth_videos, o.synth_frames, o.synth_dim, seed_or_zero(o), o.synth_annotators);
  data::write_vsf(ds.videos, o.synth_out);
  out << "wrote " << ds.videos.size() << " videos to " << o.synth_out << '\n';
  return 0;
}

int cmd_entropy_profile(const Options& o, std::ostream& out) {
  const auto videos = data::load_dataset(o.in_path);
  CsvTable t;
  t.header = {"video_id", "t", "H_t", "Delta_t"};
  for (const auto* v : select_videos(videos, o.video_id)) {
    const auto prof = info::entropy_profile(v->sequence);
    for (std::size_t i = 0; i < prof.size(); ++i)
      t.rows.push_back({v->id(), std::to_string(i), format_double(prof.entropies[i]), format_double(prof.ptri[i])});
  }
  if (o.out_path.empty())
    write_csv(out, t);
  else
    save_csv(t, o.out_path);
  return 0;
}

int cmd_pretrain(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = o.pretrain_cfg.resolve(o.seed);
  const auto videos = load_videos(cfg);
  auto arch = cfg.arch;
  arch.input_dim = videos.front().sequence.dim();
  auto model = numerics::ParameterSet::initialize(arch, derive_seed(cfg.seed, seed_stream::kInit));
  auto pcfg = cfg.pretrain;
  pcfg.seed = derive_seed(cfg.seed, seed_stream::kPretrain);
  const auto seqs = data::sequences(videos);
  const auto result = pretrain::pretrain(std::move(model), seqs, pcfg);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  numerics::save_model(result.model, o.model_out);
  if (!o.trace_out.empty()) {
    CsvTable t;
    t.header = {"epoch", "loss"};
    for (std::size_t e = 0; e < result.loss_trace.size(); ++e)
      t.rows.push_back({std::to_string(e + 1), format_double(result.loss_trace[e])});
    save_csv(t, o.trace_out);
  }
  if (!result.loss_trace.empty())
    out << "pretrain: loss " << result.loss_trace.front() << " -> " << result.loss_trace.back() << '\n';
  return 0;
}

int cmd_finetune(const Options& o, std::ostream& out) {
  const RunConfig cfg = o.finetune_cfg.resolve(o.seed);
  const auto videos = load_videos(cfg);
  auto model = numerics::load_model(o.init_model);
  check_model_width(model, videos);
  auto rcfg = cfg.rl;
  rcfg.seed = derive_seed(cfg.seed, seed_stream::kFinetune);
  const auto seqs = data::sequences(videos);
  const auto result = rl::finetune(std::move(model), seqs, rcfg);
  numerics::save_model(result.model, o.model_out);
  if (!o.reward_trace.empty()) {
    CsvTable t;
    t.header = {"epoch", "mean_R", "mean_R_ptrim", "mean_R_rep"};
    for (std::size_t e = 0; e < result.trace.mean_total.size(); ++e)
      t.rows.push_back({std::to_string(e + 1), format_double(result.trace.mean_total[e]),
                        format_double(result.trace.mean_ptrim[e]), format_double(result.trace.mean_rep[e])});
    save_csv(t, o.reward_trace);
  }
  if (!result.trace.mean_total.empty())
    out << "finetune: mean reward " << result.trace.mean_total.front() << " -> " << result.trace.mean_total.back()
        << '\n';
  return 0;
}

int cmd_summarize(const Options& o, std::ostream& out) {
  const RunConfig cfg = o.summarize_cfg.resolve(o.seed);
  const auto videos = data::load_dataset(o.in_path);
  if (videos.empty()) throw DataError(o.in_path + " contains no videos");
  const auto model = numerics::load_model(o.model_path);
  json doc;
  auto& arr = doc["videos"] = json::array();
  for (const auto* v : select_videos(videos, o.video_id)) {
    if (v->sequence.dim() != model.architecture().input_dim)
      throw ShapeError("video '" + v->id() + "' width does not match the model");
    const auto sel = seg::generate_summary(model, v->sequence, v->picks, v->n_original_frames, cfg.segmentation);
    json boundaries = json::array(), segments = json::array(), chosen = json::array(), mask = json::array();
    for (std::size_t i = 0; i < sel.segments.size(); ++i) {
      if (i > 0) boundaries.push_back(sel.segments[i].begin);
      segments.push_back({sel.segments[i].begin, sel.segments[i].end});
      if (sel.chosen[i]) chosen.push_back(i);
    }
    for (const auto& [value, run] : seg::run_length_encode(sel.frame_mask)) mask.push_back({value, run});
    arr.push_back({{"video_id", v->id()},
                   {"n_frames", v->n_frames()},
                   {"n_original_frames", v->n_original_frames},
                   {"boundaries", boundaries},
                   {"segments", segments},
                   {"segment_scores", sel.segment_scores},
                   {"segment_lengths", sel.segment_lengths},
                   {"chosen", chosen},
                   {"budget", sel.budget},
                   {"summary_length", sel.summary_length()},
                   {"frame_mask", mask}});
  }
  emit_json(doc, o.out_path, out);
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  RunConfig cfg = o.evaluate_cfg.resolve(o.seed);
  const auto videos = load_videos(cfg);
  const auto model = numerics::load_model(o.model_path);
  check_model_width(model, videos);
  const auto mode = o.mode.empty() ? cfg.eval_mode : eval::parse_eval_mode(o.mode);
  const auto report = eval::evaluate(model, videos, mode);
  emit_json(report.to_json(), o.out_path, out);
  if (!o.out_path.empty()) out << "tau " << report.mean_tau << "  rho " << report.mean_rho << '\n';
  return 0;
}

int cmd_cv(const Options& o, std::ostream& out) {
  const RunConfig cfg = o.cv_cfg.resolve(o.seed);
  const auto videos = load_videos(cfg);
  const auto report = cross_validate(videos, cfg);
  auto j = report.to_json();
  j["master_seed"] = cfg.seed;
  emit_json(j, o.out_path, out);
  if (!o.out_path.empty()) out << "tau " << report.mean_tau << "  rho " << report.mean_rho << '\n';
  return 0;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  const auto reward = bench::parse_reward_id(o.reward);
  bench::BenchOptions opt;
  opt.repetitions = o.repetitions;
  opt.min_batch_seconds = o.min_batch_ms / 1000.0;
  opt.seed = seed_or_zero(o);
  const auto grid = bench::default_grid(reward, o.quick);
  const auto rows = bench::complexity_bench(reward, grid, opt);
  CsvTable t;
  t.header = {"reward", "N", "k", "wall_time_ns", "reward_value"};
  for (const auto& r : rows)
    t.rows.push_back({std::string(bench::to_string(r.reward)), std::to_string(r.n), std::to_string(r.k),
                      format_double(r.wall_time_ns), format_double(r.reward_value)});
  if (o.out_path.empty())
    write_csv(out, t);
  else
    save_csv(t, o.out_path);
  const auto fit = bench::fit_scaling(reward, rows);
  (o.out_path.empty() ? err : out) << bench::to_string(reward) << ": time ~ " << fit.predictor
                                          << "  R^2 " << fit.linear.r_squared << "  log-log slope "
                                          << fit.loglog_slope << '\n';
  return 0;
}

int cmd_plot(const Options& o, std::ostream& out) {
  const auto table = read_csv(o.in_path);
  PlotSpec spec;
  spec.x_column = o.x_column;
  spec.series = o.series;
  spec.title = o.title;
  const std::string svg = plot_csv(table, spec);
  fs::path target = o.out_path.empty() ? fs::path(o.in_path).replace_extension(".svg") : fs::path(o.out_path);
  write_text(target, svg);
  out << "wrote " << target.string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Video summarization with entropy-based rewards", "trimmer"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "master seed; overrides the config");

  auto* synth = app.add_subcommand("synth", "write a planted-structure synthetic dataset");
  synth->add_option("--videos", o.synth_videos, "number of videos")->capture_default_str();
  synth->add_option("--frames", o.synth_frames, "frames per video")->capture_default_str();
  synth->add_option("--dim", o.synth_dim, "feature dimension")->capture_default_str();
  synth->add_option("--annotators", o.synth_annotators, "annotators per video")->capture_default_str();
  synth->add_option("--out", o.synth_out, "output VSF path")->required();

  auto* ent = app.add_subcommand("entropy-profile", "per-frame entropy and relative entropy change");
  ent->add_option("--in", o.in_path, "VSF file")->required();
  ent->add_option("--video", o.video_id, "restrict to one video id");
  ent->add_option("--out", o.out_path, "CSV path (default stdout)");

  auto* pre = app.add_subcommand("pretrain", "stage 1: self-supervised pretraining");
  o.pretrain_cfg.attach(pre, true);
  pre->add_option("--out-model", o.model_out, "output model path")->required();
  pre->add_option("--trace", o.trace_out, "per-epoch loss CSV");

  auto* fine = app.add_subcommand("finetune", "stage 2: policy-gradient fine-tuning");
  o.finetune_cfg.attach(fine, true);
  fine->add_option("--init-model", o.init_model, "pretrained model path")->required();
  fine->add_option("--out-model", o.model_out, "output model path")->required();
  fine->add_option("--reward-trace", o.reward_trace, "per-epoch reward CSV");

  auto* summ = app.add_subcommand("summarize", "segment, select and emit a frame mask");
  o.summarize_cfg.attach(summ, false);
  summ->add_option("--model", o.model_path, "model path")->required();
  summ->add_option("--in", o.in_path, "VSF file")->required();
  summ->add_option("--video", o.video_id, "restrict to one video id");
  summ->add_option("--out", o.out_path, "JSON path (default stdout)");

  auto* evl = app.add_subcommand("evaluate", "rank correlation against annotations");
  o.evaluate_cfg.attach(evl, true);
  evl->add_option("--model", o.model_path, "model path")->required();
  evl->add_option("--mode", o.mode, "per_annotator_mean or vs_mean_gt");
  evl->add_option("--out", o.out_path, "JSON path (default stdout)");

  auto* cv = app.add_subcommand("cv", "repeated k-fold cross-validation");
  o.cv_cfg.attach(cv, true);
  cv->add_option("--out", o.out_path, "JSON path (default stdout)");

  auto* bch = app.add_subcommand("bench", "reward computation timings");
  bch->add_option("--reward", o.reward, "ptrim, rep, drdsn-div or drdsn-rep")->required();
  bch->add_option("--out", o.out_path, "CSV path (default stdout)");
  bch->add_flag("--quick", o.quick, "tiny grid");
  bch->add_option("--repetitions", o.repetitions, "timed repetitions per grid point")->capture_default_str();
  bch->add_option("--min-batch-ms", o.min_batch_ms, "minimum batch duration in milliseconds")->capture_default_str();

  auto* plt = app.add_subcommand("plot", "SVG line chart from a CSV");
  plt->add_option("--in", o.in_path, "CSV file")->required();
  plt->add_option("--out", o.out_path, "SVG path (default: input with .svg)");
  plt->add_option("--series", o.series, "columns to draw (default: all but x)")->delimiter(',');
  plt->add_option("--x", o.x_column, "x column (default: first)");
  plt->add_option("--title", o.title, "chart title");

  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-') {
    const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args[1]; });
    if (!known) {
      err << "error: unknown subcommand '" << args[1] << "'\n\n" << app.help();
      return 1;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  if (seed_opt->count() > 0) o.seed = seed_value;

  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (ent->parsed()) return cmd_entropy_profile(o, out);
    if (pre->parsed()) return cmd_pretrain(o, out, err);
    if (fine->parsed()) return cmd_finetune(o, out);
    if (summ->parsed()) return cmd_summarize(o, out);
    if (evl->parsed()) return cmd_evaluate(o, out);
    if (cv->parsed()) return cmd_cv(o, out);
    if (bch->parsed()) return cmd_bench(o, out, err);
    if (plt->parsed()) return cmd_plot(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace trimmer::cli
