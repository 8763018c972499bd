#include "trimmer/config.hpp"

#include "trimmer/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

namespace trimmer {

namespace {

constexpr std::array kKeys = {
    ConfigKey{"seed", "master seed"},
    ConfigKey{"data", "dataset path (VSF file or directory)"},
    ConfigKey{"conv_channels", "conv output channels"},
    ConfigKey{"hidden1", "width of the first fully connected layer"},
    ConfigKey{"hidden2", "width of the second fully connected layer"},
    ConfigKey{"pretrain_epochs", "self-supervised epochs"},
    ConfigKey{"pretrain_lr", "self-supervised learning rate"},
    ConfigKey{"pretrain_weight_decay", "self-supervised weight decay"},
    ConfigKey{"nu", "weight of the score std terms"},
    ConfigKey{"mask_lo", "lower masking ratio"},
    ConfigKey{"mask_hi", "upper masking ratio"},
    ConfigKey{"rl_epochs", "policy-gradient epochs"},
    ConfigKey{"rl_lr", "policy-gradient learning rate"},
    ConfigKey{"rl_weight_decay", "policy-gradient weight decay"},
    ConfigKey{"lambda", "reward balance"},
    ConfigKey{"lambda_on", "component lambda scales: rep | ptrim"},
    ConfigKey{"beta", "weight of the selection-ratio regulariser"},
    ConfigKey{"epsilon_ratio", "target selection ratio"},
    ConfigKey{"baseline_momentum", "moving-average baseline momentum"},
    ConfigKey{"episodes", "episodes per video per step"},
    ConfigKey{"kts_penalty", "segment-count penalty"},
    ConfigKey{"kts_max_segments", "maximum segments, 0 = ceil(N/4)"},
    ConfigKey{"budget_ratio", "summary length budget as a fraction of the original"},
    ConfigKey{"eval_mode", "per_annotator_mean | vs_mean_gt"},
    ConfigKey{"folds", "cross-validation folds"},
    ConfigKey{"runs", "cross-validation repetitions"},
    ConfigKey{"jobs", "parallel fold jobs"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw UsageError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  pretrain.validate();
  rl.validate();
  if (folds < 2) throw UsageError("folds must be >= 2");
  if (runs < 1) throw UsageError("runs must be >= 1");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  if (!(segmentation.budget_ratio > 0.0 && segmentation.budget_ratio <= 1.0))
    throw UsageError("budget_ratio must lie in (0, 1]");
  if (!(segmentation.penalty_c >= 0.0)) throw UsageError("kts_penalty must be non-negative");
  if (arch.conv_channels == 0 || arch.hidden1 == 0 || arch.hidden2 == 0) throw UsageError("layer widths must be positive");
}

std::span<const ConfigKey> config_keys() { return kKeys; }

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  auto u64 = [&] { return parse_number<std::uint64_t>(key, value); };
  auto size = [&] { return static_cast<std::size_t>(parse_number<std::uint64_t>(key, value)); };
  auto real = [&] { return parse_number<double>(key, value); };

  if (key == "seed") cfg.seed = u64();
  else if (key == "data") cfg.data_path = value;
  else if (key == "conv_channels") cfg.arch.conv_channels = size();
  else if (key == "hidden1") cfg.arch.hidden1 = size();
  else if (key == "hidden2") cfg.arch.hidden2 = size();
  else if (key == "pretrain_epochs") cfg.pretrain.epochs = size();
  else if (key == "pretrain_lr") cfg.pretrain.lr = real();
  else if (key == "pretrain_weight_decay") cfg.pretrain.weight_decay = real();
  else if (key == "nu") cfg.pretrain.nu = real();
  else if (key == "mask_lo") cfg.pretrain.mask_lo = real();
  else if (key == "mask_hi") cfg.pretrain.mask_hi = real();
  else if (key == "rl_epochs") cfg.rl.epochs = size();
  else if (key == "rl_lr") cfg.rl.lr = real();
  else if (key == "rl_weight_decay") cfg.rl.weight_decay = real();
  else if (key == "lambda") cfg.rl.lambda = real();
  else if (key == "lambda_on") cfg.rl.lambda_on = rl::parse_lambda_on(value);
  else if (key == "beta") cfg.rl.beta = real();
  else if (key == "epsilon_ratio") cfg.rl.epsilon_ratio = real();
  else if (key == "baseline_momentum") cfg.rl.baseline_momentum = real();
  else if (key == "episodes") cfg.rl.episodes = size();
  else if (key == "kts_penalty") cfg.segmentation.penalty_c = real();
  else if (key == "kts_max_segments") cfg.segmentation.max_segments = size();
  else if (key == "budget_ratio") cfg.segmentation.budget_ratio = real();
  else if (key == "eval_mode") cfg.eval_mode = eval::parse_eval_mode(value);
  else if (key == "folds") cfg.folds = size();
  else if (key == "runs") cfg.runs = size();
  else if (key == "jobs") cfg.jobs = size();
  else throw UsageError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    try {
      set_config_value(cfg, trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RunConfig cfg;
  apply_config_text(cfg, text);
  return cfg;
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  os << "seed = " << c.seed << '\n'
     << "data = " << c.data_path << '\n'
     << "conv_channels = " << c.arch.conv_channels << '\n'
     << "hidden1 = " << c.arch.hidden1 << '\n'
     << "hidden2 = " << c.arch.hidden2 << '\n'
     << "pretrain_epochs = " << c.pretrain.epochs << '\n'
     << "pretrain_lr = " << fmt(c.pretrain.lr) << '\n'
     << "pretrain_weight_decay = " << fmt(c.pretrain.weight_decay) << '\n'
     << "nu = " << fmt(c.pretrain.nu) << '\n'
     << "mask_lo = " << fmt(c.pretrain.mask_lo) << '\n'
     << "mask_hi = " << fmt(c.pretrain.mask_hi) << '\n'
     << "rl_epochs = " << c.rl.epochs << '\n'
     << "rl_lr = " << fmt(c.rl.lr) << '\n'
     << "rl_weight_decay = " << fmt(c.rl.weight_decay) << '\n'
     << "lambda = " << fmt(c.rl.lambda) << '\n'
     << "lambda_on = " << rl::to_string(c.rl.lambda_on) << '\n'
     << "beta = " << fmt(c.rl.beta) << '\n'
     << "epsilon_ratio = " << fmt(c.rl.epsilon_ratio) << '\n'
     << "baseline_momentum = " << fmt(c.rl.baseline_momentum) << '\n'
     << "episodes = " << c.rl.episodes << '\n'
     << "kts_penalty = " << fmt(c.segmentation.penalty_c) << '\n'
     << "kts_max_segments = " << c.segmentation.max_segments << '\n'
     << "budget_ratio = " << fmt(c.segmentation.budget_ratio) << '\n'
     << "eval_mode = " << eval::to_string(c.eval_mode) << '\n'
     << "folds = " << c.folds << '\n'
     << "runs = " << c.runs << '\n'
     << "jobs = " << c.jobs << '\n';
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t z = master ^ (stream * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace trimmer
