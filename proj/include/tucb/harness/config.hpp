#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tucb/confidence.hpp"
#include "tucb/policies.hpp"
#include "tucb/transfer/tucb.hpp"

namespace tucb::harness {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "TUCB_OUTPUT_DIR";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RtpSettings {
  std::size_t L = 64;
  std::size_t N = 256;
  double tol = 1e-12;
};

struct ExperimentConfig {
  std::string model_source = "builtin-paper";
  std::vector<Policy> policies = {Policy::UCB, Policy::UCBPlus, Policy::MUCB, Policy::TUCB};
  std::size_t J = 200;
  std::size_t n = 1000;
  std::size_t replications = 50;
  std::optional<double> delta;  // 1/n when unset
  double c_theta = 2.0;
  std::size_t estimate_every = 1;
  RtpSettings rtp;
  std::uint64_t master_seed = 0;
  std::string output_dir = default_output_dir();
  TaskSampling task_sampling = TaskSampling::Stratified;
  RadiusVariant radius = RadiusVariant::MUCB;  // radius of the single-task baselines
  std::size_t threads = 1;
  std::size_t checkpoint_every = 0;

  static std::string default_output_dir() {
    const char* env = std::getenv(kOutputDirEnv);
    return env && *env ? std::string(env) : std::string("results");
  }

  double effective_delta() const { return delta ? *delta : 1.0 / static_cast<double>(n); }

  void validate() const {
    if (J < 1) throw ConfigError(0, "J must be >= 1");
    if (n < 1) throw ConfigError(0, "n must be >= 1");
    if (replications < 1) throw ConfigError(0, "replications must be >= 1");
    const double d = effective_delta();
    if (!(d > 0.0 && d < 1.0)) throw ConfigError(0, "delta must lie in (0,1)");
    if (estimate_every < 1) throw ConfigError(0, "estimate_every must be >= 1");
    if (rtp.L < 1 || rtp.N < 1) throw ConfigError(0, "rtp_L and rtp_N must be >= 1");
    if (policies.empty()) throw ConfigError(0, "policy list is empty");
    if (threads < 1) throw ConfigError(0, "threads must be >= 1");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value, std::size_t line) {
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    std::string buf(value);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size())
      throw ConfigError(line, "invalid number '" + buf + "' for key '" + std::string(key) + "'");
  } else {
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ConfigError(line, "invalid integer '" + std::string(value) + "' for key '" +
                                  std::string(key) + "'");
  }
  return out;
}

inline std::vector<Policy> parse_policies(std::string_view value, std::size_t line) {
  if (value == "all") return {Policy::UCB, Policy::UCBPlus, Policy::MUCB, Policy::TUCB};
  std::vector<Policy> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    const auto item = trim(value.substr(start, comma - start));
    if (!item.empty()) {
      try {
        out.push_back(parse_policy(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line, e.what());
      }
    }
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError(line, "empty policy list");
  return out;
}

}  // namespace detail

/// Applies one `key = value` setting. Unknown keys are rejected.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value,
                          std::size_t line = 0) {
  using detail::parse_number;
  if (key == "model_source") cfg.model_source = std::string(value);
  else if (key == "policies") cfg.policies = detail::parse_policies(value, line);
  else if (key == "J") cfg.J = parse_number<std::size_t>(key, value, line);
  else if (key == "n") cfg.n = parse_number<std::size_t>(key, value, line);
  else if (key == "replications") cfg.replications = parse_number<std::size_t>(key, value, line);
  else if (key == "delta") {
    const double d = parse_number<double>(key, value, line);
    if (!(d > 0.0 && d < 1.0)) throw ConfigError(line, "delta must lie in (0,1)");
    cfg.delta = d;
  } else if (key == "c_theta") cfg.c_theta = parse_number<double>(key, value, line);
  else if (key == "estimate_every") cfg.estimate_every = parse_number<std::size_t>(key, value, line);
  else if (key == "rtp_L") cfg.rtp.L = parse_number<std::size_t>(key, value, line);
  else if (key == "rtp_N") cfg.rtp.N = parse_number<std::size_t>(key, value, line);
  else if (key == "rtp_tol") cfg.rtp.tol = parse_number<double>(key, value, line);
  else if (key == "master_seed") cfg.master_seed = parse_number<std::uint64_t>(key, value, line);
  else if (key == "output_dir") cfg.output_dir = std::string(value);
  else if (key == "task_sampling") {
    if (value == "stratified") cfg.task_sampling = TaskSampling::Stratified;
    else if (value == "rho") cfg.task_sampling = TaskSampling::Rho;
    else throw ConfigError(line, "task_sampling must be 'stratified' or 'rho'");
  } else if (key == "radius") {
    if (value == "mucb") cfg.radius = RadiusVariant::MUCB;
    else if (value == "umucb") cfg.radius = RadiusVariant::UMUCB;
    else throw ConfigError(line, "radius must be 'mucb' or 'umucb'");
  } else if (key == "threads") cfg.threads = parse_number<std::size_t>(key, value, line);
  else if (key == "checkpoint_every") cfg.checkpoint_every = parse_number<std::size_t>(key, value, line);
  else throw ConfigError(line, "unknown key '" + std::string(key) + "'");
}

/// Parses `key = value` lines; `#` starts a comment.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg = {}) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (value.empty()) throw ConfigError(line_no, "missing value for key '" + std::string(key) + "'");
    apply_setting(cfg, key, value, line_no);
  }
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace tucb::harness
