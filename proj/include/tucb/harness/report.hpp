#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tucb/complexity.hpp"
#include "tucb/harness/config.hpp"
#include "tucb/spectral/diagnostics.hpp"

namespace tucb::harness {

/// 17 significant digits, round-trips through strtod.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// ---- regret.csv ------------------------------------------------------------

inline constexpr const char* kRegretHeader =
    "policy,theta_bar,episode,replication,regret,cumulative_regret,model_error,epsilon_j";

/// One row per (policy, replication, episode). theta_bar and episode are
/// 1-based; model_error and epsilon_j are nan for policies that know Theta.
struct ReportRow {
  std::string policy;
  std::size_t theta_bar = 1;
  std::size_t episode = 1;
  std::size_t replication = 0;
  double regret = 0.0;
  double cumulative_regret = 0.0;
  double model_error = std::numeric_limits<double>::quiet_NaN();
  double epsilon_j = std::numeric_limits<double>::quiet_NaN();
};

inline void write_regret_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kRegretHeader << '\n';
  for (const auto& r : rows)
    out << r.policy << ',' << r.theta_bar << ',' << r.episode << ',' << r.replication << ','
        << format_double(r.regret) << ',' << format_double(r.cumulative_regret) << ','
        << format_double(r.model_error) << ',' << format_double(r.epsilon_j) << '\n';
}

inline std::vector<ReportRow> read_regret_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRegretHeader)
    throw std::invalid_argument("regret.csv: unexpected header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 8) throw std::invalid_argument("regret.csv: expected 8 columns");
    ReportRow r;
    r.policy = c[0];
    r.theta_bar = std::stoul(c[1]);
    r.episode = std::stoul(c[2]);
    r.replication = std::stoul(c[3]);
    r.regret = parse_double(c[4]);
    r.cumulative_regret = parse_double(c[5]);
    r.model_error = parse_double(c[6]);
    r.epsilon_j = parse_double(c[7]);
    rows.push_back(r);
  }
  return rows;
}

// ---- complexity.csv --------------------------------------------------------

struct ComplexityCell {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // non-empty when the cell is degenerate
};

struct ComplexityRow {
  std::string label;  // theta_1..theta_m, then "avg"
  ComplexityCell ucb, ucb_plus, mucb;
};

/// Per-model complexities for UCB, UCB+ and mUCB plus the rho-weighted average.
inline std::vector<ComplexityRow> complexity_report(const ModelSet& set) {
  std::vector<ComplexityRow> rows;
  auto cell = [&](ModelIndex t, Policy p) {
    ComplexityCell c;
    try {
      c.value = complexity(set, t, p);
    } catch (const DegenerateModelError& e) {
      c.error = e.what();
    }
    return c;
  };
  ComplexityRow avg{"avg", {0.0, {}}, {0.0, {}}, {0.0, {}}};
  for (ModelIndex t = 0; t < set.num_models(); ++t) {
    ComplexityRow row{"theta_" + std::to_string(t + 1), cell(t, Policy::UCB),
                      cell(t, Policy::UCBPlus), cell(t, Policy::MUCB)};
    const double w = set.rho()(static_cast<Eigen::Index>(t));
    avg.ucb.value += w * row.ucb.value;
    avg.ucb_plus.value += w * row.ucb_plus.value;
    avg.mucb.value += w * row.mucb.value;
    rows.push_back(std::move(row));
  }
  for (auto* c : {&avg.ucb, &avg.ucb_plus, &avg.mucb})
    if (std::isnan(c->value)) c->error = "average over degenerate cells";
  rows.push_back(avg);
  return rows;
}

inline constexpr const char* kComplexityHeader = "theta,ucb,ucb_plus,mucb";

inline void write_complexity_csv(std::ostream& out, const std::vector<ComplexityRow>& rows) {
  out << kComplexityHeader << '\n';
  for (const auto& r : rows)
    out << r.label << ',' << format_double(r.ucb.value) << ',' << format_double(r.ucb_plus.value)
        << ',' << format_double(r.mucb.value) << '\n';
}

// ---- models_estimated.csv --------------------------------------------------

inline constexpr const char* kModelsHeader =
    "replication,episode,model,arm,estimate,matched_true_model,true_value,matched_error";

struct ModelsCheckpointRows {
  std::size_t replication = 0;
  Checkpoint checkpoint;
};

inline void write_models_csv(std::ostream& out, const ModelSet& truth,
                             const std::vector<ModelsCheckpointRows>& checkpoints) {
  out << kModelsHeader << '\n';
  for (const auto& cp : checkpoints) {
    const auto& est = cp.checkpoint.estimated;
    const auto& perm = cp.checkpoint.match.permutation;
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t t = 0; t < perm.size(); ++t) inverse[perm[t]] = t;
    for (Eigen::Index e = 0; e < est.rows(); ++e)
      for (Eigen::Index i = 0; i < est.cols(); ++i) {
        const std::size_t true_model = inverse[static_cast<std::size_t>(e)];
        out << cp.replication << ',' << cp.checkpoint.episode << ',' << e + 1 << ',' << i + 1
            << ',' << format_double(est(e, i)) << ',' << true_model + 1 << ','
            << format_double(truth.mean(true_model, static_cast<ArmIndex>(i))) << ','
            << format_double(cp.checkpoint.match.max_error) << '\n';
      }
  }
}

// ---- diagnostics.json ------------------------------------------------------

inline nlohmann::json to_json(const SpectrumDiagnostics& d) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_double(v);
  };
  nlohmann::json j;
  j["top_eigenvalues"] = std::vector<double>(d.top_eigenvalues.data(),
                                             d.top_eigenvalues.data() + d.top_eigenvalues.size());
  j["sigma_min"] = d.sigma_min;
  j["sigma_max"] = d.sigma_max;
  j["gamma_sigma"] = d.gamma_sigma;
  j["lambda_max"] = d.lambda_max;
  j["lambda_min"] = d.lambda_min;
  j["mu_max"] = d.mu_max;
  j["c_theta"] = num(d.c_theta);
  j["min_episodes"] = num(d.min_episodes);
  j["degenerate_spectrum"] = d.degenerate_spectrum;
  return j;
}

inline nlohmann::json to_json(const MomentErrorReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_double(v);
  };
  return {{"eps2", num(r.eps2)},
          {"eps3", num(r.eps3)},
          {"eps_tensor", num(r.eps_tensor)},
          {"eps_bound_rhs", num(r.eps_bound_rhs)},
          {"condition_holds", r.condition_holds},
          {"bound_satisfied", r.bound_satisfied()}};
}

}  // namespace tucb::harness
