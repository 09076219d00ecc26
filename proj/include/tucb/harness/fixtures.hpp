#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tucb/harness/config.hpp"
#include "tucb/model_set.hpp"

namespace tucb::harness {

/// Five models over seven arms with uniform task distribution.
inline ModelSet builtin_paper_models() {
  Matrix means(5, 7);
  means << 0.90, 0.75, 0.45, 0.55, 0.58, 0.61, 0.65,
           0.75, 0.89, 0.45, 0.55, 0.58, 0.61, 0.65,
           0.20, 0.23, 0.45, 0.35, 0.30, 0.18, 0.25,
           0.34, 0.31, 0.45, 0.725, 0.33, 0.37, 0.47,
           0.60, 0.50, 0.45, 0.35, 0.95, 0.90, 0.80;
  return ModelSet(means);
}

/// Means i.i.d. uniform on [0,1], uniform rho.
inline ModelSet random_model_set(std::size_t m, std::size_t K, std::uint64_t seed) {
  Rng rng(seed);
  Matrix means(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(K));
  for (Eigen::Index t = 0; t < means.rows(); ++t)
    for (Eigen::Index i = 0; i < means.cols(); ++i) means(t, i) = rng.uniform();
  return ModelSet(means);
}

/// Model file: one comma-separated row of K means per model, optionally a
/// line `rho, p1, ..., pm`; `#` starts a comment.
inline ModelSet parse_model_file(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::vector<double> rho;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.emplace_back(detail::trim(cell));
    while (!cells.empty() && cells.back().empty()) cells.pop_back();
    if (cells.empty()) continue;
    bool is_rho = cells.front() == "rho";
    std::vector<double> values;
    for (std::size_t c = is_rho ? 1 : 0; c < cells.size(); ++c)
      values.push_back(detail::parse_number<double>("model value", cells[c], line_no));
    if (is_rho) {
      rho = values;
    } else {
      if (!rows.empty() && values.size() != rows.front().size())
        throw ConfigError(line_no, "model row has " + std::to_string(values.size()) +
                                       " arms, expected " + std::to_string(rows.front().size()));
      rows.push_back(values);
    }
  }
  if (rows.empty()) throw ConfigError(0, "model file contains no models");
  Matrix means(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t i = 0; i < rows[t].size(); ++i)
      means(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = rows[t][i];
  try {
    if (rho.empty()) return ModelSet(means);
    return ModelSet(means, Eigen::Map<Vector>(rho.data(), static_cast<Eigen::Index>(rho.size())));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, std::string("invalid model file: ") + e.what());
  }
}

/// `builtin-paper`, `random:<m>x<K>:<seed>`, or a path (optionally `file:<path>`).
inline ModelSet resolve_model_source(const std::string& source) {
  if (source == "builtin-paper") return builtin_paper_models();
  if (source.rfind("random:", 0) == 0) {
    std::size_t m = 0, K = 0;
    unsigned long long seed = 0;
    if (std::sscanf(source.c_str(), "random:%zux%zu:%llu", &m, &K, &seed) != 3 || m == 0 || K == 0)
      throw ConfigError(0, "model_source '" + source + "' must look like random:<m>x<K>:<seed>");
    return random_model_set(m, K, seed);
  }
  const std::string path = source.rfind("file:", 0) == 0 ? source.substr(5) : source;
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_file(ss.str());
}

}  // namespace tucb::harness
