// Copyright 2026 The wqte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQTE_BALANCE_HPP
#define WQTE_BALANCE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"
#include "wqte/propensity.hpp"

namespace wqte {

enum class TiltingTag { kUniform, kOverlap, kTreated, kUntreated, kCustom };

/// Tilting function g(x) selecting the target population f(x) g(x).
struct TiltingSpec {
  TiltingTag tag = TiltingTag::kUniform;
  /// Only for kCustom; must be positive and finite at every observed x.
  std::function<double(const Eigen::RowVectorXd&)> custom;
  std::string custom_name = "custom";

  static TiltingSpec uniform() { return {}; }
  static TiltingSpec overlap() { return {TiltingTag::kOverlap, {}, {}}; }
  static TiltingSpec treated() { return {TiltingTag::kTreated, {}, {}}; }
  static TiltingSpec untreated() { return {TiltingTag::kUntreated, {}, {}}; }
  static TiltingSpec from_function(std::function<double(const Eigen::RowVectorXd&)> g,
                                   std::string name = "custom") {
    return {TiltingTag::kCustom, std::move(g), std::move(name)};
  }
};

inline std::string to_string(const TiltingSpec& g) {
  switch (g.tag) {
    case TiltingTag::kUniform:
      return "uniform";
    case TiltingTag::kOverlap:
      return "overlap";
    case TiltingTag::kTreated:
      return "treated";
    case TiltingTag::kUntreated:
      return "untreated";
    case TiltingTag::kCustom:
      return g.custom_name;
  }
  return "unknown";
}

inline TiltingSpec parse_tilting(const std::string& name) {
  if (name == "uniform") return TiltingSpec::uniform();
  if (name == "overlap") return TiltingSpec::overlap();
  if (name == "treated") return TiltingSpec::treated();
  if (name == "untreated") return TiltingSpec::untreated();
  throw ArgumentError("unknown tilting '" + name + "' (uniform|overlap|treated|untreated)");
}

/// g(x_i) for every unit given the binary propensity e(x_i).
inline Eigen::VectorXd tilting_values(const TiltingSpec& g, const Eigen::VectorXd& e,
                                      const Eigen::MatrixXd& x) {
  Eigen::VectorXd out(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    switch (g.tag) {
      case TiltingTag::kUniform:
        out[i] = 1.0;
        break;
      case TiltingTag::kOverlap:
        out[i] = e[i] * (1.0 - e[i]);
        break;
      case TiltingTag::kTreated:
        out[i] = e[i];
        break;
      case TiltingTag::kUntreated:
        out[i] = 1.0 - e[i];
        break;
      case TiltingTag::kCustom: {
        if (!g.custom) throw TiltingError("custom tilting has no function");
        const double v = g.custom(x.row(i));
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw TiltingError("tilting function is not positive and finite at unit " +
                             std::to_string(i));
        }
        out[i] = v;
        break;
      }
    }
  }
  return out;
}

/// Per-unit balancing weights, stored unnormalized.
///
/// Binary: w1 is g/e on treated units (zero elsewhere), w0 is g/(1-e) on
/// controls. `w` is always the weight on the level the unit received.
struct WeightVector {
  Eigen::VectorXd w1;
  Eigen::VectorXd w0;
  Eigen::VectorXd w;
};

struct ArmDiagnostics {
  int level = 0;
  double total = 0.0;
  double max_weight = 0.0;
  double effective_size = 0.0;  // (sum w)^2 / sum w^2
};

inline std::vector<ArmDiagnostics> weight_diagnostics(const WeightVector& weights,
                                                      std::span<const int> labels) {
  std::vector<ArmDiagnostics> out;
  int max_level = 0;
  for (int l : labels) max_level = std::max(max_level, l);
  const int first = *std::min_element(labels.begin(), labels.end()) == 0 ? 0 : 1;
  for (int level = first; level <= max_level; ++level) {
    ArmDiagnostics d{level, 0.0, 0.0, 0.0};
    double sq = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != level) continue;
      const double v = weights.w[static_cast<Eigen::Index>(i)];
      d.total += v;
      sq += v * v;
      d.max_weight = std::max(d.max_weight, v);
    }
    d.effective_size = sq > 0.0 ? d.total * d.total / sq : 0.0;
    out.push_back(d);
  }
  return out;
}

namespace detail {

inline void require_positive_arms(const WeightVector& weights, std::span<const int> labels,
                                  int first, int last) {
  for (int level = first; level <= last; ++level) {
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == level) total += weights.w[static_cast<Eigen::Index>(i)];
    }
    if (!(total > 0.0)) {
      throw DegenerateArmError("exposure level " + std::to_string(level) +
                               " has zero total weight");
    }
  }
}

}  // namespace detail

/// Binary balancing weights w1 = g z / e, w0 = g (1 - z) / (1 - e).
inline WeightVector make_weights_binary(const PropensityModel& ps, const Eigen::VectorXd& z,
                                        const TiltingSpec& g,
                                        const Eigen::MatrixXd& x = Eigen::MatrixXd()) {
  if (ps.scores.cols() != 2) throw ArgumentError("binary weights need a binary propensity model");
  if (ps.scores.rows() != z.size()) throw ArgumentError("propensity rows do not match exposure");
  if (g.tag == TiltingTag::kCustom && x.rows() != z.size()) {
    throw ArgumentError("custom tilting needs the covariate matrix");
  }
  const Eigen::VectorXd e = ps.treated_score();
  const Eigen::VectorXd gv = tilting_values(g, e, x);
  WeightVector out{Eigen::VectorXd::Zero(z.size()), Eigen::VectorXd::Zero(z.size()),
                   Eigen::VectorXd::Zero(z.size())};
  std::vector<int> labels(static_cast<std::size_t>(z.size()));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] == 1.0) {
      out.w1[i] = gv[i] / e[i];
      out.w[i] = out.w1[i];
    } else {
      out.w0[i] = gv[i] / (1.0 - e[i]);
      out.w[i] = out.w0[i];
    }
    labels[static_cast<std::size_t>(i)] = z[i] == 1.0 ? 1 : 0;
  }
  if (!out.w.allFinite() || (out.w.array() < 0.0).any()) {
    throw DegenerateWeightsError("balancing weights are not finite and non-negative");
  }
  detail::require_positive_arms(out, labels, 0, 1);
  return out;
}

enum class CategoricalScheme { kGeneralizedIpw, kGeneralizedOw };

/// IPW: 1 / e_{z_i}(x_i). OW: (1 / e_{z_i}) / sum_j (1 / e_j).
inline WeightVector make_weights_categorical(const PropensityModel& ps, std::span<const int> labels,
                                             CategoricalScheme scheme) {
  const Eigen::MatrixXd& s = ps.scores;
  if (s.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw ArgumentError("propensity rows do not match exposure");
  }
  WeightVector out;
  out.w.resize(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const int level = labels[static_cast<std::size_t>(i)];
    if (level < 1 || level > s.cols()) throw ArgumentError("exposure label out of range");
    const double inv = 1.0 / s(i, level - 1);
    if (scheme == CategoricalScheme::kGeneralizedIpw) {
      out.w[i] = inv;
    } else {
      out.w[i] = inv / s.row(i).cwiseInverse().sum();
    }
  }
  if (!out.w.allFinite() || (out.w.array() < 0.0).any()) {
    throw DegenerateWeightsError("balancing weights are not finite and non-negative");
  }
  detail::require_positive_arms(out, labels, 1, static_cast<int>(s.cols()));
  return out;
}

// ---------------------------------------------------------------------------
// Balance diagnostics

struct BalanceRow {
  std::string covariate;
  std::string contrast;  // "1 vs 0" or "j vs 1"
  double weighted_smd = 0.0;
  double unweighted_smd = 0.0;
  bool undefined = false;  // pooled SD is zero
};

struct BalanceTable {
  std::vector<BalanceRow> rows;
};

/// Standardized mean differences of each covariate between each exposure
/// level and the reference level, weighted and unweighted, scaled by the
/// pooled unweighted SD sqrt((s_a^2 + s_b^2) / 2).
inline BalanceTable balance_table(const Eigen::MatrixXd& x, std::span<const int> labels,
                                  const WeightVector& weights,
                                  const std::vector<std::string>& names = {}) {
  if (x.rows() != static_cast<Eigen::Index>(labels.size()) || weights.w.size() != x.rows()) {
    throw ArgumentError("balance_table: dimension mismatch");
  }
  const int lo = *std::min_element(labels.begin(), labels.end());
  const int hi = *std::max_element(labels.begin(), labels.end());
  struct Moments {
    double wmean = 0.0;
    double mean = 0.0;
    double var = 0.0;
  };
  auto moments = [&](int level, Eigen::Index col) {
    Moments m;
    double wsum = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != level) continue;
      const auto r = static_cast<Eigen::Index>(i);
      m.wmean += weights.w[r] * x(r, col);
      wsum += weights.w[r];
      m.mean += x(r, col);
      count += 1.0;
    }
    m.wmean = wsum > 0.0 ? m.wmean / wsum : std::numeric_limits<double>::quiet_NaN();
    m.mean /= count;
    double ss = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != level) continue;
      const double d = x(static_cast<Eigen::Index>(i), col) - m.mean;
      ss += d * d;
    }
    m.var = count > 1.0 ? ss / (count - 1.0) : 0.0;
    return m;
  };
  BalanceTable table;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const std::string name = static_cast<std::size_t>(c) < names.size()
                                 ? names[static_cast<std::size_t>(c)]
                                 : "x" + std::to_string(c + 1);
    const Moments ref = moments(lo, c);
    for (int level = lo + 1; level <= hi; ++level) {
      const Moments cur = moments(level, c);
      BalanceRow row{name, std::to_string(level) + " vs " + std::to_string(lo), 0.0, 0.0, false};
      const double pooled = std::sqrt(0.5 * (ref.var + cur.var));
      if (!(pooled > 0.0)) {
        row.undefined = true;
        row.weighted_smd = row.unweighted_smd = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.weighted_smd = (cur.wmean - ref.wmean) / pooled;
        row.unweighted_smd = (cur.mean - ref.mean) / pooled;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

inline std::string to_csv(const BalanceTable& table) {
  std::string out = "covariate,contrast,weighted_smd,unweighted_smd\n";
  for (const auto& r : table.rows) {
    out += csv::escape(r.covariate) + "," + csv::escape(r.contrast) + ",";
    out += r.undefined ? "NA" : csv::format_double(r.weighted_smd);
    out += ",";
    out += r.undefined ? "NA" : csv::format_double(r.unweighted_smd);
    out += "\n";
  }
  return out;
}

inline nlohmann::json to_json(const BalanceTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json j{{"covariate", r.covariate}, {"contrast", r.contrast}};
    if (r.undefined) {
      j["weighted_smd"] = nullptr;
      j["unweighted_smd"] = nullptr;
    } else {
      j["weighted_smd"] = r.weighted_smd;
      j["unweighted_smd"] = r.unweighted_smd;
    }
    rows.push_back(std::move(j));
  }
  return {{"balance", rows}};
}

}  // namespace wqte

#endif  // WQTE_BALANCE_HPP
