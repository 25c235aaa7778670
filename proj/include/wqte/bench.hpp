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

#ifndef WQTE_BENCH_HPP
#define WQTE_BENCH_HPP

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"
#include "wqte/estimators.hpp"
#include "wqte/inference.hpp"
#include "wqte/oracle_constants.hpp"
#include "wqte/propensity.hpp"
#include "wqte/rng.hpp"
#include "wqte/simlab.hpp"

#ifndef WQTE_VERSION
#define WQTE_VERSION "0.0.0"
#endif

namespace wqte {

inline constexpr int kManifestSchemaVersion = 1;

/// Truth for one contrast: level vs baseline (binary and continuous use 2
/// for "1 vs 0").
struct BenchTruth {
  int level = 2;
  double qte = 0.0;
  double wqte_overlap = std::numeric_limits<double>::quiet_NaN();
};

/// Frozen Monte Carlo truth for a preset key at `tau`.
inline std::optional<BenchTruth> frozen_truth(const std::string& key, double tau, int level = 2) {
  for (const auto& o : kFrozenOracles) {
    if (key == o.key && o.level == level && o.tau == tau) return BenchTruth{level, o.qte, o.wqte_overlap};
  }
  return std::nullopt;
}

/// Correctly specified outcome model for a scenario's quantile regression.
inline TrueModelSpec true_model_spec(const SimScenario& sc) {
  TrueModelSpec spec;
  const bool cat = sc.exposure.is_categorical();
  const int J = sc.exposure.levels;
  const bool d4 = sc.d == 4;
  const bool inter = sc.interaction;
  spec.features = [cat, J, d4, inter](const Eigen::RowVectorXd& x, double z) {
    std::vector<double> f{1.0};
    if (cat) {
      for (int j = 2; j <= J; ++j) f.push_back(std::lround(z) == j ? 1.0 : 0.0);
    } else {
      f.push_back(z);
    }
    if (inter) f.push_back(z * x[0]);
    if (d4) {
      f.insert(f.end(), {std::sin(x[0]), x[1] * x[1], x[2], x[3], x[2] * x[3]});
    } else {
      f.push_back(x[0]);
    }
    return Eigen::Map<Eigen::RowVectorXd>(f.data(), static_cast<Eigen::Index>(f.size())).eval();
  };
  if (cat) {
    spec.effect_columns.clear();
    for (int j = 2; j <= J; ++j) spec.effect_columns.push_back(j - 1);
  }
  spec.marginalize = inter;
  return spec;
}

/// A method as it appears in a benchmark: a report label and the dispatch
/// spec.
struct BenchMethod {
  std::string name;
  MethodSpec spec;
};

/// Resolves a user-facing method name for a scenario. "psreg" is the
/// homogeneous PS regression when the scenario has no exposure-covariate
/// interaction and the marginalized one otherwise.
inline BenchMethod resolve_method(const std::string& name, const SimScenario& sc) {
  BenchMethod m;
  m.spec.assume_homogeneous = !sc.interaction;
  if (name == "psreg") {
    m.spec.method = sc.interaction ? Method::kPsRegMarginalized : Method::kPsRegHomogeneous;
  } else {
    m.spec.method = parse_method(name);
  }
  if (m.spec.method == Method::kTrueModel) m.spec.true_model = true_model_spec(sc);
  m.name = to_string(m.spec.method);
  return m;
}

enum class CiSource { kNone, kBootstrap, kPlugin };

inline std::string to_string(CiSource s) {
  switch (s) {
    case CiSource::kNone:
      return "none";
    case CiSource::kBootstrap:
      return "bootstrap-percentile";
    case CiSource::kPlugin:
      return "plugin";
  }
  return "none";
}

struct BenchOptions {
  double tau = 0.95;
  int R = 200;
  std::uint64_t seed = 1;
  int B = 200;
  CiSource ci = CiSource::kBootstrap;
  double level = 0.95;
  int threads = 1;
  PropensityOptions ps;
  std::optional<std::vector<BenchTruth>> truth;  // overrides the frozen lookup
};

struct BenchRow {
  std::string method;
  std::string contrast;  // "1 vs 0", "2 vs 1", ...
  double truth_qte = 0.0;
  double truth_wqte = std::numeric_limits<double>::quiet_NaN();
  double mse = std::numeric_limits<double>::quiet_NaN();
  double bias = std::numeric_limits<double>::quiet_NaN();
  double abs_bias = std::numeric_limits<double>::quiet_NaN();
  double mean_point = std::numeric_limits<double>::quiet_NaN();
  double coverage = std::numeric_limits<double>::quiet_NaN();
  double mean_se = std::numeric_limits<double>::quiet_NaN();
  double mse_vs_wqte = std::numeric_limits<double>::quiet_NaN();       // OW only
  double abs_bias_vs_wqte = std::numeric_limits<double>::quiet_NaN();  // OW only
  int successes = 0;
  int failures = 0;
  bool flagged = false;  // failures above 2% of R
  std::vector<double> points;  // successful replications, in order
};

struct BenchReport {
  std::string scenario;
  double tau = 0.95;
  int R = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int B = 0;
  std::string ci_method = "none";
  std::vector<BenchTruth> truth;
  std::vector<BenchRow> rows;
  double runtime_seconds = 0.0;  // kept out of report files
};

namespace detail {

inline std::string contrast_label(const SimScenario& sc, int level) {
  if (sc.exposure.is_categorical()) return std::to_string(level) + " vs 1";
  return "1 vs 0";
}

// Points, SEs and CIs of one method in one replication (one entry per
// contrast); empty when the method failed.
struct RepOutcome {
  std::vector<double> point;
  std::vector<double> se;
  std::vector<std::pair<double, double>> ci;
};

inline std::vector<double> points_of(const Dataset& d, const BenchMethod& m, double tau,
                                     const PropensityOptions& popt) {
  const auto ps = fit_propensity(d, popt);
  std::vector<double> out;
  for (const auto& e : estimate(d, ps, tau, m.spec)) out.push_back(e.point);
  return out;
}

inline bool plugin_applies(const BenchMethod& m) {
  return m.spec.method == Method::kIpwQr || m.spec.method == Method::kOwQr || m.spec.method == Method::kTwoStepWqte;
}

inline RepOutcome run_one(const Dataset& d, const BenchMethod& m, const BenchOptions& opt, std::uint64_t boot_seed) {
  RepOutcome out;
  const auto ps = fit_propensity(d, opt.ps);
  const auto est = estimate(d, ps, opt.tau, m.spec);
  for (const auto& e : est) out.point.push_back(e.point);
  if (opt.ci == CiSource::kBootstrap && opt.B > 0) {
    BootstrapOptions bo;
    bo.B = opt.B;
    bo.level = opt.level;
    bo.seed = boot_seed;
    const auto boot = bootstrap(d, [&](const Dataset& s) { return points_of(s, m, opt.tau, opt.ps); }, bo);
    out.se = boot.se;
    for (const auto& c : boot.ci) out.ci.emplace_back(c.lo, c.hi);
  } else if (opt.ci == CiSource::kPlugin && plugin_applies(m) && d.kind().is_binary()) {
    TiltingSpec g = m.spec.tilting;
    if (m.spec.method == Method::kIpwQr) g = TiltingSpec::uniform();
    if (m.spec.method == Method::kOwQr) g = TiltingSpec::overlap();
    const auto two = wqte_two_step(d, ps, g, opt.tau);
    const auto v = plugin_variance(d, ps, g, two, opt.tau);
    const auto ci = plugin_interval(est[0].point, v.se, opt.level);
    out.se = {v.se};
    out.ci = {{ci.lo, ci.hi}};
  }
  return out;
}

}  // namespace detail

/// Runs R replications of every method on fresh datasets from `scenario`.
///
/// Replication r simulates with seed substream_seed(seed, r + 1); its
/// bootstrap draws from substream_seed(that seed, 7). Replications may run
/// on several threads, and aggregation folds them in index order, so the
/// report does not depend on `threads`.
inline BenchReport run_benchmark(const SimScenario& scenario, const std::vector<BenchMethod>& methods,
                                 const BenchOptions& opt) {
  require_tau(opt.tau);
  if (opt.R < 1) throw ArgumentError("R must be at least 1");
  if (opt.ci == CiSource::kBootstrap && opt.B > 0 && opt.B < 50) throw ArgumentError("bootstrap needs B >= 50");
  const auto t0 = std::chrono::steady_clock::now();
  BenchReport rep;
  rep.scenario = scenario.key;
  rep.tau = opt.tau;
  rep.R = opt.R;
  rep.n = scenario.n;
  rep.seed = opt.seed;
  rep.B = opt.ci == CiSource::kBootstrap ? opt.B : 0;
  rep.ci_method = opt.ci == CiSource::kBootstrap && opt.B == 0 ? "none" : to_string(opt.ci);

  std::vector<int> levels{2};
  if (scenario.exposure.is_categorical()) {
    levels.clear();
    for (int j = 2; j <= scenario.exposure.levels; ++j) levels.push_back(j);
  }
  if (opt.truth) {
    rep.truth = *opt.truth;
    if (rep.truth.size() != levels.size()) throw ArgumentError("truth override must cover every contrast");
  } else {
    for (int l : levels) {
      const auto t = frozen_truth(scenario.key, opt.tau, l);
      if (!t) {
        throw ArgumentError("no frozen oracle for '" + scenario.key + "' at tau = " + csv::format_double(opt.tau) +
                            "; pass the truth explicitly");
      }
      rep.truth.push_back(*t);
    }
  }

  const auto R = static_cast<std::size_t>(opt.R);
  std::vector<std::vector<std::optional<detail::RepOutcome>>> results(R);
  detail::parallel_for(R, opt.threads, [&](std::size_t r) {
    SimScenario sc = scenario;
    sc.seed = substream_seed(opt.seed, r + 1);
    auto& slot = results[r];
    slot.resize(methods.size());
    std::optional<Dataset> d;
    try {
      d = simulate(sc);
    } catch (const Error&) {
      return;
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      try {
        auto o = detail::run_one(*d, methods[m], opt, substream_seed(sc.seed, 7));
        if (o.point.size() == levels.size()) slot[m] = std::move(o);
      } catch (const Error&) {
      }
    }
  });

  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t c = 0; c < levels.size(); ++c) {
      BenchRow row;
      row.method = methods[m].name;
      row.contrast = detail::contrast_label(scenario, levels[c]);
      row.truth_qte = rep.truth[c].qte;
      row.truth_wqte = rep.truth[c].wqte_overlap;
      double sum = 0.0, sq = 0.0, sq_w = 0.0, se_sum = 0.0;
      int covered = 0, with_ci = 0;
      for (std::size_t r = 0; r < R; ++r) {
        const auto& o = results[r].size() > m ? results[r][m] : std::nullopt;
        if (!o) {
          ++row.failures;
          continue;
        }
        const double p = o->point[c];
        row.points.push_back(p);
        sum += p;
        sq += (p - row.truth_qte) * (p - row.truth_qte);
        sq_w += (p - row.truth_wqte) * (p - row.truth_wqte);
        if (o->ci.size() == levels.size() && std::isfinite(o->se[c])) {
          ++with_ci;
          se_sum += o->se[c];
          if (o->ci[c].first <= row.truth_qte && row.truth_qte <= o->ci[c].second) ++covered;
        }
      }
      row.successes = static_cast<int>(row.points.size());
      row.flagged = static_cast<double>(row.failures) > 0.02 * static_cast<double>(opt.R);
      if (row.successes > 0) {
        const double k = row.successes;
        row.mean_point = sum / k;
        row.mse = sq / k;
        row.bias = row.mean_point - row.truth_qte;
        row.abs_bias = std::abs(row.bias);
        if (methods[m].spec.method == Method::kOwQr && std::isfinite(row.truth_wqte)) {
          row.mse_vs_wqte = sq_w / k;
          row.abs_bias_vs_wqte = std::abs(row.mean_point - row.truth_wqte);
        }
      }
      if (with_ci > 0) {
        row.coverage = static_cast<double>(covered) / with_ci;
        row.mean_se = se_sum / with_ci;
      }
      rep.rows.push_back(std::move(row));
    }
  }
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline std::vector<BenchMethod> resolve_methods(const std::vector<std::string>& names, const SimScenario& sc) {
  std::vector<BenchMethod> out;
  for (const auto& n : names) out.push_back(resolve_method(n, sc));
  return out;
}

// ---------------------------------------------------------------------------
// Report files

namespace detail {

inline std::string na(double v) { return std::isfinite(v) ? csv::format_double(v) : "NA"; }

inline double from_na(const std::string& s) {
  if (csv::is_missing(s)) return std::numeric_limits<double>::quiet_NaN();
  const auto v = csv::to_double(s);
  if (!v) throw SchemaError("report: non-numeric value '" + s + "'");
  return *v;
}

}  // namespace detail

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "scenario", "method", "mse", "abs_bias", "coverage", "mean_se", "R", "truth_qte", "truth_wqte",
      "contrast", "tau", "bias", "successes", "failures", "mse_vs_wqte", "abs_bias_vs_wqte", "ci_method"};
  return cols;
}

inline std::string report_csv(const BenchReport& rep) {
  std::ostringstream os;
  const auto& cols = report_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << "\n";
  for (const auto& r : rep.rows) {
    os << csv::escape(rep.scenario) << ',' << csv::escape(r.method) << ',' << detail::na(r.mse) << ','
       << detail::na(r.abs_bias) << ',' << detail::na(r.coverage) << ',' << detail::na(r.mean_se) << ',' << rep.R
       << ',' << detail::na(r.truth_qte) << ',' << detail::na(r.truth_wqte) << ',' << csv::escape(r.contrast) << ','
       << detail::na(rep.tau) << ',' << detail::na(r.bias) << ',' << r.successes << ',' << r.failures << ','
       << detail::na(r.mse_vs_wqte) << ',' << detail::na(r.abs_bias_vs_wqte) << ',' << csv::escape(rep.ci_method)
       << "\n";
  }
  return os.str();
}

/// Parses report_csv output back into rows (per-replication points are not
/// stored in the file).
inline BenchReport parse_report_csv(std::string_view text) {
  const auto table = csv::parse(text);
  if (table.empty() || table[0] != report_columns()) throw SchemaError("report: unexpected header");
  BenchReport rep;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != report_columns().size()) throw ParseError(i, "report: wrong field count");
    rep.scenario = f[0];
    BenchRow r;
    r.method = f[1];
    r.mse = detail::from_na(f[2]);
    r.abs_bias = detail::from_na(f[3]);
    r.coverage = detail::from_na(f[4]);
    r.mean_se = detail::from_na(f[5]);
    rep.R = static_cast<int>(detail::from_na(f[6]));
    r.truth_qte = detail::from_na(f[7]);
    r.truth_wqte = detail::from_na(f[8]);
    r.contrast = f[9];
    rep.tau = detail::from_na(f[10]);
    r.bias = detail::from_na(f[11]);
    r.successes = static_cast<int>(detail::from_na(f[12]));
    r.failures = static_cast<int>(detail::from_na(f[13]));
    r.mse_vs_wqte = detail::from_na(f[14]);
    r.abs_bias_vs_wqte = detail::from_na(f[15]);
    rep.ci_method = f[16];
    r.mean_point = r.bias + r.truth_qte;
    r.flagged = static_cast<double>(r.failures) > 0.02 * rep.R;
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

inline nlohmann::json to_json(const BenchReport& rep) {
  auto num = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"method", r.method},
                    {"contrast", r.contrast},
                    {"mse", num(r.mse)},
                    {"abs_bias", num(r.abs_bias)},
                    {"bias", num(r.bias)},
                    {"coverage", num(r.coverage)},
                    {"mean_se", num(r.mean_se)},
                    {"truth_qte", num(r.truth_qte)},
                    {"truth_wqte", num(r.truth_wqte)},
                    {"mse_vs_wqte", num(r.mse_vs_wqte)},
                    {"abs_bias_vs_wqte", num(r.abs_bias_vs_wqte)},
                    {"successes", r.successes},
                    {"failures", r.failures},
                    {"failure_flag", r.flagged}});
  }
  nlohmann::json truth = nlohmann::json::array();
  for (const auto& t : rep.truth) truth.push_back({{"level", t.level}, {"qte", t.qte}, {"wqte_overlap", num(t.wqte_overlap)}});
  return {{"scenario", rep.scenario}, {"tau", rep.tau},     {"R", rep.R},
          {"n", rep.n},               {"seed", rep.seed},   {"B", rep.B},
          {"ci_method", rep.ci_method}, {"truth", truth},   {"rows", rows}};
}

/// Table-1 style grid: one line per method and contrast.
inline std::string report_text(const BenchReport& rep) {
  std::ostringstream os;
  os << "scenario " << rep.scenario << "  tau " << rep.tau << "  R " << rep.R << "  n " << rep.n << "\n";
  os << std::left << std::setw(20) << "method" << std::setw(9) << "contrast" << std::right << std::setw(10) << "MSE"
     << std::setw(10) << "|Bias|" << std::setw(10) << "Coverage" << std::setw(10) << "mean SE" << std::setw(9)
     << "fail" << "\n";
  auto cell = [](double v) {
    std::ostringstream c;
    if (std::isfinite(v)) {
      c << std::fixed << std::setprecision(4) << v;
    } else {
      c << "NA";
    }
    return c.str();
  };
  for (const auto& r : rep.rows) {
    os << std::left << std::setw(20) << r.method << std::setw(9) << r.contrast << std::right << std::setw(10)
       << cell(r.mse) << std::setw(10) << cell(r.abs_bias) << std::setw(10) << cell(r.coverage) << std::setw(10)
       << cell(r.mean_se) << std::setw(8) << r.failures << (r.flagged ? "!" : " ") << "\n";
    if (std::isfinite(r.abs_bias_vs_wqte)) {
      os << std::left << std::setw(20) << "  vs WQTE" << std::setw(9) << "" << std::right << std::setw(10)
         << cell(r.mse_vs_wqte) << std::setw(10) << cell(r.abs_bias_vs_wqte) << "\n";
    }
  }
  for (const auto& t : rep.truth) {
    os << "truth (level " << t.level << "): QTE " << cell(t.qte) << "  WQTE(overlap) " << cell(t.wqte_overlap) << "\n";
  }
  return os.str();
}

enum class ReportFormat { kCsv, kJson, kText };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  if (s == "text" || s == "text-table") return ReportFormat::kText;
  throw UsageError("unknown report format '" + s + "' (csv, json, text)");
}

inline std::string render_report(const BenchReport& rep, ReportFormat f) {
  switch (f) {
    case ReportFormat::kCsv:
      return report_csv(rep);
    case ReportFormat::kJson:
      return to_json(rep).dump(2) + "\n";
    case ReportFormat::kText:
      return report_text(rep);
  }
  return {};
}

inline void emit_report(const BenchReport& rep, ReportFormat f, const std::string& path) {
  csv::write_file(path, render_report(rep, f));
}

/// Everything needed to rerun a benchmark bit for bit.
inline nlohmann::json bench_manifest(const SimScenario& sc, const std::vector<BenchMethod>& methods,
                                     const BenchOptions& opt, const BenchReport& rep) {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : methods) ms.push_back(m.name);
  nlohmann::json truth = to_json(rep)["truth"];
  return {{"schema_version", kManifestSchemaVersion},
          {"software", {{"name", "wqte"}, {"version", WQTE_VERSION}}},
          {"command", "bench"},
          {"scenario", to_json(sc)},
          {"methods", ms},
          {"tau", opt.tau},
          {"R", opt.R},
          {"B", rep.B},
          {"ci_method", rep.ci_method},
          {"seed", opt.seed},
          {"replication_seed_rule", "substream_seed(seed, r + 1), r = 0..R-1"},
          {"bootstrap_seed_rule", "substream_seed(replication_seed, 7)"},
          {"oracle", {{"seed", kOracleSeed}, {"draws", kOracleDraws}, {"truth", truth},
                      {"frozen", !opt.truth.has_value()}}}};
}

}  // namespace wqte

#endif  // WQTE_BENCH_HPP
