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

#ifndef WQTE_CLI_HPP
#define WQTE_CLI_HPP

#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wqte/balance.hpp"
#include "wqte/bench.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"
#include "wqte/estimators.hpp"
#include "wqte/inference.hpp"
#include "wqte/propensity.hpp"
#include "wqte/simlab.hpp"

namespace wqte::cli {

/// Effective settings of one run. Field names double as config-file keys.
struct RunConfig {
  std::string command;
  std::string input;
  std::string scenario;
  std::size_t n = 2000;
  std::string outcome_col = "y";
  std::string exposure_col = "z";
  std::string exposure_kind = "binary";
  std::vector<std::string> confounders;
  std::vector<std::string> log10;
  std::vector<std::string> methods{"psreg", "ipw", "ow"};
  std::vector<double> tau{0.95};
  std::string tilting = "overlap";
  double clip_lo = 0.001;
  double clip_hi = 0.999;
  int K = 199;
  int grid_points = 401;
  int B = -1;  // command default: 500 for estimate, 200 for bench
  int R = 200;
  int bins = 10;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out = "-";
  std::string format = "csv";
  std::string manifest;
  std::string ci = "percentile";
  double level = 0.95;
  bool assume_heterogeneous = false;
  std::string weights = "ow";
  int baseline = 1;
};

namespace detail {

template <class T>
T json_value(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

inline std::vector<std::string> json_list(const nlohmann::json& j, const std::string& key) {
  if (j.is_string()) {
    std::vector<std::string> out;
    std::stringstream ss(j.get<std::string>());
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }
  return json_value<std::vector<std::string>>(j, key);
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const RunConfig&)> copy;
  std::function<void(RunConfig&, const nlohmann::json&)> read;
  std::function<nlohmann::json(const RunConfig&)> write;
};

#define WQTE_FIELD(name, type)                                                                  \
  Field {                                                                                       \
    #name, [](RunConfig& d, const RunConfig& s) { d.name = s.name; },                           \
        [](RunConfig& d, const nlohmann::json& j) { d.name = json_value<type>(j, #name); },     \
        [](const RunConfig& c) { return nlohmann::json(c.name); }                               \
  }
#define WQTE_LIST_FIELD(name)                                                                   \
  Field {                                                                                       \
    #name, [](RunConfig& d, const RunConfig& s) { d.name = s.name; },                           \
        [](RunConfig& d, const nlohmann::json& j) { d.name = json_list(j, #name); },            \
        [](const RunConfig& c) { return nlohmann::json(c.name); }                               \
  }

inline const std::vector<Field>& fields() {
  static const std::vector<Field> all{
      WQTE_FIELD(input, std::string),
      WQTE_FIELD(scenario, std::string),
      WQTE_FIELD(n, std::size_t),
      WQTE_FIELD(outcome_col, std::string),
      WQTE_FIELD(exposure_col, std::string),
      WQTE_FIELD(exposure_kind, std::string),
      WQTE_LIST_FIELD(confounders),
      WQTE_LIST_FIELD(log10),
      WQTE_LIST_FIELD(methods),
      Field{"tau", [](RunConfig& d, const RunConfig& s) { d.tau = s.tau; },
            [](RunConfig& d, const nlohmann::json& j) {
              d.tau = j.is_number() ? std::vector<double>{j.get<double>()} : json_value<std::vector<double>>(j, "tau");
            },
            [](const RunConfig& c) { return nlohmann::json(c.tau); }},
      WQTE_FIELD(tilting, std::string),
      WQTE_FIELD(clip_lo, double),
      WQTE_FIELD(clip_hi, double),
      WQTE_FIELD(K, int),
      WQTE_FIELD(grid_points, int),
      WQTE_FIELD(B, int),
      WQTE_FIELD(R, int),
      WQTE_FIELD(bins, int),
      Field{"seed", [](RunConfig& d, const RunConfig& s) { d.seed = s.seed; },
            [](RunConfig& d, const nlohmann::json& j) {
              if (!j.is_null()) d.seed = json_value<std::uint64_t>(j, "seed");
            },
            [](const RunConfig& c) { return c.seed ? nlohmann::json(*c.seed) : nlohmann::json(); }},
      WQTE_FIELD(threads, int),
      WQTE_FIELD(out, std::string),
      WQTE_FIELD(format, std::string),
      WQTE_FIELD(manifest, std::string),
      WQTE_FIELD(ci, std::string),
      WQTE_FIELD(level, double),
      WQTE_FIELD(assume_heterogeneous, bool),
      WQTE_FIELD(weights, std::string),
      WQTE_FIELD(baseline, int),
  };
  return all;
}

#undef WQTE_FIELD
#undef WQTE_LIST_FIELD

inline std::string flag_of(const std::string& key) {
  std::string f = "--" + key;
  for (auto& c : f) {
    if (c == '_') c = '-';
  }
  return f;
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  for (const auto& f : detail::fields()) j[f.key] = f.write(c);
  return j;
}

/// Applies a config document. A manifest written by a previous run is
/// accepted too; its "config" member is used.
inline void apply_config(RunConfig& cfg, const nlohmann::json& doc) {
  const nlohmann::json& j = doc.contains("schema_version") && doc.contains("config") ? doc.at("config") : doc;
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string() || (!cfg.command.empty() && value.get<std::string>() != cfg.command)) {
        throw UsageError("config file is for command '" + value.dump() + "', not '" + cfg.command + "'");
      }
      continue;
    }
    bool known = false;
    for (const auto& f : detail::fields()) {
      if (f.key == key) {
        f.read(cfg, value);
        known = true;
      }
    }
    if (!known) throw UsageError("unknown config key '" + key + "'");
  }
}

inline void validate(const RunConfig& c) {
  if (c.tau.empty()) throw UsageError("at least one --tau is required");
  for (double t : c.tau) {
    if (!(t > 0.0 && t < 1.0)) throw UsageError("tau must lie in (0,1), got " + csv::format_double(t));
  }
  if (c.threads < 1) throw UsageError("--threads must be at least 1");
  if (!(c.level > 0.0 && c.level < 1.0)) throw UsageError("--level must lie in (0,1)");
  if (c.command != "bench" && c.command != "simulate" && c.input.empty() == c.scenario.empty()) {
    throw UsageError("give exactly one input source: --input FILE or --scenario KEY");
  }
  if ((c.command == "bench" || c.command == "simulate") && c.scenario.empty()) {
    throw UsageError(c.command + " needs --scenario");
  }
  if ((c.command == "bench" || c.command == "simulate") && !c.input.empty()) {
    throw UsageError(c.command + " takes no --input");
  }
}

namespace detail {

struct Io {
  std::ostream& out;
  std::ostream& err;
};

inline void emit(const RunConfig& cfg, const std::string& content, Io& io) {
  if (cfg.out == "-" || cfg.out.empty()) {
    io.out << content;
  } else {
    csv::write_file(cfg.out, content);
  }
}

inline std::string manifest_path(const RunConfig& cfg) {
  if (!cfg.manifest.empty()) return cfg.manifest;
  if (cfg.out != "-" && !cfg.out.empty()) return cfg.out + ".manifest.json";
  return "wqte-" + cfg.command + ".manifest.json";
}

inline nlohmann::json manifest_base(const RunConfig& cfg) {
  return {{"schema_version", kManifestSchemaVersion},
          {"software", {{"name", "wqte"}, {"version", WQTE_VERSION}}},
          {"command", cfg.command},
          {"seed", *cfg.seed},
          {"config", to_json(cfg)}};
}

inline void write_manifest(const RunConfig& cfg, const nlohmann::json& m) {
  csv::write_file(manifest_path(cfg), m.dump(2) + "\n");
}

inline nlohmann::json frozen_truths(const std::string& key) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& o : kFrozenOracles) {
    if (key == o.key) {
      out.push_back({{"level", o.level},
                     {"tau", o.tau},
                     {"qte", o.qte},
                     {"wqte_overlap", std::isnan(o.wqte_overlap) ? nlohmann::json() : nlohmann::json(o.wqte_overlap)}});
    }
  }
  return out;
}

inline ExposureTag parse_exposure_kind(const std::string& s) {
  if (s == "binary") return ExposureTag::kBinary;
  if (s == "categorical") return ExposureTag::kCategorical;
  if (s == "continuous") return ExposureTag::kContinuous;
  throw UsageError("unknown exposure kind '" + s + "' (binary, categorical, continuous)");
}

struct Loaded {
  Dataset data;
  std::optional<SimScenario> scenario;
  nlohmann::json load;
};

inline Loaded load_data(const RunConfig& cfg) {
  if (!cfg.scenario.empty()) {
    const auto sc = make_scenario(cfg.scenario, cfg.n, *cfg.seed);
    return {simulate(sc), sc, {{"scenario", to_json(sc)}}};
  }
  const std::string text = csv::read_file(cfg.input);
  CsvSchema schema;
  schema.outcome = cfg.outcome_col;
  schema.exposure = cfg.exposure_col;
  schema.exposure_tag = parse_exposure_kind(cfg.exposure_kind);
  schema.covariates = cfg.confounders;
  if (schema.covariates.empty()) {
    const auto rows = csv::parse(text);
    if (rows.empty()) throw SchemaError("CSV has no header row");
    for (const auto& h : rows.front()) {
      const std::string name(csv::trim(h));
      if (name != schema.outcome && name != schema.exposure) schema.covariates.push_back(name);
    }
  }
  for (const auto& c : cfg.log10) schema.transforms[c] = Transform::kLog10;
  LoadReport report;
  auto data = parse_csv(text, schema, &report);
  return {std::move(data), std::nullopt, {{"input", cfg.input}, {"load_report", report.to_json()}}};
}

inline PropensityOptions ps_options(const RunConfig& cfg) {
  PropensityOptions p;
  p.glm.clip_lo = cfg.clip_lo;
  p.glm.clip_hi = cfg.clip_hi;
  p.bins = cfg.bins;
  return p;
}

inline MethodSpec method_spec(const std::string& name, const RunConfig& cfg, const Dataset& data,
                              const std::optional<SimScenario>& sc, std::vector<std::string>& notes) {
  MethodSpec m;
  m.assume_homogeneous = !cfg.assume_heterogeneous;
  m.baseline = cfg.baseline;
  m.marginalize.K = cfg.K;
  m.marginalize.grid_points = cfg.grid_points;
  if (name == "psreg") {
    m.method = cfg.assume_heterogeneous && !data.kind().is_continuous() ? Method::kPsRegMarginalized
                                                                        : Method::kPsRegHomogeneous;
  } else {
    m.method = parse_method(name);
  }
  if (m.method == Method::kTwoStepWqte) m.tilting = parse_tilting(cfg.tilting);
  if (m.method == Method::kTrueModel) {
    if (!sc) throw UsageError("true_model needs --scenario (the outcome model must be known)");
    m.true_model = true_model_spec(*sc);
  }
  if (m.method == Method::kOwQr && cfg.assume_heterogeneous) {
    notes.push_back(
        "ow_qr with --assume-heterogeneous estimates WQTE(overlap), the effect in the overlap population, "
        "not the population QTE");
  }
  return m;
}

inline std::string estimates_text(const std::vector<QteEstimate>& recs) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "Method" << std::setw(16) << "Estimand" << std::right << std::setw(7) << "tau"
     << std::setw(12) << "Estimate" << std::setw(12) << "Std. Error" << "  95% CI\n";
  auto f = [](double v) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(3) << v;
    return c.str();
  };
  for (const auto& r : recs) {
    os << std::left << std::setw(20) << to_string(r.method) << std::setw(16) << to_string(r.estimand) << std::right
       << std::setw(7) << r.tau << std::setw(12) << f(r.point) << std::setw(12) << (r.se ? f(*r.se) : "NA") << "  ";
    if (r.ci) {
      os << "(" << f(r.ci->lo) << ", " << f(r.ci->hi) << ")";
    } else {
      os << "NA";
    }
    os << "\n";
  }
  return os.str();
}

inline int cmd_simulate(const RunConfig& cfg, Io& io) {
  const auto sc = make_scenario(cfg.scenario, cfg.n, *cfg.seed);
  const auto data = simulate(sc);
  emit(cfg, to_csv(data), io);
  auto m = manifest_base(cfg);
  m["scenario"] = to_json(sc);
  m["oracle"] = {{"seed", kOracleSeed}, {"draws", kOracleDraws}, {"truth", frozen_truths(sc.key)}};
  write_manifest(cfg, m);
  return 0;
}

inline int cmd_estimate(const RunConfig& cfg, Io& io) {
  const auto loaded = load_data(cfg);
  const Dataset& data = loaded.data;
  const auto popt = ps_options(cfg);
  const auto ps = fit_propensity(data, popt);
  std::vector<std::string> notes;
  std::vector<MethodSpec> specs;
  for (const auto& name : cfg.methods) specs.push_back(method_spec(name, cfg, data, loaded.scenario, notes));
  for (const auto& n : notes) io.err << "warning: " << n << "\n";
  for (const auto& w : ps.warnings) io.err << "warning: " << w << "\n";

  std::vector<QteEstimate> recs;
  for (double tau : cfg.tau) {
    for (const auto& s : specs) {
      for (auto& e : estimate(data, ps, tau, s)) {
        e.warnings.insert(e.warnings.end(), notes.begin(), notes.end());
        recs.push_back(std::move(e));
      }
    }
  }
  const int B = cfg.B < 0 ? 500 : cfg.B;
  nlohmann::json inference{{"ci", cfg.ci}, {"B", B}, {"level", cfg.level}};
  if ((cfg.ci == "percentile" || cfg.ci == "normal") && B > 0) {
    BootstrapOptions bo;
    bo.B = B;
    bo.level = cfg.level;
    bo.seed = substream_seed(*cfg.seed, 11);
    bo.ci = cfg.ci == "normal" ? CiMethod::kNormal : CiMethod::kPercentile;
    bo.threads = cfg.threads;
    const auto boot = bootstrap(
        data,
        [&](const Dataset& d) {
          const auto p = fit_propensity(d, popt);
          std::vector<double> pts;
          for (double tau : cfg.tau) {
            for (const auto& s : specs) {
              for (const auto& e : estimate(d, p, tau, s)) pts.push_back(e.point);
            }
          }
          return pts;
        },
        bo);
    attach(recs, boot);
    inference["failures"] = boot.failures;
  } else if (cfg.ci == "plugin") {
    for (auto& r : recs) {
      TiltingSpec g;
      if (r.method == Method::kOwQr) {
        g = TiltingSpec::overlap();
      } else if (r.method == Method::kTwoStepWqte) {
        g = parse_tilting(cfg.tilting);
      } else if (r.method != Method::kIpwQr || !data.kind().is_binary()) {
        r.warnings.push_back("plug-in variance is defined for binary two-step, IPW and OW estimates only");
        continue;
      }
      const auto two = wqte_two_step(data, ps, g, r.tau);
      const auto v = plugin_variance(data, ps, g, two, r.tau);
      r.se = v.se;
      r.ci = plugin_interval(r.point, v.se, cfg.level);
    }
  } else if (cfg.ci != "none" && !(B == 0 && (cfg.ci == "percentile" || cfg.ci == "normal"))) {
    throw UsageError("unknown --ci '" + cfg.ci + "' (percentile, normal, plugin, none)");
  }

  std::string content;
  if (cfg.format == "csv") {
    content = estimate_csv_header();
    for (const auto& r : recs) content += to_csv_row(r);
  } else if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : recs) arr.push_back(to_json(r));
    content = nlohmann::json{{"estimates", arr}}.dump(2) + "\n";
  } else if (cfg.format == "text") {
    content = estimates_text(recs);
  } else {
    throw UsageError("unknown --format '" + cfg.format + "' (csv, json, text)");
  }
  emit(cfg, content, io);
  auto m = manifest_base(cfg);
  m["data"] = loaded.load;
  m["data"]["n"] = data.n();
  m["data"]["exposure"] = to_string(data.kind());
  m["propensity"] = to_json(ps);
  m["propensity"].erase("scores");
  m["inference"] = inference;
  write_manifest(cfg, m);
  return 0;
}

inline int cmd_bench(const RunConfig& cfg, Io& io) {
  if (cfg.tau.size() != 1) throw UsageError("bench takes a single --tau");
  const auto sc = make_scenario(cfg.scenario, cfg.n, 0);
  BenchOptions opt;
  opt.tau = cfg.tau[0];
  opt.R = cfg.R;
  opt.seed = *cfg.seed;
  opt.B = cfg.B < 0 ? 200 : cfg.B;
  opt.level = cfg.level;
  opt.threads = cfg.threads;
  opt.ps = ps_options(cfg);
  if (cfg.ci == "percentile") {
    opt.ci = CiSource::kBootstrap;
  } else if (cfg.ci == "plugin") {
    opt.ci = CiSource::kPlugin;
  } else if (cfg.ci == "none") {
    opt.ci = CiSource::kNone;
  } else {
    throw UsageError("bench --ci must be percentile, plugin or none");
  }
  auto methods = resolve_methods(cfg.methods, sc);
  for (auto& m : methods) {
    m.spec.marginalize.K = cfg.K;
    m.spec.marginalize.grid_points = cfg.grid_points;
  }
  const auto rep = run_benchmark(sc, methods, opt);
  emit(cfg, render_report(rep, parse_report_format(cfg.format)), io);
  auto m = bench_manifest(sc, methods, opt, rep);
  m["config"] = to_json(cfg);
  write_manifest(cfg, m);
  for (const auto& r : rep.rows) {
    if (r.flagged) io.err << "warning: " << r.method << " failed in " << r.failures << " of " << rep.R << " replications\n";
  }
  io.err << "bench finished in " << std::fixed << std::setprecision(1) << rep.runtime_seconds << " s\n";
  return 0;
}

inline int cmd_balance(const RunConfig& cfg, Io& io) {
  const auto loaded = load_data(cfg);
  const Dataset& data = loaded.data;
  const auto ps = fit_propensity(data, ps_options(cfg));
  std::vector<int> labels;
  WeightVector w;
  if (data.kind().is_binary()) {
    labels = data.labels();
    const std::string g = cfg.weights == "ipw" ? "uniform" : cfg.weights == "ow" ? "overlap" : cfg.weights;
    w = make_weights_binary(ps, data.z(), parse_tilting(g), data.x());
  } else {
    if (data.kind().is_continuous()) {
      const std::vector<double> z(data.z().data(), data.z().data() + data.z().size());
      labels = assign_bins(z, ps.cut_points);
    } else {
      labels = data.labels();
    }
    CategoricalScheme scheme;
    if (cfg.weights == "ipw") {
      scheme = CategoricalScheme::kGeneralizedIpw;
    } else if (cfg.weights == "ow") {
      scheme = CategoricalScheme::kGeneralizedOw;
    } else {
      throw UsageError("multi-level exposures support --weights ipw or ow");
    }
    w = make_weights_categorical(ps, labels, scheme);
  }
  const auto table = balance_table(data.x(), labels, w, data.column_names());
  if (cfg.format == "csv") {
    emit(cfg, to_csv(table), io);
  } else if (cfg.format == "json") {
    emit(cfg, to_json(table).dump(2) + "\n", io);
  } else {
    throw UsageError("balance --format must be csv or json");
  }
  auto m = manifest_base(cfg);
  m["data"] = loaded.load;
  m["diagnostics"] = nlohmann::json::array();
  for (const auto& d : weight_diagnostics(w, labels)) {
    m["diagnostics"].push_back(
        {{"level", d.level}, {"total", d.total}, {"max_weight", d.max_weight}, {"effective_size", d.effective_size}});
  }
  write_manifest(cfg, m);
  return 0;
}

}  // namespace detail

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 2 usage, 3 data, 4 numerical.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"wqte: weighted quantile treatment effects"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;
  std::uint64_t seed_flag = 0;
  std::vector<CLI::App*> subs;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "JSON config file (flags take precedence)");
    s->add_option("--seed", seed_flag, "master seed (drawn from entropy when absent)");
    s->add_option("--threads", flags.threads, "worker threads");
    s->add_option("--out", flags.out, "output path, - for stdout");
    s->add_option("--format", flags.format, "csv, json or text");
    s->add_option("--manifest", flags.manifest, "manifest path");
    s->add_option("--scenario", flags.scenario, "simulation preset key");
    s->add_option("--n", flags.n, "rows per simulated dataset");
  };
  auto add_data = [&](CLI::App* s) {
    s->add_option("--input", flags.input, "CSV input file");
    s->add_option("--outcome-col", flags.outcome_col, "outcome column");
    s->add_option("--exposure-col", flags.exposure_col, "exposure column");
    s->add_option("--exposure-kind", flags.exposure_kind, "binary, categorical or continuous");
    s->add_option("--confounders", flags.confounders, "confounder columns (default: all others)")->delimiter(',');
    s->add_option("--log10", flags.log10, "columns to log10-transform")->delimiter(',');
    s->add_option("--clip-lo", flags.clip_lo, "propensity lower clip");
    s->add_option("--clip-hi", flags.clip_hi, "propensity upper clip");
    s->add_option("--bins", flags.bins, "bins for a continuous exposure");
  };
  auto add_methods = [&](CLI::App* s) {
    s->add_option("--methods", flags.methods, "psreg, ipw, ow, naive, two_step, psreg_hom, psreg_marg, true")
        ->delimiter(',');
    s->add_option("--tau", flags.tau, "quantile level(s)")->delimiter(',');
    s->add_option("--tilting", flags.tilting, "tilting for two_step: uniform, overlap, treated, untreated");
    s->add_option("--K", flags.K, "quantile levels for marginalization");
    s->add_option("--grid-points", flags.grid_points, "y-grid points for marginalization");
    s->add_option("--B", flags.B, "bootstrap resamples (0 disables)");
    s->add_option("--ci", flags.ci, "percentile, normal, plugin or none");
    s->add_option("--level", flags.level, "confidence level");
    s->add_flag("--assume-heterogeneous", flags.assume_heterogeneous,
                "effects vary with covariates: psreg marginalizes and ow targets WQTE(overlap)");
  };

  auto* sim = app.add_subcommand("simulate", "generate a dataset from a preset");
  add_common(sim);
  auto* est = app.add_subcommand("estimate", "estimate QTEs on a dataset");
  add_common(est);
  add_data(est);
  add_methods(est);
  est->add_option("--baseline", flags.baseline, "baseline level for categorical contrasts");
  auto* ben = app.add_subcommand("bench", "replicate a simulation study");
  add_common(ben);
  add_methods(ben);
  ben->add_option("--R", flags.R, "replications");
  ben->add_option("--clip-lo", flags.clip_lo, "propensity lower clip");
  ben->add_option("--clip-hi", flags.clip_hi, "propensity upper clip");
  ben->add_option("--bins", flags.bins, "bins for a continuous exposure");
  auto* bal = app.add_subcommand("balance", "covariate balance table");
  add_common(bal);
  add_data(bal);
  bal->add_option("--weights", flags.weights, "ipw, ow, treated, untreated");
  subs = {sim, est, ben, bal};

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code(ErrorCategory::kUsage);
  }

  try {
    CLI::App* sub = nullptr;
    for (auto* s : subs) {
      if (s->parsed()) sub = s;
    }
    RunConfig cfg;
    cfg.command = sub->get_name();
    if (!config_path.empty()) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(csv::read_file(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file '" + config_path + "' is not valid JSON: " + e.what());
      }
      apply_config(cfg, doc);
    }
    for (const auto& f : detail::fields()) {
      const std::string flag = detail::flag_of(f.key);
      if (f.key == "seed") continue;
      CLI::Option* opt = nullptr;
      try {
        opt = sub->get_option(flag);
      } catch (const CLI::OptionNotFound&) {
        continue;
      }
      if (opt->count() > 0) f.copy(cfg, flags);
    }
    if (sub->count("--seed") > 0) cfg.seed = seed_flag;
    if (!cfg.seed) {
      std::random_device rd;
      cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      err << "seed: " << *cfg.seed << "\n";
    }
    validate(cfg);
    detail::Io io{out, err};
    if (cfg.command == "simulate") return detail::cmd_simulate(cfg, io);
    if (cfg.command == "estimate") return detail::cmd_estimate(cfg, io);
    if (cfg.command == "bench") return detail::cmd_bench(cfg, io);
    return detail::cmd_balance(cfg, io);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(ErrorCategory::kNumerical);
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace wqte::cli

#endif  // WQTE_CLI_HPP
