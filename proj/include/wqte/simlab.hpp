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

#ifndef WQTE_SIMLAB_HPP
#define WQTE_SIMLAB_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wqte/balance.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"
#include "wqte/propensity.hpp"
#include "wqte/quantreg.hpp"
#include "wqte/rng.hpp"

namespace wqte {

enum class Confounding { kWeak, kStrong };

struct ErrorSpec {
  enum class Kind { kPareto, kStudentT, kNone };
  Kind kind = Kind::kPareto;
  double location = 1.0;  // Pareto scale eps_m
  double shape = 5.0;     // Pareto theta, or Student-t degrees of freedom

  static ErrorSpec pareto(double theta, double location = 1.0) {
    return {Kind::kPareto, location, theta};
  }
  static ErrorSpec student_t(double df) { return {Kind::kStudentT, 0.0, df}; }
  static ErrorSpec none() { return {Kind::kNone, 0.0, 0.0}; }
};

inline std::string to_string(const ErrorSpec& e) {
  std::ostringstream os;
  switch (e.kind) {
    case ErrorSpec::Kind::kPareto:
      os << "pareto" << e.shape;
      break;
    case ErrorSpec::Kind::kStudentT:
      os << "t" << e.shape;
      break;
    case ErrorSpec::Kind::kNone:
      os << "none";
      break;
  }
  return os.str();
}

/// A simulation design: exposure model, outcome model and error law.
///
/// Exposure model parameters are stored in one layout for every kind:
/// row j of `ps_slopes` (with `ps_intercepts[j]`) is the linear predictor of
/// level j+2 against level 1 for categorical, of Z = 1 for binary, and the
/// mean of Z for continuous.
struct SimScenario {
  std::string key;
  ExposureKind exposure = ExposureKind::binary();
  Confounding confounding = Confounding::kWeak;
  int d = 1;
  bool interaction = false;
  ErrorSpec error = ErrorSpec::pareto(5.0);
  std::size_t n = 2000;
  std::uint64_t seed = 0;

  Eigen::VectorXd ps_intercepts;
  Eigen::MatrixXd ps_slopes;
  /// Continuous exposure: Z | X ~ N(mean, exposure_sd^2). The default reads
  /// "N(mean, 5)" as variance 5.
  double exposure_sd = std::sqrt(5.0);
  /// Multiplier on the covariate part of the outcome; 0 turns confounding
  /// of the outcome off (test hook).
  double covariate_effect = 1.0;
  Eigen::MatrixXd sigma;  // d x d covariance of X
};

/// Covariance of the four correlated confounders.
inline Eigen::MatrixXd default_sigma4() {
  Eigen::MatrixXd s(4, 4);
  s << 1.0, 0.5, 0.2, 0.3,  //
      0.5, 1.0, 0.7, 0.0,   //
      0.2, 0.7, 1.0, 0.0,   //
      0.3, 0.0, 0.0, 1.0;
  return s;
}

namespace detail {

inline ErrorSpec parse_error_key(const std::string& s) {
  auto number = [&](std::size_t from) {
    const auto v = csv::to_double(std::string_view(s).substr(from));
    if (!v || !(*v > 0.0)) throw UsageError("bad error spec '" + s + "'");
    return *v;
  };
  if (s.rfind("pareto", 0) == 0) return ErrorSpec::pareto(number(6));
  if (s == "none") return ErrorSpec::none();
  if (s.rfind("t", 0) == 0) return ErrorSpec::student_t(number(1));
  throw UsageError("bad error spec '" + s + "' (paretoTHETA, tNU or none)");
}

}  // namespace detail

inline std::vector<std::string> preset_keys() {
  std::vector<std::string> keys;
  const std::vector<std::string> errors{"pareto5", "pareto7", "pareto10", "t3"};
  for (const std::string exposure : {"binary", "categorical", "continuous"}) {
    for (const std::string conf : {"weak", "strong"}) {
      for (const std::string d : {"d1", "d4"}) {
        std::vector<std::string> inters{"nointer"};
        if (exposure == "binary" && d == "d1") inters.push_back("inter");
        for (const auto& inter : inters) {
          for (const auto& err : errors) {
            keys.push_back(exposure + "-" + conf + "-" + d + "-" + inter + "-" + err);
          }
        }
      }
    }
  }
  return keys;
}

/// Builds the scenario named by `key`, e.g. "binary-weak-d1-nointer-pareto5".
/// The error part accepts any paretoTHETA, tNU, or "none".
inline SimScenario make_scenario(const std::string& key, std::size_t n = 2000,
                                 std::uint64_t seed = 0) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '-');) parts.push_back(part);
  auto bad = [&](const std::string& why) {
    std::string msg = "unknown scenario '" + key + "': " + why + ". Presets:";
    for (const auto& k : preset_keys()) msg += " " + k;
    return UsageError(msg);
  };
  if (parts.size() != 5) throw bad("expected exposure-confounding-d-interaction-error");

  SimScenario sc;
  sc.key = key;
  sc.n = n;
  sc.seed = seed;
  if (parts[1] == "weak") {
    sc.confounding = Confounding::kWeak;
  } else if (parts[1] == "strong") {
    sc.confounding = Confounding::kStrong;
  } else {
    throw bad("confounding must be weak or strong");
  }
  if (parts[2] == "d1") {
    sc.d = 1;
  } else if (parts[2] == "d4") {
    sc.d = 4;
    sc.sigma = default_sigma4();
  } else {
    throw bad("dimension must be d1 or d4");
  }
  if (parts[3] == "inter") {
    sc.interaction = true;
  } else if (parts[3] != "nointer") {
    throw bad("interaction must be inter or nointer");
  }
  try {
    sc.error = detail::parse_error_key(parts[4]);
  } catch (const UsageError&) {
    throw bad("error must be paretoTHETA, tNU or none");
  }
  const bool weak = sc.confounding == Confounding::kWeak;

  if (parts[0] == "binary") {
    sc.exposure = ExposureKind::binary();
    sc.ps_intercepts = Eigen::VectorXd::Zero(1);
    sc.ps_slopes.resize(1, sc.d);
    if (sc.d == 1) {
      sc.ps_intercepts[0] = 0.5;
      sc.ps_slopes(0, 0) = weak ? 0.5 : 2.0;
    } else if (weak) {
      sc.ps_slopes << -0.1, 0.2, 0.2, -0.1;
    } else {
      sc.ps_slopes << -1.0, 2.0, 2.0, -1.0;
    }
  } else if (parts[0] == "categorical") {
    sc.exposure = ExposureKind::categorical(3);
    sc.ps_intercepts = Eigen::VectorXd::Zero(2);
    sc.ps_slopes.resize(2, sc.d);
    if (sc.d == 1) {
      sc.ps_intercepts << 0.5, 0.5;
      if (weak) {
        sc.ps_slopes << 0.2, 0.3;
      } else {
        sc.ps_slopes << 1.5, 2.0;
      }
    } else {
      const double eta = weak ? 1.0 : 5.0;
      sc.ps_slopes << 0.1, 0.2, 0.2, 0.1,  //
          0.1, 0.1, 0.2, 0.2;
      sc.ps_slopes *= eta;
    }
  } else if (parts[0] == "continuous") {
    sc.exposure = ExposureKind::continuous();
    sc.ps_intercepts = Eigen::VectorXd::Zero(1);
    sc.ps_slopes.resize(1, sc.d);
    if (sc.d == 1) {
      sc.ps_intercepts[0] = 1.0;
      sc.ps_slopes(0, 0) = weak ? 0.3 : 3.0;
    } else {
      sc.ps_slopes << 1.0, 2.0, 2.0, 1.0;
      sc.ps_slopes *= weak ? 0.1 : 0.8;
    }
  } else {
    throw bad("exposure must be binary, categorical or continuous");
  }
  if (sc.interaction && !(sc.exposure.is_binary() && sc.d == 1)) {
    throw bad("interaction is only defined for binary d1 designs");
  }
  return sc;
}

inline nlohmann::json to_json(const SimScenario& sc) {
  auto vec = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<double> row;
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json j{{"key", sc.key},
                   {"exposure", to_string(sc.exposure)},
                   {"confounding", sc.confounding == Confounding::kWeak ? "weak" : "strong"},
                   {"d", sc.d},
                   {"interaction", sc.interaction},
                   {"error", to_string(sc.error)},
                   {"n", sc.n},
                   {"seed", sc.seed},
                   {"ps_intercepts", vec(sc.ps_intercepts.transpose())[0]},
                   {"ps_slopes", vec(sc.ps_slopes)},
                   {"covariate_effect", sc.covariate_effect}};
  if (sc.exposure.is_continuous()) j["exposure_sd"] = sc.exposure_sd;
  if (sc.d > 1) j["sigma"] = vec(sc.sigma);
  return j;
}

// ---------------------------------------------------------------------------
// Generators. Each array comes from its own substream of the scenario seed.

enum SimStream : std::uint64_t { kStreamX = 1, kStreamZ = 2, kStreamError = 3 };

inline Eigen::MatrixXd gen_confounders(const SimScenario& sc, std::size_t n, Engine& rng) {
  if (sc.d != 1 && sc.d != 4) throw ArgumentError("confounder dimension must be 1 or 4");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), sc.d);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(i, c) = normal(rng);
  }
  if (sc.d > 1) {
    Eigen::LLT<Eigen::MatrixXd> llt(sc.sigma);
    if (llt.info() != Eigen::Success) {
      throw FactorizationError("confounder covariance is not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    x = x * l.transpose();
  }
  return x;
}

inline Eigen::MatrixXd gen_confounders(const SimScenario& sc) {
  auto rng = make_engine(sc.seed, kStreamX);
  return gen_confounders(sc, sc.n, rng);
}

/// True exposure probabilities (n x J) for binary and categorical designs.
inline Eigen::MatrixXd true_probabilities(const SimScenario& sc, const Eigen::MatrixXd& x) {
  if (sc.exposure.is_continuous()) throw ArgumentError("continuous exposure has no level probabilities");
  Eigen::MatrixXd eta = x * sc.ps_slopes.transpose();
  eta.rowwise() += sc.ps_intercepts.transpose();
  Eigen::MatrixXd p(x.rows(), eta.cols() + 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double total = 1.0;
    p(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < eta.cols(); ++j) {
      p(i, j + 1) = std::exp(eta(i, j));
      total += p(i, j + 1);
    }
    p.row(i) /= total;
  }
  return p;
}

inline Eigen::VectorXd exposure_mean(const SimScenario& sc, const Eigen::MatrixXd& x) {
  return (x * sc.ps_slopes.row(0).transpose()).array() + sc.ps_intercepts[0];
}

inline Eigen::VectorXd gen_exposure(const SimScenario& sc, const Eigen::MatrixXd& x, Engine& rng) {
  Eigen::VectorXd z(x.rows());
  if (sc.exposure.is_continuous()) {
    std::normal_distribution<double> normal;
    const Eigen::VectorXd mu = exposure_mean(sc, x);
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = mu[i] + sc.exposure_sd * normal(rng);
    return z;
  }
  const Eigen::MatrixXd p = true_probabilities(sc, x);
  std::uniform_real_distribution<double> unif;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double u = unif(rng);
    if (sc.exposure.is_binary()) {
      z[i] = u < p(i, 1) ? 1.0 : 0.0;
      continue;
    }
    double cum = 0.0;
    Eigen::Index level = p.cols();
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      cum += p(i, j);
      if (u < cum) {
        level = j + 1;
        break;
      }
    }
    z[i] = static_cast<double>(level);
  }
  return z;
}

inline Eigen::VectorXd gen_error(const ErrorSpec& spec, std::size_t n, Engine& rng) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  switch (spec.kind) {
    case ErrorSpec::Kind::kNone:
      e.setZero();
      break;
    case ErrorSpec::Kind::kPareto: {
      if (!(spec.shape > 0.0) || !(spec.location > 0.0)) {
        throw ArgumentError("Pareto shape and location must be positive");
      }
      std::uniform_real_distribution<double> unif;
      for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double u = 1.0 - unif(rng);  // (0, 1]
        e[i] = spec.location * std::pow(u, -1.0 / spec.shape);
      }
      break;
    }
    case ErrorSpec::Kind::kStudentT: {
      if (!(spec.shape > 0.0)) throw ArgumentError("Student-t degrees of freedom must be positive");
      std::student_t_distribution<double> t(spec.shape);
      for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = t(rng);
      break;
    }
  }
  return e;
}

/// Outcome of one unit at exposure `z`.
inline double outcome_value(const SimScenario& sc, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                            double z, double eps) {
  double effect = z;
  if (sc.exposure.is_categorical()) effect = (z == 2.0 ? 1.0 : 0.0) - (z == 3.0 ? 1.0 : 0.0);
  double cov = 0.0;
  if (sc.d == 1) {
    cov = x[0];
    if (sc.interaction) effect += z * x[0];
  } else {
    cov = std::sin(x[0]) + x[1] * x[1] + x[2] + x[3] + x[2] * x[3];
  }
  return 1.0 + effect + sc.covariate_effect * cov + eps;
}

inline Eigen::VectorXd gen_outcome(const SimScenario& sc, const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& z, const Eigen::VectorXd& eps) {
  if (x.rows() != z.size() || z.size() != eps.size() || x.cols() != sc.d) {
    throw ArgumentError("gen_outcome: inputs do not match the scenario");
  }
  Eigen::VectorXd y(z.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = outcome_value(sc, x.row(i), z[i], eps[i]);
  return y;
}

inline std::vector<std::string> covariate_names(int d) {
  std::vector<std::string> names;
  for (int c = 1; c <= d; ++c) names.push_back("x" + std::to_string(c));
  return names;
}

/// One simulated dataset; fully determined by (scenario, seed).
inline Dataset simulate(const SimScenario& sc) {
  auto rx = make_engine(sc.seed, kStreamX);
  auto rz = make_engine(sc.seed, kStreamZ);
  auto re = make_engine(sc.seed, kStreamError);
  Eigen::MatrixXd x = gen_confounders(sc, sc.n, rx);
  Eigen::VectorXd z = gen_exposure(sc, x, rz);
  const Eigen::VectorXd eps = gen_error(sc.error, sc.n, re);
  Eigen::VectorXd y = gen_outcome(sc, x, z, eps);
  std::vector<std::string> labels;
  if (sc.exposure.is_categorical()) {
    for (int j = 1; j <= sc.exposure.levels; ++j) labels.push_back(std::to_string(j));
  }
  return Dataset(std::move(y), std::move(z), sc.exposure, std::move(x), covariate_names(sc.d), "y",
                 "z", std::move(labels));
}

/// The data-generating propensity model evaluated at `x`, clipped.
/// Continuous designs need the bin cut points.
inline PropensityModel true_propensity(const SimScenario& sc, const Eigen::MatrixXd& x,
                                       const std::vector<double>& cut_points = {},
                                       double clip_lo = 0.001, double clip_hi = 0.999) {
  PropensityModel model;
  model.kind = sc.exposure;
  Eigen::MatrixXd coef(sc.ps_slopes.rows(), sc.d + 1);
  coef.col(0) = sc.ps_intercepts;
  coef.rightCols(sc.d) = sc.ps_slopes;
  model.coefficients = coef;
  if (sc.exposure.is_continuous()) {
    model.family = PsFamily::kNormalBinned;
    model.sigma = sc.exposure_sd;
    model.cut_points = cut_points;
  } else {
    model.family = sc.exposure.is_binary() ? PsFamily::kLogistic : PsFamily::kMultinomial;
  }
  model.scores = raw_scores(model, x);
  return clip_scores(std::move(model), clip_lo, clip_hi);
}

// ---------------------------------------------------------------------------
// Monte-Carlo truth

/// Potential-outcome samples Y(a), Y(b) for common draws of (X, eps), with
/// the overlap tilting of the true exposure model for each draw.
struct PotentialSample {
  Eigen::VectorXd y_a;
  Eigen::VectorXd y_b;
  Eigen::VectorXd overlap;  // e(1-e) binary; (sum_j 1/e_j)^-1 categorical
  Eigen::MatrixXd x;
  Eigen::MatrixXd probs;    // empty for continuous
};

/// Contrast levels: binary/continuous compare z=1 with z=0, categorical
/// compares `level` with level 1.
inline PotentialSample draw_potential_outcomes(const SimScenario& sc, std::size_t n_mc,
                                               std::uint64_t seed, int level = 2) {
  auto rx = make_engine(seed, kStreamX);
  auto re = make_engine(seed, kStreamError);
  PotentialSample s;
  s.x = gen_confounders(sc, n_mc, rx);
  const Eigen::VectorXd eps = gen_error(sc.error, n_mc, re);
  double za = 1.0;
  double zb = 0.0;
  if (sc.exposure.is_categorical()) {
    if (level < 2 || level > sc.exposure.levels) throw ArgumentError("contrast level out of range");
    za = level;
    zb = 1.0;
  }
  const auto n = static_cast<Eigen::Index>(n_mc);
  s.y_a.resize(n);
  s.y_b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.y_a[i] = outcome_value(sc, s.x.row(i), za, eps[i]);
    s.y_b[i] = outcome_value(sc, s.x.row(i), zb, eps[i]);
  }
  s.overlap = Eigen::VectorXd::Ones(n);
  if (!sc.exposure.is_continuous()) {
    s.probs = true_probabilities(sc, s.x);
    for (Eigen::Index i = 0; i < n; ++i) {
      s.overlap[i] = sc.exposure.is_binary() ? s.probs(i, 1) * s.probs(i, 0)
                                             : 1.0 / s.probs.row(i).cwiseInverse().sum();
    }
  }
  return s;
}

inline double true_qte_oracle(const SimScenario& sc, double tau, std::size_t n_mc,
                              std::uint64_t seed, int level = 2) {
  require_tau(tau);
  const auto s = draw_potential_outcomes(sc, n_mc, seed, level);
  return unweighted_quantile(s.y_a, tau) - unweighted_quantile(s.y_b, tau);
}

/// WQTE under tilting g evaluated with the true propensity. Categorical
/// designs support uniform and overlap (generalized overlap) tilting;
/// continuous designs only uniform.
inline double true_wqte_oracle(const SimScenario& sc, const TiltingSpec& g, double tau,
                               std::size_t n_mc, std::uint64_t seed, int level = 2) {
  require_tau(tau);
  const auto s = draw_potential_outcomes(sc, n_mc, seed, level);
  Eigen::VectorXd w;
  if (g.tag == TiltingTag::kUniform) {
    w = Eigen::VectorXd::Ones(s.y_a.size());
  } else if (g.tag == TiltingTag::kOverlap && !sc.exposure.is_continuous()) {
    w = s.overlap;
  } else if (sc.exposure.is_binary()) {
    w = tilting_values(g, s.probs.col(1), s.x);
  } else {
    throw ArgumentError("tilting '" + to_string(g) + "' is not defined for " +
                        to_string(sc.exposure) + " exposure");
  }
  return weighted_quantile(s.y_a, w, tau) - weighted_quantile(s.y_b, w, tau);
}

}  // namespace wqte

#endif  // WQTE_SIMLAB_HPP
