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

#ifndef WQTE_PROPENSITY_HPP
#define WQTE_PROPENSITY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"

namespace wqte {

enum class PsFamily { kLogistic, kMultinomial, kNormalBinned };

/// Fitted exposure model and per-unit generalized propensity scores.
///
/// `scores(i, j)` is e_j(x_i): column j is level j+1 for categorical and
/// binned exposures, and P(Z = j) for binary (so column 1 is e(x)).
struct PropensityModel {
  ExposureKind kind = ExposureKind::binary();
  PsFamily family = PsFamily::kLogistic;
  /// Logistic: 1 x (p+1). Multinomial: (J-1) x (p+1), level 1 baseline.
  /// Normal: 1 x (p+1) linear mean model.
  Eigen::MatrixXd coefficients;
  double sigma = 0.0;              // normal family residual SD
  std::vector<double> cut_points;  // m+1 entries for binned exposures
  Eigen::MatrixXd scores;          // n x J
  double clip_lo = 0.001;
  double clip_hi = 0.999;
  std::size_t clip_count = 0;
  int iterations = 0;
  bool converged = true;
  double gradient_norm = 0.0;
  std::vector<std::string> warnings;

  [[nodiscard]] Eigen::Index levels() const { return scores.cols(); }

  /// e(x_i) for binary models.
  [[nodiscard]] Eigen::VectorXd treated_score() const {
    if (scores.cols() != 2) throw ArgumentError("treated_score needs a binary model");
    return scores.col(1);
  }

  /// Score of the level each unit actually received (labels are 1-based).
  [[nodiscard]] Eigen::VectorXd received_score(std::span<const int> labels) const {
    Eigen::VectorXd out(scores.rows());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      out[i] = scores(i, labels[static_cast<std::size_t>(i)] - 1);
    }
    return out;
  }
};

inline Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

inline double normal_cdf(double v) {
  if (v == std::numeric_limits<double>::infinity()) return 1.0;
  if (v == -std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 * std::erfc(-v / std::sqrt(2.0));
}

// ---------------------------------------------------------------------------
// Clipping

namespace detail {

/// Clamps a probability row into [lo, hi] while keeping it on the simplex:
/// out-of-range entries are pinned to the violated bound and the remaining
/// entries rescaled to carry the rest of the mass, repeated until stable.
inline std::size_t clip_row(Eigen::RowVectorXd& row, double lo, double hi) {
  const Eigen::Index j = row.size();
  std::vector<int> pinned(static_cast<std::size_t>(j), 0);
  const Eigen::RowVectorXd orig = row;
  std::size_t changed = 0;
  for (Eigen::Index pass = 0; pass <= j; ++pass) {
    bool moved = false;
    double pinned_mass = 0.0;
    double free_mass = 0.0;
    for (Eigen::Index k = 0; k < j; ++k) {
      auto& pk = pinned[static_cast<std::size_t>(k)];
      if (pk == 0 && row[k] < lo) {
        pk = -1;
        moved = true;
      } else if (pk == 0 && row[k] > hi) {
        pk = 1;
        moved = true;
      }
      if (pk != 0) {
        row[k] = pk < 0 ? lo : hi;
        pinned_mass += row[k];
      } else {
        free_mass += orig[k];
      }
    }
    if (!moved && pass > 0) break;
    if (free_mass > 0.0) {
      const double scale = (1.0 - pinned_mass) / free_mass;
      for (Eigen::Index k = 0; k < j; ++k) {
        if (pinned[static_cast<std::size_t>(k)] == 0) row[k] = orig[k] * scale;
      }
    }
    if (!moved) break;
  }
  for (Eigen::Index k = 0; k < j; ++k) {
    if (pinned[static_cast<std::size_t>(k)] != 0) ++changed;
  }
  return changed;
}

}  // namespace detail

/// Bounds every score in [lo, hi]. Binary rows clip e and set 1 - e;
/// J >= 3 rows are renormalized to sum to one with the bounds held.
inline PropensityModel clip_scores(PropensityModel model, double lo, double hi) {
  if (!(lo > 0.0 && lo <= hi && hi < 1.0)) {
    throw ArgumentError("clip bounds must satisfy 0 < lo <= hi < 1");
  }
  const Eigen::Index levels = model.scores.cols();
  if (static_cast<double>(levels) * lo > 1.0 || static_cast<double>(levels) * hi < 1.0) {
    throw ArgumentError("clip bounds are infeasible for " + std::to_string(levels) + " levels");
  }
  model.clip_lo = lo;
  model.clip_hi = hi;
  model.clip_count = 0;
  for (Eigen::Index i = 0; i < model.scores.rows(); ++i) {
    if (levels == 2) {
      const double e = model.scores(i, 1);
      const double c = std::clamp(e, lo, hi);
      if (c != e) {
        ++model.clip_count;
        model.scores(i, 1) = c;
        model.scores(i, 0) = 1.0 - c;
      }
    } else {
      Eigen::RowVectorXd row = model.scores.row(i);
      model.clip_count += detail::clip_row(row, lo, hi);
      model.scores.row(i) = row;
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Logistic / multinomial fitting

struct GlmOptions {
  double ridge = 0.0;  // L2 penalty on slopes (intercepts unpenalized)
  int max_iterations = 100;
  double gradient_tol = 1e-8;
  double clip_lo = 0.001;
  double clip_hi = 0.999;
};

namespace detail {

/// Row-wise softmax with baseline level 1 (eta = 0).
inline Eigen::MatrixXd softmax_scores(const Eigen::MatrixXd& design,
                                      const Eigen::MatrixXd& coefficients) {
  const Eigen::MatrixXd eta = design * coefficients.transpose();  // n x (J-1)
  Eigen::MatrixXd out(design.rows(), coefficients.rows() + 1);
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    double mx = 0.0;
    for (Eigen::Index j = 0; j < eta.cols(); ++j) mx = std::max(mx, eta(i, j));
    out(i, 0) = std::exp(-mx);
    double total = out(i, 0);
    for (Eigen::Index j = 0; j < eta.cols(); ++j) {
      out(i, j + 1) = std::exp(eta(i, j) - mx);
      total += out(i, j + 1);
    }
    out.row(i) /= total;
  }
  return out;
}

struct GlmFit {
  Eigen::MatrixXd coefficients;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

/// Newton-Raphson with step halving on the (ridge-penalized) multinomial
/// log-likelihood. `labels` are 1..levels.
inline GlmFit fit_softmax(const Eigen::MatrixXd& x, std::span<const int> labels, int levels,
                          const GlmOptions& opt) {
  const Eigen::MatrixXd design = with_intercept(x);
  const Eigen::Index n = design.rows();
  const Eigen::Index q = design.cols();
  const Eigen::Index m = levels - 1;
  const Eigen::Index dim = m * q;
  if (n <= dim) {
    throw ArgumentError("propensity model needs n > " + std::to_string(dim) + " rows");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(levels), 0);
  for (int l : labels) {
    if (l < 1 || l > levels) throw ArgumentError("exposure label out of range");
    ++counts[static_cast<std::size_t>(l - 1)];
  }
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == 0) {
      throw DegenerateExposureError("exposure level " + std::to_string(l + 1) +
                                    " is never observed");
    }
  }
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, levels);
  for (Eigen::Index i = 0; i < n; ++i) onehot(i, labels[static_cast<std::size_t>(i)] - 1) = 1.0;

  auto penalized_loglik = [&](const Eigen::MatrixXd& coef, const Eigen::MatrixXd& probs) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      ll += std::log(std::max(probs(i, labels[static_cast<std::size_t>(i)] - 1),
                              std::numeric_limits<double>::min()));
    }
    if (opt.ridge > 0.0) ll -= 0.5 * opt.ridge * coef.rightCols(q - 1).squaredNorm();
    return ll;
  };

  GlmFit fit;
  // Start at the intercept-only MLE: log frequency ratios.
  fit.coefficients = Eigen::MatrixXd::Zero(m, q);
  for (Eigen::Index j = 0; j < m; ++j) {
    fit.coefficients(j, 0) = std::log(static_cast<double>(counts[static_cast<std::size_t>(j + 1)]) /
                                      static_cast<double>(counts[0]));
  }
  Eigen::MatrixXd probs = softmax_scores(design, fit.coefficients);
  double ll = penalized_loglik(fit.coefficients, probs);

  for (int it = 0; it < opt.max_iterations; ++it) {
    fit.iterations = it + 1;
    Eigen::VectorXd grad(dim);
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd g = design.transpose() * (onehot.col(j + 1) - probs.col(j + 1));
      if (opt.ridge > 0.0) g.tail(q - 1) -= opt.ridge * fit.coefficients.row(j).tail(q - 1).transpose();
      grad.segment(j * q, q) = g;
    }
    fit.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    if (fit.gradient_norm <= opt.gradient_tol) {
      fit.converged = true;
      break;
    }
    // Negative Hessian (information matrix).
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index l = j; l < m; ++l) {
        Eigen::VectorXd c = -probs.col(j + 1).cwiseProduct(probs.col(l + 1));
        if (j == l) c += probs.col(j + 1);
        Eigen::MatrixXd block = design.transpose() * c.asDiagonal() * design;
        info.block(j * q, l * q, q, q) = block;
        if (l != j) info.block(l * q, j * q, q, q) = block.transpose();
      }
      if (opt.ridge > 0.0) {
        for (Eigen::Index c = 1; c < q; ++c) info(j * q + c, j * q + c) += opt.ridge;
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      step = info.completeOrthogonalDecomposition().solve(grad);
    }
    double scale = 1.0;
    bool improved = false;
    Eigen::MatrixXd next;
    Eigen::MatrixXd next_probs;
    double next_ll = ll;
    for (int half = 0; half < 40; ++half) {
      next = fit.coefficients;
      for (Eigen::Index j = 0; j < m; ++j) {
        next.row(j) += scale * step.segment(j * q, q).transpose();
      }
      next_probs = softmax_scores(design, next);
      next_ll = penalized_loglik(next, next_probs);
      if (next_ll >= ll - 1e-12 * std::abs(ll)) {
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
    const double change = (next - fit.coefficients).lpNorm<Eigen::Infinity>();
    fit.coefficients = std::move(next);
    probs = std::move(next_probs);
    ll = next_ll;
    if (opt.ridge == 0.0 && fit.coefficients.norm() > 1e3) {
      throw SeparationError(
          "propensity coefficients diverge (norm > 1e3); the exposure appears "
          "separated by the covariates, retry with ridge > 0");
    }
    if (change < 1e-14 * (1.0 + fit.coefficients.lpNorm<Eigen::Infinity>())) {
      // Newton has stalled at machine precision.
      fit.converged = true;
      break;
    }
  }
  if (opt.ridge == 0.0 && fit.coefficients.norm() > 1e3) {
    throw SeparationError("propensity coefficients diverge (norm > 1e3); retry with ridge > 0");
  }
  if (opt.ridge == 0.0) {
    // Complete separation can also stall below the norm guard with every
    // unit classified with certainty.
    double worst = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      worst = std::min(worst, probs(i, labels[static_cast<std::size_t>(i)] - 1));
    }
    if (worst > 1.0 - 1e-6) {
      throw SeparationError(
          "the covariates predict the exposure perfectly (complete separation); retry with ridge > 0");
    }
  }
  return fit;
}

}  // namespace detail

/// Raw (unclipped) scores of `model` evaluated at covariates `x`.
inline Eigen::MatrixXd raw_scores(const PropensityModel& model, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd design = with_intercept(x);
  if (design.cols() != model.coefficients.cols()) {
    throw ArgumentError("covariate count does not match the propensity model");
  }
  if (model.family != PsFamily::kNormalBinned) {
    return detail::softmax_scores(design, model.coefficients);
  }
  if (!(model.sigma > 0.0)) throw DegenerateVarianceError("normal exposure model has sigma = 0");
  const auto bins = static_cast<Eigen::Index>(model.cut_points.size()) - 1;
  const Eigen::VectorXd mu = design * model.coefficients.row(0).transpose();
  Eigen::MatrixXd out(x.rows(), bins);
  const double inf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double prev = 0.0;
    for (Eigen::Index j = 0; j < bins; ++j) {
      const double cut = j + 1 == bins ? inf : model.cut_points[static_cast<std::size_t>(j + 1)];
      const double cdf = normal_cdf((cut - mu[i]) / model.sigma);
      out(i, j) = cdf - prev;
      prev = cdf;
    }
  }
  return out;
}

/// Re-evaluates the model at new covariates, clipping with its own bounds.
inline PropensityModel rescore(PropensityModel model, const Eigen::MatrixXd& x) {
  model.scores = raw_scores(model, x);
  const double lo = model.clip_lo;
  const double hi = model.clip_hi;
  return clip_scores(std::move(model), lo, hi);
}

/// Logistic regression of binary z on x (intercept added).
inline PropensityModel fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& z,
                                    const GlmOptions& opt = {}) {
  if (opt.ridge < 0.0) throw ArgumentError("ridge must be non-negative");
  std::vector<int> labels(static_cast<std::size_t>(z.size()));
  std::size_t ones = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] != 0.0 && z[i] != 1.0) throw ArgumentError("binary exposure must be 0/1");
    labels[static_cast<std::size_t>(i)] = z[i] == 1.0 ? 2 : 1;
    ones += z[i] == 1.0 ? 1 : 0;
  }
  if (ones == 0 || ones == labels.size()) {
    throw DegenerateExposureError("binary exposure has a single observed level");
  }
  auto glm = detail::fit_softmax(x, labels, 2, opt);
  PropensityModel model;
  model.kind = ExposureKind::binary();
  model.family = PsFamily::kLogistic;
  model.coefficients = std::move(glm.coefficients);
  model.iterations = glm.iterations;
  model.converged = glm.converged;
  model.gradient_norm = glm.gradient_norm;
  if (!glm.converged) model.warnings.push_back("logistic fit did not reach the gradient tolerance");
  model.scores = raw_scores(model, x);
  return clip_scores(std::move(model), opt.clip_lo, opt.clip_hi);
}

/// Multinomial logit of labels 1..J on x, level 1 as baseline.
inline PropensityModel fit_multinomial(const Eigen::MatrixXd& x, std::span<const int> labels,
                                       int levels, const GlmOptions& opt = {}) {
  if (levels < 2) throw ArgumentError("multinomial model needs at least two levels");
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw ArgumentError("label count does not match covariate rows");
  }
  auto glm = detail::fit_softmax(x, labels, levels, opt);
  PropensityModel model;
  model.kind = levels == 2 ? ExposureKind::binary() : ExposureKind::categorical(levels);
  model.family = PsFamily::kMultinomial;
  model.coefficients = std::move(glm.coefficients);
  model.iterations = glm.iterations;
  model.converged = glm.converged;
  model.gradient_norm = glm.gradient_norm;
  if (!glm.converged) model.warnings.push_back("multinomial fit did not reach the gradient tolerance");
  model.scores = raw_scores(model, x);
  return clip_scores(std::move(model), opt.clip_lo, opt.clip_hi);
}

// ---------------------------------------------------------------------------
// Continuous exposure

/// Quantile bins of a continuous exposure.
struct Binning {
  /// m+1 cut points; the ends are +-max double standing in for +-infinity.
  std::vector<double> cut_points;
  std::vector<int> labels;  // 1..m, label j iff cut[j-1] < z <= cut[j]
  std::vector<std::string> warnings;

  [[nodiscard]] int bins() const { return static_cast<int>(cut_points.size()) - 1; }
};

/// Labels of `z` under existing cut points.
inline std::vector<int> assign_bins(std::span<const double> z,
                                    const std::vector<double>& cut_points) {
  // Interior cuts are cut_points[1..m-1].
  const auto first = cut_points.begin() + 1;
  const auto last = cut_points.end() - 1;
  std::vector<int> labels(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    labels[i] = 1 + static_cast<int>(std::lower_bound(first, last, z[i]) - first);
  }
  return labels;
}

/// Splits z into m bins at its empirical (inf-definition) k/m quantiles.
/// Tied quantiles collapse adjacent bins, with a warning.
inline Binning bin_continuous(std::span<const double> z, int m) {
  if (m < 2) throw ArgumentError("bin_continuous needs m >= 2");
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> uniq = sorted;
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (uniq.size() < static_cast<std::size_t>(m)) {
    throw BinningError("need at least " + std::to_string(m) + " distinct exposure values, found " +
                       std::to_string(uniq.size()));
  }
  const std::size_t n = sorted.size();
  const auto mm = static_cast<std::size_t>(m);
  Binning out;
  out.cut_points.push_back(std::numeric_limits<double>::lowest());
  for (std::size_t k = 1; k < mm; ++k) {
    const std::size_t rank = (k * n + mm - 1) / mm;  // ceil(k n / m), 1-based
    const double q = sorted[rank - 1];
    if (q == out.cut_points.back() || q >= sorted.back()) {
      continue;  // collapsed
    }
    out.cut_points.push_back(q);
  }
  out.cut_points.push_back(std::numeric_limits<double>::max());
  if (out.bins() < m) {
    out.warnings.push_back("tied exposure quantiles collapsed " + std::to_string(m) + " bins into " +
                           std::to_string(out.bins()));
  }
  out.labels = assign_bins(z, out.cut_points);
  return out;
}

/// Propensity of each bin from a homoscedastic normal model
/// z | x ~ N(mu(x), sigma^2) fitted by least squares.
inline PropensityModel gps_from_normal_model(const Eigen::MatrixXd& x, const Eigen::VectorXd& z,
                                             const std::vector<double>& cut_points,
                                             double clip_lo = 0.001, double clip_hi = 0.999) {
  const Eigen::MatrixXd design = with_intercept(x);
  if (design.rows() <= design.cols()) {
    throw ArgumentError("normal exposure model needs n > p + 1 rows");
  }
  if (cut_points.size() < 3) throw ArgumentError("need at least two bins");
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(z);
  const Eigen::VectorXd resid = z - design * coef;
  const double dof = static_cast<double>(design.rows() - design.cols());
  const double sigma = std::sqrt(resid.squaredNorm() / dof);
  const double scale = std::sqrt((z.array() - z.mean()).square().mean());
  if (!(sigma > 1e-12 * scale)) throw DegenerateVarianceError("exposure residual variance is zero");
  PropensityModel model;
  model.kind = ExposureKind::continuous();
  model.family = PsFamily::kNormalBinned;
  model.coefficients = coef.transpose();
  model.sigma = sigma;
  model.cut_points = cut_points;
  model.scores = raw_scores(model, x);
  return clip_scores(std::move(model), clip_lo, clip_hi);
}

/// Multinomial propensity on the constructed bins of a continuous exposure.
inline PropensityModel fit_multinomial_on_bins(const Eigen::MatrixXd& x, const Binning& bins,
                                               const GlmOptions& opt = {}) {
  auto model = fit_multinomial(x, bins.labels, bins.bins(), opt);
  model.kind = ExposureKind::continuous();
  model.cut_points = bins.cut_points;
  return model;
}

// ---------------------------------------------------------------------------
// Dispatch on the exposure kind of a dataset

enum class ContinuousPsModel { kNormal, kMultinomial };

struct PropensityOptions {
  GlmOptions glm;
  int bins = 10;
  ContinuousPsModel continuous_model = ContinuousPsModel::kNormal;
};

/// Logistic for binary, multinomial for categorical, and binned GPS for
/// continuous exposure (normal model by default).
inline PropensityModel fit_propensity(const Dataset& data, const PropensityOptions& opt = {}) {
  const auto& kind = data.kind();
  if (kind.is_binary()) return fit_logistic(data.x(), data.z(), opt.glm);
  if (kind.is_categorical()) {
    auto model = fit_multinomial(data.x(), data.labels(), kind.levels, opt.glm);
    model.kind = kind;
    return model;
  }
  const std::vector<double> z(data.z().data(), data.z().data() + data.z().size());
  auto bins = bin_continuous(z, opt.bins);
  PropensityModel model;
  if (opt.continuous_model == ContinuousPsModel::kNormal) {
    model = gps_from_normal_model(data.x(), data.z(), bins.cut_points, opt.glm.clip_lo, opt.glm.clip_hi);
  } else {
    model = fit_multinomial_on_bins(data.x(), bins, opt.glm);
  }
  for (auto& w : bins.warnings) model.warnings.push_back(std::move(w));
  return model;
}

// ---------------------------------------------------------------------------
// JSON

inline std::string to_string(PsFamily f) {
  switch (f) {
    case PsFamily::kLogistic:
      return "logistic";
    case PsFamily::kMultinomial:
      return "multinomial";
    case PsFamily::kNormalBinned:
      return "normal_binned";
  }
  return "unknown";
}

/// Serializable part of the model (scores are recomputed with rescore()).
inline nlohmann::json to_json(const PropensityModel& model) {
  nlohmann::json coef = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.coefficients.rows(); ++r) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < model.coefficients.cols(); ++c) row.push_back(model.coefficients(r, c));
    coef.push_back(row);
  }
  nlohmann::json cuts = nlohmann::json::array();
  for (std::size_t k = 0; k < model.cut_points.size(); ++k) {
    if (k == 0) {
      cuts.push_back("-inf");
    } else if (k + 1 == model.cut_points.size()) {
      cuts.push_back("inf");
    } else {
      cuts.push_back(model.cut_points[k]);
    }
  }
  return {{"kind", to_string(model.kind)},
          {"levels", model.kind.levels},
          {"family", to_string(model.family)},
          {"coefficients", coef},
          {"sigma", model.sigma},
          {"cut_points", cuts},
          {"clip_bounds", {model.clip_lo, model.clip_hi}},
          {"converged", model.converged},
          {"iterations", model.iterations}};
}

inline PropensityModel propensity_from_json(const nlohmann::json& j) {
  PropensityModel model;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "binary") {
    model.kind = ExposureKind::binary();
  } else if (kind == "continuous") {
    model.kind = ExposureKind::continuous();
  } else {
    model.kind = ExposureKind::categorical(j.at("levels").get<int>());
  }
  const auto family = j.at("family").get<std::string>();
  if (family == "logistic") {
    model.family = PsFamily::kLogistic;
  } else if (family == "multinomial") {
    model.family = PsFamily::kMultinomial;
  } else if (family == "normal_binned") {
    model.family = PsFamily::kNormalBinned;
  } else {
    throw SchemaError("unknown propensity family '" + family + "'");
  }
  const auto& coef = j.at("coefficients");
  const auto rows = static_cast<Eigen::Index>(coef.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(coef[0].size()) : 0;
  model.coefficients.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      model.coefficients(r, c) = coef[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  model.sigma = j.value("sigma", 0.0);
  for (const auto& c : j.at("cut_points")) {
    if (c.is_string()) {
      model.cut_points.push_back(c.get<std::string>() == "inf" ? std::numeric_limits<double>::max()
                                                               : std::numeric_limits<double>::lowest());
    } else {
      model.cut_points.push_back(c.get<double>());
    }
  }
  model.clip_lo = j.at("clip_bounds")[0].get<double>();
  model.clip_hi = j.at("clip_bounds")[1].get<double>();
  model.converged = j.value("converged", true);
  model.iterations = j.value("iterations", 0);
  return model;
}

}  // namespace wqte

#endif  // WQTE_PROPENSITY_HPP
