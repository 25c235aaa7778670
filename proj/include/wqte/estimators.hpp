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

#ifndef WQTE_ESTIMATORS_HPP
#define WQTE_ESTIMATORS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wqte/balance.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"
#include "wqte/propensity.hpp"
#include "wqte/quantreg.hpp"

namespace wqte {

enum class Method {
  kTwoStepWqte,
  kIpwQr,
  kOwQr,
  kPsRegHomogeneous,
  kPsRegMarginalized,
  kNaive,
  kTrueModel,
};

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kTwoStepWqte:
      return "two_step_wqte";
    case Method::kIpwQr:
      return "ipw_qr";
    case Method::kOwQr:
      return "ow_qr";
    case Method::kPsRegHomogeneous:
      return "psreg_homogeneous";
    case Method::kPsRegMarginalized:
      return "psreg_marginalized";
    case Method::kNaive:
      return "naive";
    case Method::kTrueModel:
      return "true_model";
  }
  return "unknown";
}

/// Accepts the canonical names and the short forms ipw, ow, two_step,
/// psreg_hom, psreg_marg. Plain "psreg" is resolved by the caller.
inline Method parse_method(const std::string& s) {
  if (s == "two_step_wqte" || s == "two_step") return Method::kTwoStepWqte;
  if (s == "ipw_qr" || s == "ipw") return Method::kIpwQr;
  if (s == "ow_qr" || s == "ow") return Method::kOwQr;
  if (s == "psreg_homogeneous" || s == "psreg_hom") return Method::kPsRegHomogeneous;
  if (s == "psreg_marginalized" || s == "psreg_marg") return Method::kPsRegMarginalized;
  if (s == "naive") return Method::kNaive;
  if (s == "true_model" || s == "true") return Method::kTrueModel;
  throw UsageError("unknown method '" + s +
                   "' (two_step, ipw, ow, psreg, psreg_hom, psreg_marg, naive, true_model)");
}

enum class EstimandTag { kPopulationQte, kWqte, kPairwiseQte };

struct Estimand {
  EstimandTag tag = EstimandTag::kPopulationQte;
  std::string tilting;  // kWqte only
  int level = 0;        // kPairwiseQte: level vs baseline
  int baseline = 1;
};

inline std::string to_string(const Estimand& e) {
  switch (e.tag) {
    case EstimandTag::kPopulationQte:
      return "QTE";
    case EstimandTag::kWqte:
      return "WQTE(" + e.tilting + ")";
    case EstimandTag::kPairwiseQte:
      return "QTE(" + std::to_string(e.level) + " vs " + std::to_string(e.baseline) + ")";
  }
  return "unknown";
}

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  std::string method = "percentile";
};

struct QteEstimate {
  double tau = 0.5;
  Estimand estimand;
  Method method = Method::kIpwQr;
  double point = 0.0;
  std::optional<std::pair<double, double>> arm_quantiles;  // (q0, q1)
  std::optional<double> se;
  std::optional<ConfidenceInterval> ci;
  std::optional<double> beta2;  // exposure x PS interaction, a diagnostic
  std::vector<std::string> warnings;
};

inline nlohmann::json to_json(const QteEstimate& e) {
  nlohmann::json j{{"method", to_string(e.method)},
                   {"estimand", to_string(e.estimand)},
                   {"tau", e.tau},
                   {"estimate", e.point}};
  j["std_error"] = e.se ? nlohmann::json(*e.se) : nlohmann::json(nullptr);
  if (e.ci) {
    j["ci"] = {{"lo", e.ci->lo}, {"hi", e.ci->hi}, {"level", e.ci->level}, {"method", e.ci->method}};
  } else {
    j["ci"] = nullptr;
  }
  if (e.arm_quantiles) j["arm_quantiles"] = {e.arm_quantiles->first, e.arm_quantiles->second};
  if (e.beta2) j["beta2"] = *e.beta2;
  j["warnings"] = e.warnings;
  return j;
}

inline std::string estimate_csv_header() { return "method,estimand,tau,estimate,std_error,ci_lo,ci_hi\n"; }

inline std::string to_csv_row(const QteEstimate& e) {
  auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string("NA"); };
  std::string row = to_string(e.method) + "," + csv::escape(to_string(e.estimand)) + "," +
                    csv::format_double(e.tau) + "," + csv::format_double(e.point) + "," + opt(e.se) + ",";
  row += e.ci ? csv::format_double(e.ci->lo) + "," + csv::format_double(e.ci->hi) : "NA,NA";
  return row + "\n";
}

// ---------------------------------------------------------------------------
// Shared machinery

namespace detail {

/// Columns of `x` (restricted to rows with positive weight) that are
/// linearly independent of the columns before them.
inline std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (w[i] > 0.0) rows.push_back(i);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd basis(n, 0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::VectorXd v(n);
    for (Eigen::Index r = 0; r < n; ++r) v[r] = x(rows[static_cast<std::size_t>(r)], c);
    const double norm = v.norm();
    if (!(norm > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index b = 0; b < basis.cols(); ++b) v -= basis.col(b).dot(v) * basis.col(b);
    }
    if (v.norm() <= 1e-6 * norm) continue;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v / v.norm();
    keep.push_back(c);
  }
  return keep;
}

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = x.col(cols[c]);
  return out;
}

/// Weighted QR after dropping collinear columns. Dropped coefficients are
/// reported as zero. Columns listed in `required` must survive.
struct ReducedFit {
  Eigen::VectorXd beta;  // full length
  std::vector<Eigen::Index> kept;
  QuantileFit fit;
};

inline ReducedFit fit_reduced(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                              double tau, const std::vector<std::string>& names,
                              const std::vector<Eigen::Index>& required, const QrOptions& qr,
                              std::vector<std::string>& warnings,
                              const std::vector<Eigen::Index>* kept_hint = nullptr) {
  ReducedFit out;
  out.kept = kept_hint ? *kept_hint : independent_columns(x, w);
  for (Eigen::Index req : required) {
    if (std::find(out.kept.begin(), out.kept.end(), req) == out.kept.end()) {
      throw SingularDesignError("design column '" + names[static_cast<std::size_t>(req)] +
                                "' is collinear with earlier columns; the effect is not identified");
    }
  }
  if (!kept_hint) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (std::find(out.kept.begin(), out.kept.end(), c) == out.kept.end()) {
        warnings.push_back("dropped collinear design column '" + names[static_cast<std::size_t>(c)] + "'");
      }
    }
  }
  QrOptions opt = qr;
  if (opt.warm_start && opt.warm_start->size() != static_cast<Eigen::Index>(out.kept.size())) {
    opt.warm_start.reset();
  }
  const Eigen::MatrixXd xr = out.kept.size() == static_cast<std::size_t>(x.cols()) ? x : select_columns(x, out.kept);
  out.fit = fit_weighted_qr(xr, y, w, tau, opt);
  out.beta = Eigen::VectorXd::Zero(x.cols());
  for (std::size_t c = 0; c < out.kept.size(); ++c) out.beta[out.kept[c]] = out.fit.beta[static_cast<Eigen::Index>(c)];
  return out;
}

inline void require_binary(const Dataset& data, const char* who) {
  if (!data.kind().is_binary()) throw ArgumentError(std::string(who) + " needs a binary exposure");
}

inline void require_scores(const Dataset& data, const PropensityModel& ps) {
  if (ps.scores.rows() != static_cast<Eigen::Index>(data.n())) {
    throw ArgumentError("propensity scores do not match the dataset rows");
  }
}

/// [1, D_levels...] with D the indicators of every level except `baseline`.
inline std::vector<int> non_baseline_levels(int levels, int baseline) {
  std::vector<int> out;
  for (int j = 1; j <= levels; ++j) {
    if (j != baseline) out.push_back(j);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Binary exposure

/// Two-step estimator: weighted tau-quantile of each arm under g-balancing
/// weights, then their difference.
inline QteEstimate wqte_two_step(const Dataset& data, const PropensityModel& ps, const TiltingSpec& g,
                                 double tau) {
  require_tau(tau);
  detail::require_binary(data, "wqte_two_step");
  detail::require_scores(data, ps);
  const auto w = make_weights_binary(ps, data.z(), g, data.x());
  QteEstimate est;
  est.tau = tau;
  est.method = Method::kTwoStepWqte;
  if (g.tag == TiltingTag::kUniform) {
    est.estimand.tag = EstimandTag::kPopulationQte;
  } else {
    est.estimand = {EstimandTag::kWqte, to_string(g), 0, 1};
  }
  const double q1 = weighted_quantile(data.y(), w.w1, tau);
  const double q0 = weighted_quantile(data.y(), w.w0, tau);
  est.arm_quantiles = std::make_pair(q0, q1);
  est.point = q1 - q0;
  return est;
}

namespace detail {

inline QteEstimate weighted_binary_qr(const Dataset& data, const WeightVector& w, double tau,
                                      const QrOptions& qr) {
  Eigen::MatrixXd design(static_cast<Eigen::Index>(data.n()), 2);
  design.col(0).setOnes();
  design.col(1) = data.z();
  QteEstimate est;
  est.tau = tau;
  const auto fit = fit_reduced(design, data.y(), w.w, tau, {"(intercept)", "z"}, {1}, qr, est.warnings);
  est.point = fit.beta[1];
  est.arm_quantiles = std::make_pair(fit.beta[0], fit.beta[0] + fit.beta[1]);
  return est;
}

}  // namespace detail

/// Weighted QR of y on (1, z) with inverse probability weights.
inline QteEstimate ipw_qr(const Dataset& data, const PropensityModel& ps, double tau, const QrOptions& qr = {}) {
  require_tau(tau);
  detail::require_binary(data, "ipw_qr");
  detail::require_scores(data, ps);
  auto est = detail::weighted_binary_qr(data, make_weights_binary(ps, data.z(), TiltingSpec::uniform()), tau, qr);
  est.method = Method::kIpwQr;
  est.estimand.tag = EstimandTag::kPopulationQte;
  return est;
}

/// Weighted QR of y on (1, z) with overlap weights |z - e|. The estimand is
/// the overlap WQTE, which equals the QTE when the caller declares a
/// homogeneous effect.
inline QteEstimate ow_qr(const Dataset& data, const PropensityModel& ps, double tau,
                         bool assume_homogeneous = false, const QrOptions& qr = {}) {
  require_tau(tau);
  detail::require_binary(data, "ow_qr");
  detail::require_scores(data, ps);
  auto est = detail::weighted_binary_qr(data, make_weights_binary(ps, data.z(), TiltingSpec::overlap()), tau, qr);
  est.method = Method::kOwQr;
  if (assume_homogeneous) {
    est.estimand.tag = EstimandTag::kPopulationQte;
  } else {
    est.estimand = {EstimandTag::kWqte, "overlap", 0, 1};
  }
  return est;
}

/// Unit-weight QR on (1, z, e) or, with the interaction, (1, z, z e, e).
/// The z coefficient is the estimate; the interaction is kept as beta2.
inline QteEstimate psreg_homogeneous(const Dataset& data, const PropensityModel& ps, double tau,
                                     bool include_interaction = false, const QrOptions& qr = {}) {
  require_tau(tau);
  detail::require_binary(data, "psreg_homogeneous");
  detail::require_scores(data, ps);
  const auto n = static_cast<Eigen::Index>(data.n());
  const Eigen::VectorXd e = ps.treated_score();
  Eigen::MatrixXd design(n, include_interaction ? 4 : 3);
  std::vector<std::string> names{"(intercept)", "z"};
  design.col(0).setOnes();
  design.col(1) = data.z();
  if (include_interaction) {
    design.col(2) = data.z().cwiseProduct(e);
    design.col(3) = e;
    names.insert(names.end(), {"z:e", "e"});
  } else {
    design.col(2) = e;
    names.emplace_back("e");
  }
  QteEstimate est;
  est.tau = tau;
  est.method = Method::kPsRegHomogeneous;
  const auto fit = detail::fit_reduced(design, data.y(), Eigen::VectorXd::Ones(n), tau, names, {1}, qr,
                                       est.warnings);
  est.point = fit.beta[1];
  if (include_interaction) est.beta2 = fit.beta[2];
  return est;
}

/// Marginalization grid. tau_k = k / (K + 1); the y grid spans
/// [min - lower_pad R, max + upper_pad R] where R is the range of y.
struct MarginalizeOptions {
  int K = 199;
  int grid_points = 401;
  double lower_pad = 0.05;
  double upper_pad = 0.25;
};

namespace detail {

/// Marginal tau-quantiles of the potential outcomes, one per arm design.
///
/// Fits the conditional quantile model at every tau_k, predicts each unit's
/// conditional quantile curve under each arm, averages the implied CDFs
/// over units on the y grid, and inverts.
inline std::vector<double> marginal_quantiles(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                              const std::vector<Eigen::MatrixXd>& arm_designs, double tau,
                                              const std::vector<std::string>& names,
                                              const MarginalizeOptions& opt, const QrOptions& qr,
                                              std::vector<std::string>& warnings,
                                              std::vector<double>* beta2_at_tau = nullptr,
                                              Eigen::Index beta2_col = -1) {
  if (opt.K < 20) throw ArgumentError("marginalization needs K >= 20");
  if (opt.grid_points < 2) throw ArgumentError("marginalization needs at least two grid points");
  const Eigen::Index n = design.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const auto kept = independent_columns(design, ones);
  for (Eigen::Index c = 0; c < design.cols(); ++c) {
    if (std::find(kept.begin(), kept.end(), c) == kept.end()) {
      warnings.push_back("dropped collinear design column '" + names[static_cast<std::size_t>(c)] + "'");
    }
  }
  const Eigen::MatrixXd xr = select_columns(design, kept);
  std::vector<Eigen::MatrixXd> arms;
  for (const auto& a : arm_designs) arms.push_back(select_columns(a, kept));

  const auto K = static_cast<Eigen::Index>(opt.K);
  Eigen::MatrixXd betas(static_cast<Eigen::Index>(kept.size()), K);
  QrOptions local = qr;
  double best_gap = std::numeric_limits<double>::infinity();
  // Fit from the middle outwards so every warm start is a neighbour.
  const Eigen::Index mid = K / 2;
  std::vector<Eigen::Index> order;
  for (Eigen::Index k = mid; k < K; ++k) order.push_back(k);
  for (Eigen::Index k = mid - 1; k >= 0; --k) order.push_back(k);
  for (Eigen::Index k : order) {
    if (k == mid - 1) local.warm_start = betas.col(mid);
    const double tk = static_cast<double>(k + 1) / static_cast<double>(K + 1);
    const auto fit = fit_weighted_qr(xr, y, ones, tk, local);
    betas.col(k) = fit.beta;
    local.warm_start = fit.beta;
    if (beta2_at_tau && beta2_col >= 0 && std::abs(tk - tau) < best_gap) {
      auto it = std::find(kept.begin(), kept.end(), beta2_col);
      if (it != kept.end()) {
        best_gap = std::abs(tk - tau);
        beta2_at_tau->assign(1, fit.beta[it - kept.begin()]);
      }
    }
  }

  const double lo = y.minCoeff();
  const double hi = y.maxCoeff();
  const double range = hi - lo;
  const double g0 = lo - opt.lower_pad * range;
  const double g1 = hi + opt.upper_pad * range;
  const double step = (g1 - g0) / static_cast<double>(opt.grid_points - 1);

  std::vector<double> out;
  for (const auto& a : arms) {
    Eigen::MatrixXd pred = a * betas;  // n x K
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(n * K));
    std::vector<double> curve(static_cast<std::size_t>(K));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < K; ++k) curve[static_cast<std::size_t>(k)] = pred(i, k);
      std::sort(curve.begin(), curve.end());  // monotone rearrangement
      pooled.insert(pooled.end(), curve.begin(), curve.end());
    }
    std::sort(pooled.begin(), pooled.end());
    const double total = static_cast<double>(pooled.size());
    const double target = tau * total * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
    double found = std::numeric_limits<double>::quiet_NaN();
    for (int g = 0; g < opt.grid_points; ++g) {
      const double yg = g + 1 == opt.grid_points ? g1 : g0 + step * g;
      const auto count = static_cast<double>(std::upper_bound(pooled.begin(), pooled.end(), yg) - pooled.begin());
      if (count >= target) {
        found = yg;
        break;
      }
    }
    if (std::isnan(found)) {
      throw InversionError("marginal CDF stays below tau = " + std::to_string(tau) +
                           " on the y grid; widen the grid (upper_pad)");
    }
    out.push_back(found);
  }
  return out;
}

}  // namespace detail

/// PS regression with the exposure x PS interaction, marginalized over the
/// empirical PS distribution.
inline QteEstimate psreg_marginalized(const Dataset& data, const PropensityModel& ps, double tau,
                                      const MarginalizeOptions& opt = {}, const QrOptions& qr = {}) {
  require_tau(tau);
  detail::require_binary(data, "psreg_marginalized");
  detail::require_scores(data, ps);
  const auto n = static_cast<Eigen::Index>(data.n());
  const Eigen::VectorXd e = ps.treated_score();
  auto build = [&](const Eigen::VectorXd& z) {
    Eigen::MatrixXd d(n, 4);
    d.col(0).setOnes();
    d.col(1) = z;
    d.col(2) = z.cwiseProduct(e);
    d.col(3) = e;
    return d;
  };
  QteEstimate est;
  est.tau = tau;
  est.method = Method::kPsRegMarginalized;
  std::vector<double> beta2;
  const auto q = detail::marginal_quantiles(build(data.z()), data.y(),
                                            {build(Eigen::VectorXd::Zero(n)), build(Eigen::VectorXd::Ones(n))},
                                            tau, {"(intercept)", "z", "z:e", "e"}, opt, qr, est.warnings,
                                            &beta2, 2);
  est.arm_quantiles = std::make_pair(q[0], q[1]);
  est.point = q[1] - q[0];
  if (!beta2.empty()) est.beta2 = beta2[0];
  return est;
}

/// Outcome model with known functional form: features(x_i, z) gives the
/// design row. Without marginalization the estimates are the coefficients
/// in `effect_columns` (one per contrast); with it (binary only) the
/// marginal quantiles under z = 0 and z = 1 are differenced.
struct TrueModelSpec {
  std::function<Eigen::RowVectorXd(const Eigen::RowVectorXd&, double)> features;
  std::vector<Eigen::Index> effect_columns{1};
  bool marginalize = false;
};

inline std::vector<QteEstimate> true_model_qr(const Dataset& data, double tau, const TrueModelSpec& spec,
                                              const MarginalizeOptions& mopt = {}, const QrOptions& qr = {}) {
  require_tau(tau);
  if (!spec.features) throw ArgumentError("true model needs a feature map");
  const auto n = static_cast<Eigen::Index>(data.n());
  auto build = [&](const Eigen::VectorXd& z) {
    const Eigen::RowVectorXd first = spec.features(data.x().row(0), z[0]);
    Eigen::MatrixXd d(n, first.size());
    d.row(0) = first;
    for (Eigen::Index i = 1; i < n; ++i) d.row(i) = spec.features(data.x().row(i), z[i]);
    return d;
  };
  const Eigen::MatrixXd design = build(data.z());
  std::vector<std::string> names;
  for (Eigen::Index c = 0; c < design.cols(); ++c) names.push_back("f" + std::to_string(c));
  std::vector<QteEstimate> out;
  if (spec.marginalize) {
    detail::require_binary(data, "marginalized true model");
    QteEstimate est;
    est.tau = tau;
    est.method = Method::kTrueModel;
    const auto q = detail::marginal_quantiles(design, data.y(),
                                              {build(Eigen::VectorXd::Zero(n)), build(Eigen::VectorXd::Ones(n))},
                                              tau, names, mopt, qr, est.warnings);
    est.arm_quantiles = std::make_pair(q[0], q[1]);
    est.point = q[1] - q[0];
    out.push_back(std::move(est));
    return out;
  }
  std::vector<std::string> warnings;
  const auto fit = detail::fit_reduced(design, data.y(), Eigen::VectorXd::Ones(n), tau, names,
                                       spec.effect_columns, qr, warnings);
  const auto levels = data.kind().is_categorical() ? detail::non_baseline_levels(data.kind().levels, 1)
                                                   : std::vector<int>{};
  for (std::size_t c = 0; c < spec.effect_columns.size(); ++c) {
    QteEstimate est;
    est.tau = tau;
    est.method = Method::kTrueModel;
    est.point = fit.beta[spec.effect_columns[c]];
    if (!levels.empty() && c < levels.size()) est.estimand = {EstimandTag::kPairwiseQte, "", levels[c], 1};
    est.warnings = warnings;
    out.push_back(std::move(est));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Categorical and continuous exposure

enum class Scheme { kPsReg, kIpw, kOw };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kPsReg:
      return "psreg";
    case Scheme::kIpw:
      return "ipw";
    case Scheme::kOw:
      return "ow";
  }
  return "unknown";
}

/// Pairwise QTEs of each level against `baseline`.
///
/// PSReg: unit-weight QR on (1, D, M, e_-baseline); `include_interaction`
/// false drops M. `marginalize` integrates the interaction model over the
/// empirical PS distribution instead of reading off D coefficients.
/// IPW/OW: weighted QR on (1, D) with generalized weights.
inline std::vector<QteEstimate> pairwise_qte(const Dataset& data, const PropensityModel& ps, double tau,
                                             Scheme scheme, int baseline = 1, bool include_interaction = false,
                                             bool marginalize = false, const MarginalizeOptions& mopt = {},
                                             const QrOptions& qr = {}) {
  require_tau(tau);
  if (!data.kind().is_categorical()) throw ArgumentError("pairwise_qte needs a categorical exposure");
  detail::require_scores(data, ps);
  const int J = data.kind().levels;
  if (baseline < 1 || baseline > J) throw ArgumentError("baseline level out of range");
  if (ps.scores.cols() != J) throw ArgumentError("propensity model has the wrong number of levels");
  const auto labels = data.labels();
  const auto others = detail::non_baseline_levels(J, baseline);
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto m = static_cast<Eigen::Index>(others.size());

  auto build = [&](const std::vector<int>& lab, bool with_m, bool with_e) {
    const Eigen::Index cols = 1 + m + (with_m ? m * m : 0) + (with_e ? m : 0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, cols);
    d.col(0).setOnes();
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = lab[static_cast<std::size_t>(i)];
      for (Eigen::Index a = 0; a < m; ++a) {
        const double da = l == others[static_cast<std::size_t>(a)] ? 1.0 : 0.0;
        d(i, 1 + a) = da;
        if (with_m) {
          for (Eigen::Index b = 0; b < m; ++b) {
            d(i, 1 + m + a * m + b) = da * ps.scores(i, others[static_cast<std::size_t>(b)] - 1);
          }
        }
      }
      if (with_e) {
        const Eigen::Index off = 1 + m + (with_m ? m * m : 0);
        for (Eigen::Index b = 0; b < m; ++b) d(i, off + b) = ps.scores(i, others[static_cast<std::size_t>(b)] - 1);
      }
    }
    return d;
  };
  std::vector<std::string> names{"(intercept)"};
  for (int l : others) names.push_back("D" + std::to_string(l));
  const bool with_m = scheme == Scheme::kPsReg && (include_interaction || marginalize);
  if (with_m) {
    for (int a : others) {
      for (int b : others) names.push_back("D" + std::to_string(a) + ":e" + std::to_string(b));
    }
  }
  if (scheme == Scheme::kPsReg) {
    for (int b : others) names.push_back("e" + std::to_string(b));
  }

  std::vector<QteEstimate> out;
  std::vector<std::string> warnings;
  auto emit = [&](int level, double point, Method method) {
    QteEstimate est;
    est.tau = tau;
    est.method = method;
    est.estimand = {EstimandTag::kPairwiseQte, "", level, baseline};
    est.point = point;
    est.warnings = warnings;
    out.push_back(std::move(est));
  };

  if (scheme == Scheme::kPsReg && marginalize) {
    std::vector<Eigen::MatrixXd> arms;
    arms.push_back(build(std::vector<int>(static_cast<std::size_t>(n), baseline), true, true));
    for (int l : others) arms.push_back(build(std::vector<int>(static_cast<std::size_t>(n), l), true, true));
    const auto q = detail::marginal_quantiles(build(labels, true, true), data.y(), arms, tau, names, mopt, qr,
                                              warnings);
    for (std::size_t a = 0; a < others.size(); ++a) {
      emit(others[a], q[a + 1] - q[0], Method::kPsRegMarginalized);
      out.back().arm_quantiles = std::make_pair(q[0], q[a + 1]);
    }
    return out;
  }

  Eigen::VectorXd w;
  Method method = Method::kPsRegHomogeneous;
  if (scheme == Scheme::kPsReg) {
    w = Eigen::VectorXd::Ones(n);
  } else {
    w = make_weights_categorical(ps, labels,
                                 scheme == Scheme::kIpw ? CategoricalScheme::kGeneralizedIpw
                                                        : CategoricalScheme::kGeneralizedOw)
            .w;
    method = scheme == Scheme::kIpw ? Method::kIpwQr : Method::kOwQr;
  }
  std::vector<Eigen::Index> required;
  for (Eigen::Index a = 0; a < m; ++a) required.push_back(1 + a);
  const auto fit = detail::fit_reduced(build(labels, with_m, scheme == Scheme::kPsReg), data.y(), w, tau, names,
                                       required, qr, warnings);
  for (Eigen::Index a = 0; a < m; ++a) {
    emit(others[static_cast<std::size_t>(a)], fit.beta[1 + a], method);
    if (scheme != Scheme::kPsReg) out.back().arm_quantiles = std::make_pair(fit.beta[0], fit.beta[0] + fit.beta[1 + a]);
  }
  return out;
}

/// Dose-response slope of a continuous exposure: weighted QR of y on (1, z)
/// with weights from the bin each unit falls in, or PS regression with the
/// bin scores e_2..e_m as covariates.
inline QteEstimate continuous_qte(const Dataset& data, const PropensityModel& ps, double tau, Scheme scheme,
                                  const QrOptions& qr = {}) {
  require_tau(tau);
  if (!data.kind().is_continuous()) throw ArgumentError("continuous_qte needs a continuous exposure");
  detail::require_scores(data, ps);
  if (ps.cut_points.size() < 3) throw ArgumentError("continuous_qte needs a binned propensity model");
  const std::vector<double> z(data.z().data(), data.z().data() + data.z().size());
  const auto labels = assign_bins(z, ps.cut_points);
  const auto n = static_cast<Eigen::Index>(data.n());
  const Eigen::Index m = ps.scores.cols();
  QteEstimate est;
  est.tau = tau;
  Eigen::MatrixXd design;
  std::vector<std::string> names{"(intercept)", "z"};
  Eigen::VectorXd w;
  if (scheme == Scheme::kPsReg) {
    design.resize(n, 2 + m - 1);
    design.col(0).setOnes();
    design.col(1) = data.z();
    design.rightCols(m - 1) = ps.scores.rightCols(m - 1);
    for (Eigen::Index j = 2; j <= m; ++j) names.push_back("e" + std::to_string(j));
    w = Eigen::VectorXd::Ones(n);
    est.method = Method::kPsRegHomogeneous;
  } else {
    design.resize(n, 2);
    design.col(0).setOnes();
    design.col(1) = data.z();
    w.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      const double inv = 1.0 / ps.scores(i, l - 1);
      w[i] = scheme == Scheme::kIpw ? inv : inv / ps.scores.row(i).cwiseInverse().sum();
    }
    est.method = scheme == Scheme::kIpw ? Method::kIpwQr : Method::kOwQr;
  }
  const auto fit = detail::fit_reduced(design, data.y(), w, tau, names, {1}, qr, est.warnings);
  est.point = fit.beta[1];
  return est;
}

/// Unit-weight QR of y on the exposure alone: (1, z) for binary and
/// continuous, (1, D) for categorical.
inline std::vector<QteEstimate> naive_qr(const Dataset& data, double tau, const QrOptions& qr = {}) {
  require_tau(tau);
  const auto n = static_cast<Eigen::Index>(data.n());
  std::vector<QteEstimate> out;
  std::vector<std::string> warnings;
  if (data.kind().is_categorical()) {
    const int J = data.kind().levels;
    const auto labels = data.labels();
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, J);
    design.col(0).setOnes();
    std::vector<std::string> names{"(intercept)"};
    std::vector<Eigen::Index> required;
    for (int j = 2; j <= J; ++j) {
      names.push_back("D" + std::to_string(j));
      required.push_back(j - 1);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      if (l >= 2) design(i, l - 1) = 1.0;
    }
    const auto fit = detail::fit_reduced(design, data.y(), Eigen::VectorXd::Ones(n), tau, names, required, qr,
                                         warnings);
    for (int j = 2; j <= J; ++j) {
      QteEstimate est;
      est.tau = tau;
      est.method = Method::kNaive;
      est.estimand = {EstimandTag::kPairwiseQte, "", j, 1};
      est.point = fit.beta[j - 1];
      est.warnings = warnings;
      out.push_back(std::move(est));
    }
    return out;
  }
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = data.z();
  QteEstimate est;
  est.tau = tau;
  est.method = Method::kNaive;
  const auto fit = detail::fit_reduced(design, data.y(), Eigen::VectorXd::Ones(n), tau, {"(intercept)", "z"}, {1},
                                       qr, est.warnings);
  est.point = fit.beta[1];
  if (data.kind().is_binary()) est.arm_quantiles = std::make_pair(fit.beta[0], fit.beta[0] + fit.beta[1]);
  out.push_back(std::move(est));
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch

/// One estimator configuration, applicable to any exposure kind where the
/// method is defined.
struct MethodSpec {
  Method method = Method::kIpwQr;
  TiltingSpec tilting;                 // two-step only
  bool assume_homogeneous = true;      // estimand label for OW
  bool interaction = false;            // PSReg homogeneous: add z x e terms
  MarginalizeOptions marginalize;
  std::optional<TrueModelSpec> true_model;
  int baseline = 1;
  QrOptions qr;
};

inline std::vector<QteEstimate> estimate(const Dataset& data, const PropensityModel& ps, double tau,
                                         const MethodSpec& spec) {
  const auto& kind = data.kind();
  if (spec.method == Method::kNaive) return naive_qr(data, tau, spec.qr);
  if (spec.method == Method::kTrueModel) {
    if (!spec.true_model) throw ArgumentError("true_model needs a known outcome model");
    return true_model_qr(data, tau, *spec.true_model, spec.marginalize, spec.qr);
  }
  if (kind.is_binary()) {
    switch (spec.method) {
      case Method::kTwoStepWqte:
        return {wqte_two_step(data, ps, spec.tilting, tau)};
      case Method::kIpwQr:
        return {ipw_qr(data, ps, tau, spec.qr)};
      case Method::kOwQr:
        return {ow_qr(data, ps, tau, spec.assume_homogeneous, spec.qr)};
      case Method::kPsRegHomogeneous:
        return {psreg_homogeneous(data, ps, tau, spec.interaction, spec.qr)};
      case Method::kPsRegMarginalized:
        return {psreg_marginalized(data, ps, tau, spec.marginalize, spec.qr)};
      default:
        break;
    }
  } else if (kind.is_categorical()) {
    switch (spec.method) {
      case Method::kTwoStepWqte:
      case Method::kIpwQr:
      case Method::kOwQr: {
        Scheme scheme = spec.method == Method::kOwQr ? Scheme::kOw : Scheme::kIpw;
        if (spec.method == Method::kTwoStepWqte) {
          if (spec.tilting.tag == TiltingTag::kOverlap) {
            scheme = Scheme::kOw;
          } else if (spec.tilting.tag != TiltingTag::kUniform) {
            throw ArgumentError("categorical two-step estimates support uniform or overlap tilting only");
          }
        }
        auto out = pairwise_qte(data, ps, tau, scheme, spec.baseline, false, false, {}, spec.qr);
        for (auto& e : out) {
          if (spec.method == Method::kTwoStepWqte) e.method = Method::kTwoStepWqte;
          if (scheme == Scheme::kOw && !spec.assume_homogeneous) e.estimand.tilting = "overlap";
        }
        return out;
      }
      case Method::kPsRegHomogeneous:
        return pairwise_qte(data, ps, tau, Scheme::kPsReg, spec.baseline, spec.interaction, false, {}, spec.qr);
      case Method::kPsRegMarginalized:
        return pairwise_qte(data, ps, tau, Scheme::kPsReg, spec.baseline, true, true, spec.marginalize, spec.qr);
      default:
        break;
    }
  } else {
    switch (spec.method) {
      case Method::kIpwQr:
        return {continuous_qte(data, ps, tau, Scheme::kIpw, spec.qr)};
      case Method::kOwQr:
        return {continuous_qte(data, ps, tau, Scheme::kOw, spec.qr)};
      case Method::kPsRegHomogeneous:
        return {continuous_qte(data, ps, tau, Scheme::kPsReg, spec.qr)};
      default:
        break;
    }
  }
  throw ArgumentError("method " + to_string(spec.method) + " is not defined for " + to_string(kind) + " exposure");
}

}  // namespace wqte

#endif  // WQTE_ESTIMATORS_HPP
