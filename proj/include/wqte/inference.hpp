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

#ifndef WQTE_INFERENCE_HPP
#define WQTE_INFERENCE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "wqte/balance.hpp"
#include "wqte/data.hpp"
#include "wqte/error.hpp"
#include "wqte/estimators.hpp"
#include "wqte/propensity.hpp"
#include "wqte/quantreg.hpp"
#include "wqte/rng.hpp"

namespace wqte {

// ---------------------------------------------------------------------------
// Nonparametric bootstrap

enum class CiMethod { kPercentile, kNormal };

inline std::string to_string(CiMethod m) { return m == CiMethod::kPercentile ? "percentile" : "normal"; }

/// Statistic re-evaluated on each resample. It must refit anything that
/// depends on the data (the propensity model included) and be safe to call
/// from several threads at once.
using Statistic = std::function<std::vector<double>(const Dataset&)>;

struct BootstrapOptions {
  int B = 500;
  double level = 0.95;
  std::uint64_t seed = 0;
  CiMethod ci = CiMethod::kPercentile;
  int threads = 1;
  double max_failure_rate = 0.05;
};

struct BootstrapResult {
  std::vector<double> estimate;  // statistic on the full sample
  std::vector<double> se;
  std::vector<ConfidenceInterval> ci;
  int B = 0;
  int failures = 0;
  std::vector<std::vector<double>> draws;  // successful resamples, in index order
};

namespace detail {

inline double normal_quantile(double p) {
  // Bisection on normal_cdf; only called a handful of times per run.
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Linear interpolation between order statistics (sorted input).
inline double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

/// Runs job(i) for i in [0, count) on up to `threads` workers.
template <class Job>
void parallel_for(std::size_t count, int threads, Job&& job) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Row indices of bootstrap resample `b`.
inline std::vector<std::size_t> resample_rows(std::size_t n, std::uint64_t seed, std::size_t b) {
  auto rng = make_engine(seed, b + 1);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = pick(rng);
  return rows;
}

/// Resamples rows with replacement B times and summarizes the statistic.
///
/// Resample b draws from substream b + 1 of `seed`, so the result does not
/// depend on `threads`. A resample whose statistic throws a library error
/// (an empty arm, a separated PS fit) is dropped and counted.
inline BootstrapResult bootstrap(const Dataset& data, const Statistic& statistic, const BootstrapOptions& opt) {
  if (opt.B < 50) throw ArgumentError("bootstrap needs B >= 50");
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw ArgumentError("confidence level must be in (0,1)");
  BootstrapResult out;
  out.B = opt.B;
  out.estimate = statistic(data);
  const std::size_t k = out.estimate.size();
  const auto B = static_cast<std::size_t>(opt.B);
  std::vector<std::optional<std::vector<double>>> slots(B);
  detail::parallel_for(B, opt.threads, [&](std::size_t b) {
    const auto rows = resample_rows(data.n(), opt.seed, b);
    try {
      auto value = statistic(data.subset(rows));
      if (value.size() == k && std::all_of(value.begin(), value.end(), [](double v) { return std::isfinite(v); })) {
        slots[b] = std::move(value);
      }
    } catch (const Error&) {
    }
  });
  for (auto& s : slots) {
    if (s) {
      out.draws.push_back(std::move(*s));
    } else {
      ++out.failures;
    }
  }
  if (static_cast<double>(out.failures) > opt.max_failure_rate * static_cast<double>(opt.B)) {
    throw InstabilityError(std::to_string(out.failures) + " of " + std::to_string(opt.B) +
                           " bootstrap resamples failed");
  }
  const double alpha = 1.0 - opt.level;
  const double zcrit = detail::normal_quantile(1.0 - alpha / 2.0);
  const double m = static_cast<double>(out.draws.size());
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> col;
    col.reserve(out.draws.size());
    for (const auto& d : out.draws) col.push_back(d[c]);
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double se = m > 1.0 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    out.se.push_back(se);
    ConfidenceInterval ci;
    ci.level = opt.level;
    ci.method = to_string(opt.ci);
    if (opt.ci == CiMethod::kPercentile) {
      std::sort(col.begin(), col.end());
      ci.lo = detail::interpolated_quantile(col, alpha / 2.0);
      ci.hi = detail::interpolated_quantile(col, 1.0 - alpha / 2.0);
    } else {
      ci.lo = out.estimate[c] - zcrit * se;
      ci.hi = out.estimate[c] + zcrit * se;
    }
    out.ci.push_back(ci);
  }
  return out;
}

/// Copies bootstrap SE and CI onto estimate records, in order.
inline void attach(std::vector<QteEstimate>& estimates, const BootstrapResult& boot) {
  if (boot.se.size() != estimates.size()) throw ArgumentError("bootstrap result does not match the estimates");
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    estimates[i].se = boot.se[i];
    estimates[i].ci = boot.ci[i];
  }
}

// ---------------------------------------------------------------------------
// Plug-in asymptotic variance for the two-step binary estimator

/// kEfficient keeps the E[D_j | X, Z = j] projection terms of psi_j.
/// kKnownPs drops them, giving the influence function of the weighted
/// quantile when e(x) is known.
enum class InfluenceForm { kEfficient, kKnownPs };

struct BandwidthSpec {
  enum class Rule { kSilverman, kFixed };
  Rule rule = Rule::kSilverman;
  double h = 0.0;  // used when rule == kFixed
};

struct VarianceComponents {
  double q0 = 0.0;
  double q1 = 0.0;
  double density_terms[2] = {0.0, 0.0};  // E[f_{Y(j)|X}(q_j | X) g(X)], j = 0, 1
  Eigen::VectorXd psi0;
  Eigen::VectorXd psi1;
  double v_tau = 0.0;
  double se = 0.0;
  double bandwidth[2] = {0.0, 0.0};
};

inline nlohmann::json to_json(const VarianceComponents& v) {
  return {{"q0", v.q0},
          {"q1", v.q1},
          {"density_terms", {v.density_terms[0], v.density_terms[1]}},
          {"bandwidth", {v.bandwidth[0], v.bandwidth[1]}},
          {"v_tau", v.v_tau},
          {"se", v.se}};
}

namespace detail {

/// Silverman's rule on a weighted sample; m is the Kish effective size.
inline double silverman_bandwidth(const std::vector<double>& y, const std::vector<double>& w) {
  double sw = 0.0, sw2 = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sw += w[i];
    sw2 += w[i] * w[i];
    mean += w[i] * y[i];
  }
  mean /= sw;
  double var = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) var += w[i] * (y[i] - mean) * (y[i] - mean);
  const double sd = std::sqrt(var / sw);
  const double iqr = weighted_quantile(y, w, 0.75) - weighted_quantile(y, w, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double ess = sw * sw / sw2;
  return 0.9 * spread * std::pow(ess, -0.2);
}

inline double gaussian_kde(const std::vector<double>& y, const std::vector<double>& w, double at, double h) {
  double sw = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double u = (at - y[i]) / h;
    acc += w[i] * std::exp(-0.5 * u * u);
    sw += w[i];
  }
  return acc / (sw * h * std::sqrt(2.0 * std::numbers::pi));
}

/// P(Y <= q | X, Z = arm) from a main-effects logistic fit within the arm,
/// evaluated at every row.
inline Eigen::VectorXd within_arm_cdf(const Dataset& data, double arm, double q) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (data.z()[static_cast<Eigen::Index>(i)] == arm) rows.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd xa(m, data.x().cols());
  Eigen::VectorXd ind(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto i = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]);
    xa.row(r) = data.x().row(i);
    ind[r] = data.y()[i] <= q ? 1.0 : 0.0;
  }
  const auto n = static_cast<Eigen::Index>(data.n());
  if (ind.sum() == 0.0 || ind.sum() == static_cast<double>(m) || data.x().cols() == 0) {
    return Eigen::VectorXd::Constant(n, ind.mean());
  }
  GlmOptions glm;
  glm.clip_lo = 1e-12;
  glm.clip_hi = 1.0 - 1e-12;
  PropensityModel fit;
  try {
    fit = fit_logistic(xa, ind, glm);
  } catch (const SeparationError&) {
    glm.ridge = 1.0;
    fit = fit_logistic(xa, ind, glm);
  }
  return raw_scores(fit, data.x()).col(1);
}

}  // namespace detail

/// Plug-in estimate of the asymptotic variance of the two-step estimator
/// with tilting g, from the influence functions psi_0, psi_1.
///
/// The density terms are mean(g) times a Gaussian kernel estimate of the
/// tilted-population density of Y(j) at q_j, using arm-j outcomes weighted
/// by g/e (arm 1) or g/(1-e) (arm 0).
inline VarianceComponents plugin_variance(const Dataset& data, const PropensityModel& ps, const TiltingSpec& g,
                                          const QteEstimate& two_step, double tau,
                                          const BandwidthSpec& bw = {},
                                          InfluenceForm form = InfluenceForm::kEfficient) {
  require_tau(tau);
  detail::require_binary(data, "plugin_variance");
  detail::require_scores(data, ps);
  if (!two_step.arm_quantiles) throw ArgumentError("plugin_variance needs the two-step arm quantiles");
  if (bw.rule == BandwidthSpec::Rule::kFixed && !(bw.h > 0.0)) throw ArgumentError("bandwidth must be positive");
  VarianceComponents out;
  out.q0 = two_step.arm_quantiles->first;
  out.q1 = two_step.arm_quantiles->second;
  const auto n = static_cast<Eigen::Index>(data.n());
  const Eigen::VectorXd e = ps.treated_score();
  const Eigen::VectorXd gv = tilting_values(g, e, data.x());
  const Eigen::VectorXd& y = data.y();
  const Eigen::VectorXd& z = data.z();

  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd m0 = Eigen::VectorXd::Zero(n);
  if (form == InfluenceForm::kEfficient) {
    m1 = detail::within_arm_cdf(data, 1.0, out.q1).array() - tau;
    m0 = detail::within_arm_cdf(data, 0.0, out.q0).array() - tau;
  }
  out.psi1.resize(n);
  out.psi0.resize(n);
  std::vector<double> y1, w1, y0, w0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d1 = (y[i] <= out.q1 ? 1.0 : 0.0) - tau;
    const double d0 = (y[i] <= out.q0 ? 1.0 : 0.0) - tau;
    out.psi1[i] = gv[i] * z[i] / e[i] * d1 - gv[i] * (z[i] - e[i]) / e[i] * m1[i];
    out.psi0[i] = gv[i] * (1.0 - z[i]) / (1.0 - e[i]) * d0 + gv[i] * (z[i] - e[i]) / (1.0 - e[i]) * m0[i];
    if (z[i] == 1.0) {
      y1.push_back(y[i]);
      w1.push_back(gv[i] / e[i]);
    } else {
      y0.push_back(y[i]);
      w0.push_back(gv[i] / (1.0 - e[i]));
    }
  }
  const double gbar = gv.mean();
  const std::vector<double>* ys[2] = {&y0, &y1};
  const std::vector<double>* ws[2] = {&w0, &w1};
  const double qs[2] = {out.q0, out.q1};
  for (int j = 0; j < 2; ++j) {
    const double h = bw.rule == BandwidthSpec::Rule::kFixed ? bw.h : detail::silverman_bandwidth(*ys[j], *ws[j]);
    out.bandwidth[j] = h;
    const double f = h > 0.0 ? detail::gaussian_kde(*ys[j], *ws[j], qs[j], h) : 0.0;
    out.density_terms[j] = gbar * f;
    if (!(out.density_terms[j] > 0.0) || !std::isfinite(out.density_terms[j])) {
      throw VarianceUndefinedError("density estimate at the arm-" + std::to_string(j) +
                                   " quantile is zero; use bootstrap standard errors instead");
    }
  }
  double v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = out.psi0[i] / out.density_terms[0] - out.psi1[i] / out.density_terms[1];
    v += c * c;
  }
  out.v_tau = v / static_cast<double>(n);
  out.se = std::sqrt(out.v_tau / static_cast<double>(n));
  return out;
}

/// Normal-approximation CI around the point from a plug-in SE.
inline ConfidenceInterval plugin_interval(double point, double se, double level = 0.95) {
  const double zc = detail::normal_quantile(1.0 - (1.0 - level) / 2.0);
  return {point - zc * se, point + zc * se, level, "plugin"};
}

}  // namespace wqte

#endif  // WQTE_INFERENCE_HPP
