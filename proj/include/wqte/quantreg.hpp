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

#ifndef WQTE_QUANTREG_HPP
#define WQTE_QUANTREG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wqte/error.hpp"

namespace wqte {

/// rho_tau(u) = u (tau - 1{u < 0}).
inline double check_loss(double u, double tau) {
  require_tau(tau);
  return u >= 0.0 ? u * tau : u * (tau - 1.0);
}

namespace detail {

inline double rho(double u, double tau) noexcept {
  return u >= 0.0 ? u * tau : u * (tau - 1.0);
}

inline void check_weights(std::span<const double> w) {
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ArgumentError("weights must be finite and non-negative");
    }
    total += v;
  }
  if (!(total > 0.0)) throw DegenerateWeightsError("all weights are zero");
}

}  // namespace detail

/// Smallest order statistic whose normalized cumulative weight reaches tau.
/// This minimizes sum_i w_i rho_tau(y_i - q); when the minimizer is an
/// interval the left endpoint is returned.
inline double weighted_quantile(std::span<const double> y, std::span<const double> w,
                                double tau) {
  require_tau(tau);
  if (y.empty()) throw ArgumentError("weighted_quantile: empty input");
  if (y.size() != w.size()) throw ArgumentError("weighted_quantile: length mismatch");
  detail::check_weights(w);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(y.size());
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (w[i] > 0.0) {
      pts.emplace_back(y[i], w[i]);
      total += w[i];
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const double target = tau * total * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
  double cum = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    cum += pts[k].second;
    // Equal y values are one support point; the cumulative weight must
    // include all of them before comparing.
    if (k + 1 < pts.size() && pts[k + 1].first == pts[k].first) continue;
    if (cum >= target) return pts[k].first;
  }
  return pts.back().first;
}

inline double weighted_quantile(const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                                double tau) {
  return weighted_quantile(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
                           std::span<const double>(w.data(), static_cast<std::size_t>(w.size())),
                           tau);
}

/// Unit-weight quantile (inf definition): the ceil(tau n)-th order statistic.
inline double unweighted_quantile(std::span<const double> y, double tau) {
  require_tau(tau);
  if (y.empty()) throw ArgumentError("weighted_quantile: empty input");
  for (double v : y) {
    if (!std::isfinite(v)) throw ArgumentError("quantile input must be finite");
  }
  const double n = static_cast<double>(y.size());
  const double target = tau * n * (1.0 - 8.0 * std::numeric_limits<double>::epsilon());
  auto k = static_cast<std::size_t>(std::ceil(target));
  k = std::clamp<std::size_t>(k, 1, y.size());
  std::vector<double> v(y.begin(), y.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return v[k - 1];
}

inline double unweighted_quantile(const Eigen::VectorXd& y, double tau) {
  return unweighted_quantile(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
                             tau);
}

struct QuantileFit {
  double tau = 0.5;
  Eigen::VectorXd beta;   // intercept first when the design has one
  double objective = 0.0; // weighted check loss at beta
  std::size_t n_effective = 0;
  bool converged = false;
  int smoothing_iterations = 0;
  int exchange_iterations = 0;
  std::vector<Eigen::Index> basis;  // rows (of the input) interpolated exactly
};

/// Knobs for fit_weighted_qr.
///
/// The smoothing phase only has to land near the optimal vertex; the exchange
/// phase then certifies exactness. Annealing further (eps_end down to 1e-8)
/// gives the same answer at several times the cost.
struct QrOptions {
  int max_iter_per_level = 500;
  double eps_start = 1e-2;   // relative to scale(y)
  double eps_end = 1e-2;
  double anneal_factor = 0.1;
  double smoothing_tol = 1e-3;  // relative step size ending a level
  /// Solve intercept + disjoint 0/1 indicator designs cell by cell.
  bool cell_decomposition = true;
  int max_exchanges = 0;        // 0 = 50 * n + 100
  /// Skip smoothing and start the exchange from this coefficient vector
  /// (e.g. the fit at a neighbouring tau).
  std::optional<Eigen::VectorXd> warm_start;
};

namespace detail {

inline double weighted_check_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& w,
                                       const Eigen::VectorXd& beta, double tau) {
  const Eigen::VectorXd r = y - x * beta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) total += w[i] * rho(r[i], tau);
  return total;
}

inline double robust_scale(const Eigen::VectorXd& y) {
  const double mean = y.mean();
  const double sd = std::sqrt((y.array() - mean).square().sum() /
                              std::max<double>(1.0, static_cast<double>(y.size() - 1)));
  return sd > 0.0 ? sd : std::max(1.0, std::abs(mean));
}

/// MM iterations on the eps-smoothed check loss, eps annealed geometrically.
inline Eigen::VectorXd smoothed_start(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                      const Eigen::VectorXd& w, double tau,
                                      const QrOptions& opt, int& iterations) {
  const Eigen::Index k = x.cols();
  const double scale = robust_scale(y);
  Eigen::VectorXd beta =
      (x.transpose() * w.asDiagonal() * x).ldlt().solve(x.transpose() * w.cwiseProduct(y));
  const Eigen::VectorXd lin = (2.0 * tau - 1.0) * (x.transpose() * w);
  Eigen::VectorXd v(y.size());
  iterations = 0;
  for (double eps = opt.eps_start * scale; eps >= opt.eps_end * scale * 0.999;
       eps *= opt.anneal_factor) {
    for (int it = 0; it < opt.max_iter_per_level; ++it) {
      ++iterations;
      const Eigen::VectorXd r = y - x * beta;
      for (Eigen::Index i = 0; i < r.size(); ++i) v[i] = w[i] / std::max(std::abs(r[i]), eps);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
      h.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose() * v.cwiseSqrt().asDiagonal());
      const Eigen::VectorXd rhs = x.transpose() * v.cwiseProduct(y) + lin;
      Eigen::VectorXd next = h.selfadjointView<Eigen::Lower>().ldlt().solve(rhs);
      if (!next.allFinite()) break;
      const double step = (next - beta).norm();
      beta = std::move(next);
      if (step <= opt.smoothing_tol * (1.0 + beta.norm())) break;
    }
    if (opt.anneal_factor >= 1.0) break;
  }
  return beta;
}

/// Greedy choice of k linearly independent rows, preferring small |r|.
inline std::vector<Eigen::Index> initial_basis(const Eigen::MatrixXd& x,
                                               const Eigen::VectorXd& r) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(r[a]) < std::abs(r[b]);
  });
  std::vector<Eigen::Index> basis;
  Eigen::MatrixXd q(k, k);  // orthonormal rows accepted so far
  Eigen::Index accepted = 0;
  for (Eigen::Index i : order) {
    Eigen::VectorXd v = x.row(i).transpose();
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < accepted; ++j) v -= q.row(j).dot(v) * q.row(j).transpose();
    }
    const double norm = v.norm();
    if (norm > 1e-9 * norm0) {
      q.row(accepted++) = (v / norm).transpose();
      basis.push_back(i);
      if (accepted == k) break;
    }
  }
  return basis;
}

/// Simplex-style exchange over interpolation bases. Each step leaves the
/// current vertex along the edge with the most negative normalized
/// directional derivative and walks to the minimum on that edge, so the
/// objective strictly decreases and the loop ends at an exact optimum.
inline void exchange_polish(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, double tau,
                            std::vector<Eigen::Index> basis, int max_iter,
                            QuantileFit& fit) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  const double ztol = 1e-12 * (1.0 + y.cwiseAbs().maxCoeff());
  std::vector<char> in_basis(static_cast<std::size_t>(n), 0);
  for (auto b : basis) in_basis[static_cast<std::size_t>(b)] = 1;

  Eigen::MatrixXd xb(k, k);
  Eigen::VectorXd yb(k);
  Eigen::VectorXd beta;
  Eigen::VectorXd r(n);
  Eigen::VectorXd psi_w(n);
  std::vector<std::pair<double, Eigen::Index>> breaks;
  breaks.reserve(static_cast<std::size_t>(n));
  double objective = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> best_basis = basis;
  int stalled = 0;  // consecutive pivots without strict decrease
  fit.converged = false;
  fit.exchange_iterations = 0;

  for (int iter = 0; iter <= max_iter; ++iter) {
    for (Eigen::Index j = 0; j < k; ++j) {
      xb.row(j) = x.row(basis[static_cast<std::size_t>(j)]);
      yb[j] = y[basis[static_cast<std::size_t>(j)]];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(xb);
    const Eigen::MatrixXd binv = lu.inverse();
    Eigen::VectorXd candidate = binv * yb;
    r = y - x * candidate;
    double cand_obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_basis[static_cast<std::size_t>(i)]) r[i] = 0.0;
      cand_obj += w[i] * rho(r[i], tau);
    }
    if (!(cand_obj < objective + 1e-13 * (1.0 + std::abs(objective))) && iter > 0) {
      // Rounding stalled progress; keep the previous vertex.
      fit.converged = true;
      break;
    }
    stalled = cand_obj < objective - 1e-13 * (1.0 + std::abs(objective)) ? 0 : stalled + 1;
    beta = std::move(candidate);
    objective = cand_obj;
    best_basis = basis;
    fit.exchange_iterations = iter;
    if (iter == max_iter) break;

    // a(i, h) = x_i . delta_h where X_B delta_h = e_h.
    const Eigen::MatrixXd a = x * binv;
    std::vector<Eigen::Index> zeros;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_basis[static_cast<std::size_t>(i)]) {
        psi_w[i] = 0.0;
      } else if (std::abs(r[i]) <= ztol) {
        psi_w[i] = 0.0;
        zeros.push_back(i);
      } else {
        psi_w[i] = w[i] * (r[i] < 0.0 ? tau - 1.0 : tau);
      }
    }
    const Eigen::VectorXd g = a.transpose() * psi_w;
    const Eigen::VectorXd spread = a.cwiseAbs().transpose() * w;

    double best = 0.0;
    Eigen::Index best_h = -1;
    double best_sign = 0.0;
    double best_slope = 0.0;
    for (Eigen::Index h = 0; h < k; ++h) {
      const double wh = w[basis[static_cast<std::size_t>(h)]];
      for (double s : {1.0, -1.0}) {
        // Moving along s * delta_h: residual i changes by -s * a(i, h).
        double slope = -s * g[h] + wh * (s > 0 ? 1.0 - tau : tau);
        for (auto i : zeros) slope += w[i] * rho(-s * a(i, h), tau);
        const double norm = spread[h] > 0.0 ? slope / spread[h] : 0.0;
        // Past a run of degenerate pivots take the first improving edge by
        // row index (Bland) so the walk cannot cycle.
        const bool bland = stalled > 2 * k;
        if (bland && norm < -1e-12 &&
            (best_h < 0 || basis[static_cast<std::size_t>(h)] < basis[static_cast<std::size_t>(best_h)])) {
          best = norm;
          best_h = h;
          best_sign = s;
          best_slope = slope;
        } else if (!bland && norm < best) {
          best = norm;
          best_h = h;
          best_sign = s;
          best_slope = slope;
        }
      }
    }
    if (best_h < 0 || best > -1e-12) {
      fit.converged = true;
      break;
    }

    breaks.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_basis[static_cast<std::size_t>(i)] || psi_w[i] == 0.0) continue;
      const double ai = best_sign * a(i, best_h);
      if (ai == 0.0) continue;
      const double t = r[i] / ai;
      if (t > 0.0) breaks.emplace_back(t, i);
    }
    std::sort(breaks.begin(), breaks.end());
    double slope = best_slope;
    Eigen::Index entering = -1;
    for (const auto& [t, i] : breaks) {
      slope += w[i] * std::abs(a(i, best_h));
      if (slope >= 0.0) {
        entering = i;
        break;
      }
    }
    if (entering < 0) {
      if (breaks.empty()) break;  // unbounded direction; cannot happen at full rank
      entering = breaks.back().second;
    }
    const Eigen::Index leaving = basis[static_cast<std::size_t>(best_h)];
    in_basis[static_cast<std::size_t>(leaving)] = 0;
    in_basis[static_cast<std::size_t>(entering)] = 1;
    basis[static_cast<std::size_t>(best_h)] = entering;
  }
  // The final loop iteration may have swapped the basis without evaluating
  // it; beta/objective always describe the best vertex evaluated.
  fit.beta = beta;
  fit.objective = objective;
  fit.basis = std::move(best_basis);
}

}  // namespace detail

/// Weighted linear quantile regression:
///   argmin_beta sum_i w_i rho_tau(y_i - x_i' beta).
///
/// Zero-weight rows are dropped first. The returned beta is an exact vertex
/// optimum of the linear program (k rows interpolated) unless `converged` is
/// false, in which case it is the best vertex found.
inline QuantileFit fit_weighted_qr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& w, double tau,
                                   const QrOptions& options = {}) {
  require_tau(tau);
  if (x.rows() != y.size() || w.size() != y.size()) {
    throw ArgumentError("fit_weighted_qr: dimension mismatch");
  }
  if (x.cols() == 0) throw ArgumentError("fit_weighted_qr: empty design");
  detail::check_weights(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
  if (!x.allFinite() || !y.allFinite()) throw ArgumentError("fit_weighted_qr: non-finite input");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) keep.push_back(i);
  }
  const Eigen::Index k = x.cols();
  if (static_cast<Eigen::Index>(keep.size()) <= k) {
    throw SingularDesignError("fit_weighted_qr: need more positive-weight rows than columns");
  }
  // Identical (x, y) rows (bootstrap resamples) are merged into one row
  // carrying the summed weight. The LP is unchanged but the exchange no
  // longer meets the ties that make it cycle.
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    if (y[a] != y[b]) return y[a] < y[b];
    for (Eigen::Index c = 0; c < k; ++c) {
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    }
    return a < b;
  };
  auto row_equal = [&](Eigen::Index a, Eigen::Index b) {
    return y[a] == y[b] && (x.row(a).array() == x.row(b).array()).all();
  };
  std::vector<Eigen::Index> order = keep;
  std::sort(order.begin(), order.end(), row_less);
  std::vector<Eigen::Index> merged;
  std::vector<double> merged_w;
  for (Eigen::Index i : order) {
    if (!merged.empty() && row_equal(merged.back(), i)) {
      merged_w.back() += w[i];
    } else {
      merged.push_back(i);
      merged_w.push_back(w[i]);
    }
  }
  if (merged.size() < keep.size()) {
    // Restore original row order for reproducible tie-breaking downstream.
    std::vector<std::size_t> idx(merged.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return merged[a] < merged[b]; });
    keep.clear();
    std::vector<double> wsum;
    for (auto j : idx) {
      keep.push_back(merged[j]);
      wsum.push_back(merged_w[j]);
    }
    merged_w = std::move(wsum);
  } else {
    merged_w.clear();
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  if (n < k) {
    throw SingularDesignError("fit_weighted_qr: fewer distinct rows than design columns");
  }
  Eigen::MatrixXd xp(n, k);
  Eigen::VectorXd yp(n);
  Eigen::VectorXd wp(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    xp.row(r) = x.row(keep[static_cast<std::size_t>(r)]);
    yp[r] = y[keep[static_cast<std::size_t>(r)]];
    wp[r] = merged_w.empty() ? w[keep[static_cast<std::size_t>(r)]] : merged_w[static_cast<std::size_t>(r)];
  }
  QuantileFit fit;
  fit.tau = tau;
  fit.n_effective = static_cast<std::size_t>(n);

  // Intercept-only: the problem is the weighted quantile itself.
  if (k == 1 && xp(0, 0) > 0.0 && (xp.col(0).array() == xp(0, 0)).all()) {
    const double c = xp(0, 0);
    const Eigen::VectorXd scaled = yp / c;
    fit.beta = Eigen::VectorXd::Constant(1, weighted_quantile(scaled, wp, tau));
    fit.objective = detail::weighted_check_objective(xp, yp, wp, fit.beta, tau);
    fit.converged = true;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (yp[r] / c == fit.beta[0]) {
        fit.basis.push_back(keep[static_cast<std::size_t>(r)]);
        break;
      }
    }
    return fit;
  }

  // Intercept plus disjoint indicators (a saturated one-way layout): the
  // check loss separates into one weighted quantile per cell.
  if (options.cell_decomposition && k >= 2) {
    std::vector<int> cell(static_cast<std::size_t>(n), 0);
    bool saturated = true;
    for (Eigen::Index r = 0; r < n && saturated; ++r) {
      if (xp(r, 0) != 1.0) saturated = false;
      int hits = 0;
      for (Eigen::Index c = 1; c < k && saturated; ++c) {
        if (xp(r, c) == 1.0) {
          ++hits;
          cell[static_cast<std::size_t>(r)] = static_cast<int>(c);
        } else if (xp(r, c) != 0.0) {
          saturated = false;
        }
      }
      if (hits > 1) saturated = false;
    }
    if (saturated) {
      std::vector<std::vector<double>> cy(static_cast<std::size_t>(k));
      std::vector<std::vector<double>> cw(static_cast<std::size_t>(k));
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(cell[static_cast<std::size_t>(r)]);
        cy[c].push_back(yp[r]);
        cw[c].push_back(wp[r]);
      }
      for (const auto& v : cy) {
        if (v.empty()) {
          throw SingularDesignError("fit_weighted_qr: an indicator cell has no positive-weight rows");
        }
      }
      Eigen::VectorXd q(k);
      for (Eigen::Index c = 0; c < k; ++c) {
        q[c] = weighted_quantile(cy[static_cast<std::size_t>(c)], cw[static_cast<std::size_t>(c)], tau);
      }
      fit.beta = q.array() - q[0];
      fit.beta[0] = q[0];
      fit.objective = detail::weighted_check_objective(xp, yp, wp, fit.beta, tau);
      fit.converged = true;
      std::vector<bool> found(static_cast<std::size_t>(k), false);
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(cell[static_cast<std::size_t>(r)]);
        if (!found[c] && yp[r] == q[static_cast<Eigen::Index>(c)]) {
          found[c] = true;
          fit.basis.push_back(keep[static_cast<std::size_t>(r)]);
        }
      }
      return fit;
    }
  }

  // Rank on unit-norm columns so a small-scale column is not mistaken for a
  // dependent one.
  Eigen::MatrixXd scaled = xp;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double nc = scaled.col(c).norm();
    if (nc > 0.0) scaled.col(c) /= nc;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    throw SingularDesignError("fit_weighted_qr: design is rank deficient (rank " +
                              std::to_string(qr.rank()) + " < " + std::to_string(k) + ")");
  }

  Eigen::VectorXd start;
  if (options.warm_start && options.warm_start->size() == k) {
    start = *options.warm_start;
  } else {
    start = detail::smoothed_start(xp, yp, wp, tau, options, fit.smoothing_iterations);
  }
  const Eigen::VectorXd r0 = yp - xp * start;
  auto basis = detail::initial_basis(xp, r0);
  if (static_cast<Eigen::Index>(basis.size()) < k) {
    throw SingularDesignError("fit_weighted_qr: could not find a nonsingular basis");
  }
  const int max_iter = options.max_exchanges > 0 ? options.max_exchanges
                                                 : static_cast<int>(50 * n + 100);
  detail::exchange_polish(xp, yp, wp, tau, std::move(basis), max_iter, fit);
  for (auto& b : fit.basis) b = keep[static_cast<std::size_t>(b)];
  return fit;
}

/// Unit-weight convenience overload.
inline QuantileFit fit_qr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double tau,
                          const QrOptions& options = {}) {
  return fit_weighted_qr(x, y, Eigen::VectorXd::Ones(y.size()), tau, options);
}

}  // namespace wqte

#endif  // WQTE_QUANTREG_HPP
