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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "wqte/quantreg.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double objective(const MatrixXd& x, const VectorXd& y, const VectorXd& w,
                 const VectorXd& beta, double tau) {
  double total = 0.0;
  const VectorXd r = y - x * beta;
  for (Eigen::Index i = 0; i < r.size(); ++i) total += w[i] * wqte::check_loss(r[i], tau);
  return total;
}

// Exhaustive vertex oracle: the LP optimum is attained at a hyperplane
// through k observations, so enumerating every nonsingular k-subset finds it.
double brute_force_objective(const MatrixXd& x, const VectorXd& y, const VectorXd& w,
                             double tau) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.begin(), pick.begin() + k, 1);
  std::sort(pick.begin(), pick.end());
  do {
    MatrixXd xb(k, k);
    VectorXd yb(k);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pick[static_cast<std::size_t>(i)]) {
        xb.row(row) = x.row(i);
        yb[row++] = y[i];
      }
    }
    Eigen::FullPivLU<MatrixXd> lu(xb);
    if (!lu.isInvertible()) continue;
    best = std::min(best, objective(x, y, w, lu.solve(yb), tau));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

TEST(CheckLoss, Examples) {
  EXPECT_DOUBLE_EQ(wqte::check_loss(2.0, 0.5), 1.0);
  EXPECT_NEAR(wqte::check_loss(-1.0, 0.95), 0.05, 1e-15);
  EXPECT_EQ(wqte::check_loss(0.0, 0.3), 0.0);
  EXPECT_THROW(wqte::check_loss(1.0, 1.0), wqte::ArgumentError);
  EXPECT_THROW(wqte::check_loss(1.0, 0.0), wqte::ArgumentError);
}

TEST(WeightedQuantile, Examples) {
  const std::vector<double> y{1, 2, 3};
  EXPECT_EQ(wqte::weighted_quantile(y, std::vector<double>{1, 1, 1}, 0.5), 2.0);
  EXPECT_EQ(wqte::weighted_quantile(y, std::vector<double>{0, 1, 1}, 0.5),
            wqte::weighted_quantile(std::vector<double>{2, 3}, std::vector<double>{1, 1}, 0.5));
  // Left endpoint of the minimizing interval.
  EXPECT_EQ(wqte::weighted_quantile(std::vector<double>{1, 2}, std::vector<double>{1, 1}, 0.5), 1.0);
}

TEST(WeightedQuantile, Errors) {
  EXPECT_THROW(wqte::weighted_quantile(std::vector<double>{1, 2}, std::vector<double>{0, 0}, 0.5),
               wqte::DegenerateWeightsError);
  EXPECT_THROW(wqte::weighted_quantile(std::vector<double>{}, std::vector<double>{}, 0.5),
               wqte::ArgumentError);
  EXPECT_THROW(wqte::weighted_quantile(std::vector<double>{1}, std::vector<double>{1, 2}, 0.5),
               wqte::ArgumentError);
}

TEST(WeightedQuantile, MatchesGridArgmin) {
  std::mt19937_64 gen(20260101);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> y(20);
    std::vector<double> w(20);
    for (auto& v : y) v = unif(gen);
    for (auto& v : w) v = expo(gen);
    const double tau = rep == 0 ? 0.95 : 0.05 + 0.9 * unif(gen);
    double best = std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (double q : y) {
      double loss = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) loss += w[i] * wqte::check_loss(y[i] - q, tau);
      if (loss < best || (loss == best && q < arg)) {
        best = loss;
        arg = q;
      }
    }
    EXPECT_EQ(wqte::weighted_quantile(y, w, tau), arg) << "rep " << rep;
  }
}

TEST(FitWeightedQr, InterceptOnlyEqualsWeightedQuantile) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> norm;
  std::exponential_distribution<double> expo(1.0);
  for (double tau : {0.1, 0.5, 0.95}) {
    VectorXd y(101);
    VectorXd w(101);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y[i] = norm(gen);
      w[i] = expo(gen);
    }
    const auto fit = wqte::fit_weighted_qr(MatrixXd::Ones(101, 1), y, w, tau);
    EXPECT_EQ(fit.beta[0], wqte::weighted_quantile(y, w, tau));
    EXPECT_TRUE(fit.converged);
  }
}

TEST(FitWeightedQr, NoiselessLineIsRecovered) {
  const Eigen::Index n = 50;
  MatrixXd x(n, 2);
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = 0.1 * static_cast<double>(i) - 2.0;
    y[i] = 1.0 + 2.0 * x(i, 1);
  }
  for (double tau : {0.2, 0.5, 0.95}) {
    const auto fit = wqte::fit_qr(x, y, tau);
    EXPECT_NEAR(fit.beta[0], 1.0, 1e-12);
    EXPECT_NEAR(fit.beta[1], 2.0, 1e-12);
    EXPECT_NEAR(fit.objective, 0.0, 1e-10);
  }
}

TEST(FitWeightedQr, BinaryDesignDecomposesPerArm) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> norm;
  std::bernoulli_distribution coin(0.4);
  const Eigen::Index n = 400;
  MatrixXd x(n, 2);
  VectorXd y(n);
  std::vector<double> y1;
  std::vector<double> y0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = coin(gen) ? 1.0 : 0.0;
    x(i, 0) = 1.0;
    x(i, 1) = z;
    y[i] = norm(gen) + z;
    (z == 1.0 ? y1 : y0).push_back(y[i]);
  }
  wqte::QrOptions general;
  general.cell_decomposition = false;
  for (double tau : {0.3, 0.95}) {
    const double expected = wqte::unweighted_quantile(y1, tau) - wqte::unweighted_quantile(y0, tau);
    for (const auto& opt : {wqte::QrOptions{}, general}) {
      const auto fit = wqte::fit_qr(x, y, tau, opt);
      EXPECT_NEAR(fit.beta[1], expected, 1e-10);
      EXPECT_NEAR(fit.beta[0], wqte::unweighted_quantile(y0, tau), 1e-10);
    }
  }
}

TEST(FitWeightedQr, IndicatorDesignsMatchBruteForce) {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> cell(0, 2);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  std::normal_distribution<double> norm;
  std::exponential_distribution<double> expo(1.0);
  wqte::QrOptions general;
  general.cell_decomposition = false;
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 9 + rep % 5;
    MatrixXd x = MatrixXd::Zero(n, 3);
    VectorXd y(n);
    VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      const int c = i < 3 ? i : cell(gen);  // every cell occupied
      x(i, 0) = 1.0;
      if (c > 0) x(i, c) = 1.0;
      y[i] = norm(gen) + c;
      w[i] = expo(gen);
    }
    const double tau = unif(gen);
    const auto fast = wqte::fit_weighted_qr(x, y, w, tau);
    const auto slow = wqte::fit_weighted_qr(x, y, w, tau, general);
    const double oracle = brute_force_objective(x, y, w, tau);
    EXPECT_NEAR(fast.objective, oracle, 1e-10 * std::max(1.0, oracle)) << "rep " << rep;
    EXPECT_NEAR(slow.objective, oracle, 1e-10 * std::max(1.0, oracle)) << "rep " << rep;
  }
}

TEST(FitWeightedQr, MatchesBruteForceOnTinyInstances) {
  std::mt19937_64 gen(424242);
  std::uniform_int_distribution<int> size(3, 15);
  std::uniform_real_distribution<double> unif(0.02, 0.98);
  std::normal_distribution<double> norm;
  std::exponential_distribution<double> expo(1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = size(gen);
    const int k = rep % 2 == 0 ? 1 : 2;
    MatrixXd x(n, k);
    VectorXd y(n);
    VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      if (k == 2) x(i, 1) = norm(gen);
      y[i] = norm(gen);
      w[i] = rep % 3 == 0 ? 1.0 : expo(gen);
    }
    const double tau = unif(gen);
    const auto fit = wqte::fit_weighted_qr(x, y, w, tau);
    const double oracle = brute_force_objective(x, y, w, tau);
    EXPECT_LE(fit.objective, oracle + 1e-8 * std::max(1.0, oracle)) << "rep " << rep;
    EXPECT_NEAR(fit.objective, objective(x, y, w, fit.beta, tau), 1e-10);
  }
}

struct Problem {
  MatrixXd x;
  VectorXd y;
  VectorXd w;
};

Problem random_problem(std::uint64_t seed, Eigen::Index n, Eigen::Index k) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> norm;
  std::exponential_distribution<double> expo(1.0);
  Problem p{MatrixXd(n, k), VectorXd(n), VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    p.x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < k; ++j) p.x(i, j) = norm(gen);
    p.y[i] = 1.0 + p.x.row(i).sum() + std::exp(norm(gen));
    p.w[i] = expo(gen);
  }
  return p;
}

TEST(FitWeightedQr, SubgradientBracketHoldsAtOptimum) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = random_problem(seed, 500, 4);
    const double tau = 0.95;
    const auto fit = wqte::fit_weighted_qr(p.x, p.y, p.w, tau);
    ASSERT_TRUE(fit.converged);
    const VectorXd r = p.y - p.x * fit.beta;
    const double ztol = 1e-9 * (1.0 + p.y.cwiseAbs().maxCoeff());
    int zeros = 0;
    for (Eigen::Index j = 0; j < p.x.cols(); ++j) {
      double inner = 0.0;
      double bound = 0.0;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (std::abs(r[i]) <= ztol) {
          bound += p.w[i] * std::abs(p.x(i, j)) * std::max(tau, 1.0 - tau);
          if (j == 0) ++zeros;
        } else {
          inner += p.w[i] * p.x(i, j) * (tau - (r[i] < 0.0 ? 1.0 : 0.0));
        }
      }
      EXPECT_LE(std::abs(inner), bound + 1e-9) << "seed " << seed << " coord " << j;
    }
    EXPECT_GE(zeros, 4);
  }
}

TEST(FitWeightedQr, EquivarianceProperties) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto p = random_problem(seed, 300, 3);
    const double tau = 0.8;
    const auto base = wqte::fit_weighted_qr(p.x, p.y, p.w, tau);
    const double c = 3.7;
    const auto scaled = wqte::fit_weighted_qr(p.x, c * p.y, p.w, tau);
    const auto shifted =
        wqte::fit_weighted_qr(p.x, (p.y.array() + 2.5).matrix(), p.w, tau);
    const auto reweighted = wqte::fit_weighted_qr(p.x, p.y, 42.0 * p.w, tau);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double tol = 1e-8 * std::max(1.0, std::abs(base.beta[j]));
      EXPECT_NEAR(scaled.beta[j], c * base.beta[j], c * tol);
      EXPECT_NEAR(shifted.beta[j], base.beta[j] + (j == 0 ? 2.5 : 0.0), tol);
      EXPECT_NEAR(reweighted.beta[j], base.beta[j], tol);
    }
  }
}

TEST(FitWeightedQr, ZeroWeightRowsAreExcluded) {
  auto p = random_problem(5, 200, 2);
  VectorXd w = p.w;
  w.tail(50).setZero();
  const auto with_zeros = wqte::fit_weighted_qr(p.x, p.y, w, 0.6);
  const auto trimmed = wqte::fit_weighted_qr(p.x.topRows(150), p.y.head(150), p.w.head(150), 0.6);
  EXPECT_NEAR((with_zeros.beta - trimmed.beta).norm(), 0.0, 1e-10);
  EXPECT_EQ(with_zeros.n_effective, 150u);
}

TEST(FitWeightedQr, WarmStartReachesSameOptimum) {
  const auto p = random_problem(9, 800, 4);
  const auto cold = wqte::fit_weighted_qr(p.x, p.y, p.w, 0.9);
  wqte::QrOptions opt;
  opt.warm_start = wqte::fit_weighted_qr(p.x, p.y, p.w, 0.85).beta;
  const auto warm = wqte::fit_weighted_qr(p.x, p.y, p.w, 0.9, opt);
  EXPECT_NEAR(warm.objective, cold.objective, 1e-9 * cold.objective);
}

TEST(FitWeightedQr, DuplicatedRowsMatchCountWeights) {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 20; ++rep) {
    const Problem base = random_problem(500 + static_cast<std::uint64_t>(rep), 12, 3);
    std::uniform_int_distribution<int> pick(0, 11);
    MatrixXd x(40, 3);
    VectorXd y(40);
    VectorXd counts = VectorXd::Zero(12);
    for (int i = 0; i < 40; ++i) {
      const int j = pick(gen);
      x.row(i) = base.x.row(j);
      y[i] = base.y[j];
      counts[j] += 1.0;
    }
    for (double tau : {0.3, 0.9}) {
      const auto fit = wqte::fit_qr(x, y, tau);
      EXPECT_TRUE(fit.converged);
      const double oracle = brute_force_objective(base.x, base.y, counts, tau);
      EXPECT_NEAR(fit.objective, oracle, 1e-9 * std::max(1.0, oracle)) << "rep " << rep;
      EXPECT_NEAR(objective(x, y, VectorXd::Ones(40), fit.beta, tau), oracle, 1e-9 * std::max(1.0, oracle));
    }
  }
}

TEST(FitWeightedQr, BootstrapResampleConvergesQuickly) {
  const Problem p = random_problem(8, 500, 8);
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> pick(0, 499);
  MatrixXd x(500, 8);
  VectorXd y(500);
  for (int i = 0; i < 500; ++i) {
    const int j = pick(gen);
    x.row(i) = p.x.row(j);
    y[i] = p.y[j];
  }
  const auto fit = wqte::fit_qr(x, y, 0.95);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(fit.exchange_iterations, 500);
}

TEST(FitWeightedQr, RankDeficientDesignThrows) {
  MatrixXd x(10, 2);
  x.col(0).setOnes();
  x.col(1).setConstant(3.0);
  VectorXd y = VectorXd::LinSpaced(10, 0.0, 1.0);
  EXPECT_THROW(wqte::fit_qr(x, y, 0.5), wqte::SingularDesignError);
  EXPECT_THROW(wqte::fit_qr(MatrixXd::Ones(1, 1), VectorXd::Ones(1), 0.5),
               wqte::SingularDesignError);
}

TEST(UnweightedQuantile, MatchesUnitWeightedQuantileWithTies) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> die(0, 9);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> y(1 + rep * 3);
    for (auto& v : y) v = die(rng);
    const std::vector<double> w(y.size(), 1.0);
    for (double tau : {0.01, 0.1, 0.25, 0.5, 0.7, 0.95, 0.99}) {
      EXPECT_EQ(wqte::unweighted_quantile(y, tau), wqte::weighted_quantile(y, w, tau));
    }
  }
}

}  // namespace
