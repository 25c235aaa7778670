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

#include <cmath>
#include <vector>

#include "wqte/simlab.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(Scenario, PresetKeysParse) {
  for (const auto& key : wqte::preset_keys()) {
    const auto sc = wqte::make_scenario(key);
    EXPECT_EQ(sc.key, key);
  }
  EXPECT_THROW(wqte::make_scenario("bogus"), wqte::UsageError);
  EXPECT_THROW(wqte::make_scenario("categorical-weak-d1-inter-pareto5"), wqte::UsageError);
  EXPECT_THROW(wqte::make_scenario("binary-weak-d2-nointer-pareto5"), wqte::UsageError);
}

TEST(Scenario, ParameterVectors) {
  auto s = wqte::make_scenario("binary-strong-d4-nointer-pareto7");
  EXPECT_EQ(s.ps_slopes(0, 0), -1.0);
  EXPECT_EQ(s.ps_slopes(0, 1), 2.0);
  EXPECT_EQ(s.ps_intercepts[0], 0.0);
  EXPECT_EQ(s.error.shape, 7.0);
  s = wqte::make_scenario("categorical-strong-d4-nointer-pareto5");
  EXPECT_DOUBLE_EQ(s.ps_slopes(0, 1), 1.0);  // 5 * 0.2
  EXPECT_DOUBLE_EQ(s.ps_slopes(1, 3), 1.0);  // 5 * 0.2
  s = wqte::make_scenario("continuous-strong-d1-nointer-t3");
  EXPECT_EQ(s.ps_slopes(0, 0), 3.0);
  EXPECT_EQ(s.error.kind, wqte::ErrorSpec::Kind::kStudentT);
  EXPECT_DOUBLE_EQ(s.exposure_sd * s.exposure_sd, 5.0);
}

TEST(Confounders, CorrelatedCovariance) {
  auto sc = wqte::make_scenario("binary-weak-d4-nointer-pareto5", 1000000, 1);
  const MatrixXd x = wqte::gen_confounders(sc);
  const MatrixXd centered = x.rowwise() - x.colwise().mean();
  const MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  EXPECT_NEAR(cov(0, 1), 0.5, 0.01);
  EXPECT_NEAR(cov(1, 2), 0.7, 0.01);
  EXPECT_NEAR(cov(1, 3), 0.0, 0.01);
}

TEST(Confounders, UnivariateMeanAndDeterminism) {
  auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", 10000, 42);
  const MatrixXd a = wqte::gen_confounders(sc);
  EXPECT_LE(std::abs(a.mean()), 3.0 / std::sqrt(10000.0));
  EXPECT_EQ(a, wqte::gen_confounders(sc));
}

TEST(Confounders, NonPositiveDefiniteRejected) {
  auto sc = wqte::make_scenario("binary-weak-d4-nointer-pareto5", 10, 1);
  sc.sigma(0, 1) = sc.sigma(1, 0) = 2.0;
  EXPECT_THROW(wqte::gen_confounders(sc), wqte::FactorizationError);
}

double share(const VectorXd& z, double level) {
  return (z.array() == level).cast<double>().mean();
}

TEST(Exposure, BinaryPrevalence) {
  auto weak = wqte::simulate(wqte::make_scenario("binary-weak-d1-nointer-pareto5", 1000000, 3));
  EXPECT_NEAR(share(weak.z(), 1.0), 0.62, 0.01);
  auto strong = wqte::simulate(wqte::make_scenario("binary-strong-d1-nointer-pareto5", 1000000, 3));
  EXPECT_NEAR(share(strong.z(), 1.0), 0.58, 0.01);
}

TEST(Exposure, CategoricalPrevalence) {
  auto weak = wqte::simulate(wqte::make_scenario("categorical-weak-d1-nointer-pareto5", 1000000, 3));
  EXPECT_NEAR(share(weak.z(), 1.0), 0.23, 0.01);
  EXPECT_NEAR(share(weak.z(), 2.0), 0.39, 0.01);
  EXPECT_NEAR(share(weak.z(), 3.0), 0.38, 0.01);
  auto strong = wqte::simulate(wqte::make_scenario("categorical-strong-d1-nointer-pareto5", 1000000, 3));
  EXPECT_NEAR(share(strong.z(), 1.0), 0.31, 0.01);
  EXPECT_NEAR(share(strong.z(), 2.0), 0.31, 0.01);
  EXPECT_NEAR(share(strong.z(), 3.0), 0.38, 0.01);
}

TEST(Exposure, ContinuousModel) {
  auto sc = wqte::make_scenario("continuous-weak-d1-nointer-pareto5", 200000, 3);
  const auto data = wqte::simulate(sc);
  const VectorXd resid = data.z() - wqte::exposure_mean(sc, data.x());
  EXPECT_NEAR(resid.mean(), 0.0, 0.02);
  EXPECT_NEAR(resid.squaredNorm() / static_cast<double>(resid.size()), 5.0, 0.05);
}

TEST(Errors, ParetoMoments) {
  auto rng = wqte::make_engine(9, 0);
  const VectorXd e = wqte::gen_error(wqte::ErrorSpec::pareto(5.0), 1000000, rng);
  EXPECT_GE(e.minCoeff(), 1.0);
  EXPECT_NEAR(e.mean(), 1.25, 0.01);
  EXPECT_NEAR(wqte::unweighted_quantile(e, 0.95), std::pow(20.0, 0.2), 0.01);
  // Closed-form quantile (1 - tau)^(-1/theta) on a few more levels.
  for (double tau : {0.5, 0.9, 0.99}) {
    EXPECT_NEAR(wqte::unweighted_quantile(e, tau), std::pow(1.0 - tau, -0.2), 0.01);
  }
}

TEST(Errors, BadShape) {
  auto rng = wqte::make_engine(9, 0);
  EXPECT_THROW(wqte::gen_error(wqte::ErrorSpec::pareto(0.0), 3, rng), wqte::ArgumentError);
  EXPECT_THROW(wqte::gen_error(wqte::ErrorSpec::student_t(-1.0), 3, rng), wqte::ArgumentError);
}

TEST(Outcome, Formulas) {
  auto base = wqte::make_scenario("binary-weak-d1-nointer-pareto5");
  Eigen::RowVectorXd x1(1);
  x1 << 0.0;
  EXPECT_DOUBLE_EQ(wqte::outcome_value(base, x1, 1.0, 1.0), 3.0);
  auto inter = wqte::make_scenario("binary-weak-d1-inter-pareto5");
  x1 << 2.0;
  EXPECT_DOUBLE_EQ(wqte::outcome_value(inter, x1, 1.0, 1.0), 7.0);
  auto multi = wqte::make_scenario("binary-weak-d4-nointer-pareto5");
  Eigen::RowVectorXd x4 = Eigen::RowVectorXd::Zero(4);
  EXPECT_DOUBLE_EQ(wqte::outcome_value(multi, x4, 1.0, 1.0), 3.0);
  x4 << 0.5, 1.0, 2.0, -1.0;
  EXPECT_DOUBLE_EQ(wqte::outcome_value(multi, x4, 0.0, 0.0), 1.0 + std::sin(0.5) + 1.0 + 2.0 - 1.0 - 2.0);
  auto cat = wqte::make_scenario("categorical-weak-d1-nointer-pareto5");
  x1 << 0.0;
  EXPECT_DOUBLE_EQ(wqte::outcome_value(cat, x1, 2.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(wqte::outcome_value(cat, x1, 3.0, 0.0), 0.0);
  EXPECT_THROW(wqte::gen_outcome(base, MatrixXd::Zero(2, 1), VectorXd::Zero(3), VectorXd::Zero(3)),
               wqte::ArgumentError);
}

TEST(Simulate, DeterministicAndSeedSensitive) {
  auto sc = wqte::make_scenario("categorical-weak-d4-nointer-pareto5", 500, 17);
  const auto a = wqte::simulate(sc);
  const auto b = wqte::simulate(sc);
  EXPECT_EQ(a.y(), b.y());
  EXPECT_EQ(a.z(), b.z());
  sc.seed = 18;
  EXPECT_NE(a.y(), wqte::simulate(sc).y());
}

TEST(Simulate, TruePsCalibration) {
  auto sc = wqte::make_scenario("binary-strong-d1-nointer-pareto5", 100000, 5);
  const auto data = wqte::simulate(sc);
  const VectorXd e = wqte::true_propensity(sc, data.x()).treated_score();
  std::vector<std::size_t> order(static_cast<std::size_t>(e.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return e[static_cast<Eigen::Index>(a)] < e[static_cast<Eigen::Index>(b)]; });
  const std::size_t decile = order.size() / 10;
  for (std::size_t k = 0; k < 10; ++k) {
    double ez = 0.0;
    double ee = 0.0;
    for (std::size_t r = k * decile; r < (k + 1) * decile; ++r) {
      ez += data.z()[static_cast<Eigen::Index>(order[r])];
      ee += e[static_cast<Eigen::Index>(order[r])];
    }
    EXPECT_NEAR(ez / static_cast<double>(decile), ee / static_cast<double>(decile), 0.02);
  }
}

constexpr std::size_t kMc = 1000000;

TEST(Oracle, HomogeneousPresetsGiveUnitEffect) {
  for (const char* key : {"binary-weak-d1-nointer-pareto5", "binary-strong-d4-nointer-pareto5",
                          "continuous-weak-d1-nointer-t3"}) {
    const auto sc = wqte::make_scenario(key);
    EXPECT_NEAR(wqte::true_qte_oracle(sc, 0.95, kMc, 1), 1.0, 0.01) << key;
  }
  const auto cat = wqte::make_scenario("categorical-weak-d1-nointer-pareto5");
  EXPECT_NEAR(wqte::true_qte_oracle(cat, 0.95, kMc, 1, 2), 1.0, 0.01);
  EXPECT_NEAR(wqte::true_qte_oracle(cat, 0.95, kMc, 1, 3), -1.0, 0.01);
}

TEST(Oracle, WqteMatchesQteUnderHomogeneity) {
  const auto sc = wqte::make_scenario("binary-strong-d1-nointer-pareto5");
  const double qte = wqte::true_qte_oracle(sc, 0.95, kMc, 2);
  EXPECT_NEAR(wqte::true_wqte_oracle(sc, wqte::TiltingSpec::uniform(), 0.95, kMc, 2), qte, 1e-12);
  EXPECT_NEAR(wqte::true_wqte_oracle(sc, wqte::TiltingSpec::overlap(), 0.95, kMc, 2), qte, 0.01);
}

TEST(Oracle, InteractionSeparatesWqteFromQte) {
  const auto sc = wqte::make_scenario("binary-weak-d1-inter-pareto5");
  const double qte = wqte::true_qte_oracle(sc, 0.95, kMc, 3);
  const double wqte = wqte::true_wqte_oracle(sc, wqte::TiltingSpec::overlap(), 0.95, kMc, 3);
  EXPECT_NEAR(std::abs(qte - wqte), 0.19, 0.02);
}

TEST(Oracle, IndependentRunsAgree) {
  for (const auto& key : wqte::preset_keys()) {
    if (key.find("pareto5") == std::string::npos) continue;
    const auto sc = wqte::make_scenario(key);
    EXPECT_NEAR(wqte::true_qte_oracle(sc, 0.95, kMc, 100), wqte::true_qte_oracle(sc, 0.95, kMc, 200), 0.02)
        << key;
  }
}

}  // namespace
