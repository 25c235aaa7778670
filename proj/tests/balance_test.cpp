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

#include "wqte/balance.hpp"
#include "wqte/quantreg.hpp"
#include "wqte/simlab.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

wqte::PropensityModel constant_binary(Eigen::Index n, double e) {
  wqte::PropensityModel m;
  m.scores.resize(n, 2);
  m.scores.col(0).setConstant(1.0 - e);
  m.scores.col(1).setConstant(e);
  return m;
}

VectorXd alternating(Eigen::Index n) {
  VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = static_cast<double>(i % 2);
  return z;
}

std::vector<int> binary_labels(const VectorXd& z) {
  std::vector<int> out;
  for (double v : z) out.push_back(v == 1.0 ? 1 : 0);
  return out;
}

TEST(BinaryWeights, UniformAtHalfIsTwo) {
  const VectorXd z = alternating(10);
  const auto w = wqte::make_weights_binary(constant_binary(10, 0.5), z, wqte::TiltingSpec::uniform());
  for (Eigen::Index i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(w.w[i], 2.0);
    EXPECT_EQ(w.w1[i] > 0.0, z[i] == 1.0);
    EXPECT_EQ(w.w0[i] > 0.0, z[i] == 0.0);
  }
}

TEST(BinaryWeights, OverlapAtHalfIsHalf) {
  const VectorXd z = alternating(10);
  const auto w = wqte::make_weights_binary(constant_binary(10, 0.5), z, wqte::TiltingSpec::overlap());
  for (Eigen::Index i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(w.w[i], 0.5);
}

TEST(BinaryWeights, OverlapIsAbsoluteResidual) {
  VectorXd z(2);
  z << 1.0, 0.0;
  const auto w = wqte::make_weights_binary(constant_binary(2, 0.8), z, wqte::TiltingSpec::overlap());
  EXPECT_NEAR(w.w1[0], 0.2, 1e-15);
  EXPECT_NEAR(w.w0[1], 0.8, 1e-15);
}

TEST(BinaryWeights, TreatedAndUntreatedTilting) {
  VectorXd z(2);
  z << 1.0, 0.0;
  const auto ps = constant_binary(2, 0.8);
  const auto att = wqte::make_weights_binary(ps, z, wqte::TiltingSpec::treated());
  EXPECT_DOUBLE_EQ(att.w[0], 1.0);
  EXPECT_NEAR(att.w[1], 0.8 / 0.2, 1e-14);
  const auto atc = wqte::make_weights_binary(ps, z, wqte::TiltingSpec::untreated());
  EXPECT_NEAR(atc.w[0], 0.2 / 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(atc.w[1], 1.0);
}

TEST(BinaryWeights, CustomTiltingMustBePositive) {
  const VectorXd z = alternating(4);
  MatrixXd x(4, 1);
  x << -1, 0, 1, 2;
  auto g = wqte::TiltingSpec::from_function([](const Eigen::RowVectorXd& r) { return r[0]; });
  EXPECT_THROW(wqte::make_weights_binary(constant_binary(4, 0.5), z, g, x), wqte::TiltingError);
}

TEST(BinaryWeights, EmptyArmRejected) {
  const VectorXd z = VectorXd::Ones(4);
  EXPECT_THROW(wqte::make_weights_binary(constant_binary(4, 0.5), z, wqte::TiltingSpec::uniform()),
               wqte::DegenerateArmError);
}

TEST(CategoricalWeights, UniformScores) {
  wqte::PropensityModel ps;
  ps.scores = MatrixXd::Constant(6, 3, 1.0 / 3.0);
  const std::vector<int> labels{1, 2, 3, 1, 2, 3};
  const auto ipw = wqte::make_weights_categorical(ps, labels, wqte::CategoricalScheme::kGeneralizedIpw);
  const auto ow = wqte::make_weights_categorical(ps, labels, wqte::CategoricalScheme::kGeneralizedOw);
  for (Eigen::Index i = 0; i < 6; ++i) {
    EXPECT_NEAR(ipw.w[i], 3.0, 1e-14);
    EXPECT_NEAR(ow.w[i], 1.0 / 3.0, 1e-15);
  }
}

TEST(CategoricalWeights, TwoLevelOverlapReducesToBinary) {
  auto sc = wqte::make_scenario("binary-strong-d1-nointer-pareto5", 500, 1);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::true_propensity(sc, data.x());
  const auto binary = wqte::make_weights_binary(ps, data.z(), wqte::TiltingSpec::overlap());
  std::vector<int> labels;
  for (double v : data.z()) labels.push_back(v == 1.0 ? 2 : 1);
  const auto general = wqte::make_weights_categorical(ps, labels, wqte::CategoricalScheme::kGeneralizedOw);
  EXPECT_LE((general.w - binary.w).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BalanceTable, IdenticalArmsHaveZeroSmd) {
  MatrixXd x(4, 1);
  x << 1.0, 1.0, 3.0, 3.0;
  const std::vector<int> labels{0, 1, 0, 1};
  wqte::WeightVector w;
  w.w = VectorXd::Ones(4);
  const auto t = wqte::balance_table(x, labels, w);
  ASSERT_EQ(t.rows.size(), 1U);
  EXPECT_DOUBLE_EQ(t.rows[0].weighted_smd, 0.0);
  EXPECT_DOUBLE_EQ(t.rows[0].unweighted_smd, 0.0);
}

TEST(BalanceTable, ZeroSdIsFlagged) {
  MatrixXd x(4, 1);
  x << 2.0, 2.0, 2.0, 2.0;
  const std::vector<int> labels{0, 1, 0, 1};
  wqte::WeightVector w;
  w.w = VectorXd::Ones(4);
  const auto t = wqte::balance_table(x, labels, w);
  EXPECT_TRUE(t.rows[0].undefined);
  EXPECT_NE(wqte::to_csv(t).find("NA"), std::string::npos);
}

TEST(BalanceTable, HandComputedSmd) {
  MatrixXd x(6, 1);
  x << 0.0, 2.0, 4.0, 1.0, 3.0, 8.0;
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  wqte::WeightVector w;
  w.w = VectorXd::Ones(6);
  w.w[5] = 2.0;
  const auto t = wqte::balance_table(x, labels, w);
  // arm 0: mean 2, var 4; arm 1: mean 4, var 13; pooled sd sqrt(8.5)
  const double pooled = std::sqrt(8.5);
  EXPECT_NEAR(t.rows[0].unweighted_smd, 2.0 / pooled, 1e-14);
  EXPECT_NEAR(t.rows[0].weighted_smd, (20.0 / 4.0 - 2.0) / pooled, 1e-14);
}

// The IPW-weighted SMD has a sampling SD near 0.03 at n = 1e5 under strong
// confounding, so the 0.05 bound is checked at n = 1e6.
TEST(BalanceTable, StrongConfoundingImbalanceRemovedByTruePsIpw) {
  auto sc = wqte::make_scenario("binary-strong-d1-nointer-pareto5", 1000000, 3);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::true_propensity(sc, data.x());
  const auto w = wqte::make_weights_binary(ps, data.z(), wqte::TiltingSpec::uniform());
  const auto t = wqte::balance_table(data.x(), binary_labels(data.z()), w);
  EXPECT_GT(std::abs(t.rows[0].unweighted_smd), 0.5);
  EXPECT_LE(std::abs(t.rows[0].weighted_smd), 0.05);
}

TEST(BalanceProperties, IpwWeightSumsNearN) {
  auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", 100000, 4);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::true_propensity(sc, data.x());
  const auto w = wqte::make_weights_binary(ps, data.z(), wqte::TiltingSpec::uniform());
  const double n = static_cast<double>(data.n());
  EXPECT_NEAR(w.w1.sum() / n, 1.0, 0.02);
  EXPECT_NEAR(w.w0.sum() / n, 1.0, 0.02);
}

TEST(BalanceProperties, OverlapWeightsInUnitInterval) {
  auto sc = wqte::make_scenario("binary-strong-d4-nointer-pareto5", 5000, 4);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::fit_logistic(data.x(), data.z());
  const auto w = wqte::make_weights_binary(ps, data.z(), wqte::TiltingSpec::overlap());
  EXPECT_GE(w.w.minCoeff(), 0.0);
  EXPECT_LE(w.w.maxCoeff(), 1.0);
}

TEST(BalanceProperties, OverlapWeightsExactMeanBalance) {
  for (const char* key : {"binary-weak-d4-nointer-pareto5", "binary-strong-d1-nointer-pareto5"}) {
    auto sc = wqte::make_scenario(key, 3000, 8);
    const auto data = wqte::simulate(sc);
    wqte::GlmOptions opt;
    opt.clip_lo = 1e-12;
    opt.clip_hi = 1.0 - 1e-12;
    const auto ps = wqte::fit_logistic(data.x(), data.z(), opt);
    const auto w = wqte::make_weights_binary(ps, data.z(), wqte::TiltingSpec::overlap());
    for (Eigen::Index c = 0; c < data.x().cols(); ++c) {
      double m1 = 0, s1 = 0, m0 = 0, s0 = 0;
      for (Eigen::Index i = 0; i < data.x().rows(); ++i) {
        m1 += w.w1[i] * data.x()(i, c);
        s1 += w.w1[i];
        m0 += w.w0[i] * data.x()(i, c);
        s0 += w.w0[i];
      }
      EXPECT_NEAR(m1 / s1, m0 / s0, 1e-6) << key << " column " << c;
    }
  }
}

TEST(BalanceProperties, CustomRescalingLeavesQuantilesUnchanged) {
  auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", 2000, 5);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::true_propensity(sc, data.x());
  auto g = [](const Eigen::RowVectorXd& r) { return std::exp(0.3 * r[0]); };
  const auto a = wqte::make_weights_binary(ps, data.z(), wqte::TiltingSpec::from_function(g), data.x());
  const auto b = wqte::make_weights_binary(
      ps, data.z(),
      wqte::TiltingSpec::from_function([&](const Eigen::RowVectorXd& r) { return 7.5 * g(r); }),
      data.x());
  EXPECT_LE((b.w - 7.5 * a.w).cwiseAbs().maxCoeff(), 1e-12 * b.w.maxCoeff());
  for (double tau : {0.1, 0.5, 0.95}) {
    EXPECT_EQ(wqte::weighted_quantile(data.y(), a.w1, tau), wqte::weighted_quantile(data.y(), b.w1, tau));
    MatrixXd design(data.n(), 2);
    design.col(0).setOnes();
    design.col(1) = data.z();
    const auto fa = wqte::fit_weighted_qr(design, data.y(), a.w, tau);
    const auto fb = wqte::fit_weighted_qr(design, data.y(), b.w, tau);
    EXPECT_NEAR(fa.beta[1], fb.beta[1], 1e-9);
  }
}

TEST(WeightDiagnostics, EffectiveSize) {
  wqte::WeightVector w;
  w.w = VectorXd::Ones(4);
  w.w[3] = 3.0;
  const std::vector<int> labels{0, 0, 1, 1};
  const auto d = wqte::weight_diagnostics(w, labels);
  ASSERT_EQ(d.size(), 2U);
  EXPECT_DOUBLE_EQ(d[0].effective_size, 2.0);
  EXPECT_DOUBLE_EQ(d[1].effective_size, 16.0 / 10.0);
  EXPECT_DOUBLE_EQ(d[1].max_weight, 3.0);
}

}  // namespace
