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
#include <numbers>
#include <random>
#include <vector>

#include "wqte/inference.hpp"
#include "wqte/simlab.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

wqte::Dataset normal_sample(Eigen::Index n, std::uint64_t seed) {
  auto rng = wqte::make_engine(seed, 0);
  std::normal_distribution<double> nd;
  VectorXd y(n), z(n);
  MatrixXd x(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = nd(rng);
    z[i] = static_cast<double>(i % 2);
    x(i, 0) = nd(rng);
  }
  return wqte::Dataset(y, z, wqte::ExposureKind::binary(), x);
}

TEST(Bootstrap, ConstantStatisticHasZeroSpread) {
  const auto data = normal_sample(100, 1);
  wqte::BootstrapOptions opt;
  opt.B = 60;
  const auto r = wqte::bootstrap(data, [](const wqte::Dataset&) { return std::vector<double>{0.0}; }, opt);
  EXPECT_EQ(r.se[0], 0.0);
  EXPECT_EQ(r.ci[0].lo, 0.0);
  EXPECT_EQ(r.ci[0].hi, 0.0);
  EXPECT_EQ(r.failures, 0);
}

TEST(Bootstrap, SampleMeanSeMatchesClosedForm) {
  const auto data = normal_sample(400, 2);
  wqte::BootstrapOptions opt;
  opt.B = 1000;
  opt.seed = 3;
  const auto r = wqte::bootstrap(data, [](const wqte::Dataset& d) { return std::vector<double>{d.y().mean()}; }, opt);
  EXPECT_NEAR(r.se[0], 0.05, 0.25 * 0.05);
  EXPECT_LT(r.ci[0].lo, r.estimate[0]);
  EXPECT_GT(r.ci[0].hi, r.estimate[0]);
}

TEST(Bootstrap, NormalIntervalIsSymmetric) {
  const auto data = normal_sample(200, 4);
  wqte::BootstrapOptions opt;
  opt.B = 200;
  opt.ci = wqte::CiMethod::kNormal;
  const auto r = wqte::bootstrap(data, [](const wqte::Dataset& d) { return std::vector<double>{d.y().mean()}; }, opt);
  EXPECT_NEAR(r.ci[0].hi - r.estimate[0], r.estimate[0] - r.ci[0].lo, 1e-12);
  EXPECT_NEAR(r.ci[0].hi - r.estimate[0], 1.959963985 * r.se[0], 1e-6);
  EXPECT_EQ(r.ci[0].method, "normal");
}

TEST(Bootstrap, ReproducibleAcrossThreadCounts) {
  const auto data = normal_sample(300, 5);
  const auto stat = [](const wqte::Dataset& d) {
    return std::vector<double>{wqte::unweighted_quantile(d.y(), 0.9), d.y().mean()};
  };
  wqte::BootstrapOptions opt;
  opt.B = 120;
  opt.seed = 11;
  const auto a = wqte::bootstrap(data, stat, opt);
  opt.threads = 4;
  const auto b = wqte::bootstrap(data, stat, opt);
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(a.se[c], b.se[c]);
    EXPECT_EQ(a.ci[c].lo, b.ci[c].lo);
    EXPECT_EQ(a.ci[c].hi, b.ci[c].hi);
  }
}

TEST(Bootstrap, FailuresCountedAndBounded) {
  const auto data = normal_sample(50, 6);
  wqte::BootstrapOptions opt;
  opt.B = 100;
  // Serial run: call 0 is the full sample, call b + 1 is resample b.
  int calls = 0;
  const auto every25 = [&](const wqte::Dataset&) {
    const int b = calls++ - 1;
    if (b >= 0 && b % 25 == 0) throw wqte::DegenerateArmError("synthetic");
    return std::vector<double>{1.0};
  };
  const auto ok = wqte::bootstrap(data, every25, opt);
  EXPECT_EQ(ok.failures, 4);
  EXPECT_EQ(ok.draws.size(), 96U);
  calls = 0;
  const auto every10 = [&](const wqte::Dataset&) {
    const int b = calls++ - 1;
    if (b >= 0 && b % 10 == 0) throw wqte::DegenerateArmError("synthetic");
    return std::vector<double>{1.0};
  };
  EXPECT_THROW(wqte::bootstrap(data, every10, opt), wqte::InstabilityError);
  opt.B = 20;
  EXPECT_THROW(wqte::bootstrap(data, every10, opt), wqte::ArgumentError);
}

TEST(Bootstrap, PsRefitInsideResample) {
  const auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", 800, 7);
  const auto data = wqte::simulate(sc);
  wqte::BootstrapOptions opt;
  opt.B = 60;
  const auto stat = [](const wqte::Dataset& d) {
    const auto ps = wqte::fit_logistic(d.x(), d.z());
    return std::vector<double>{wqte::ow_qr(d, ps, 0.9).point};
  };
  const auto r = wqte::bootstrap(data, stat, opt);
  EXPECT_GT(r.se[0], 0.0);
  EXPECT_LE(r.ci[0].lo, r.ci[0].hi);
}

// Two-sample quantile variance with Y(j) ~ N(j, 1), e = 0.5, g = 1:
// V = tau(1-tau) [1/(0.5 f1^2) + 1/(0.5 f0^2)] with f = phi(z_tau).
double closed_form_v(double tau) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::sqrt(2.0)) < tau ? lo : hi) = mid;
  }
  const double zt = 0.5 * (lo + hi);
  const double f = std::exp(-0.5 * zt * zt) / std::sqrt(2.0 * std::numbers::pi);
  return tau * (1.0 - tau) * 2.0 * (2.0 / (f * f));
}

wqte::Dataset randomized_normal(Eigen::Index n, std::uint64_t seed) {
  auto rng = wqte::make_engine(seed, 0);
  std::normal_distribution<double> nd;
  std::bernoulli_distribution coin(0.5);
  VectorXd y(n), z(n);
  MatrixXd x(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    z[i] = coin(rng) ? 1.0 : 0.0;
    x(i, 0) = nd(rng);
    y[i] = z[i] + nd(rng);
  }
  return wqte::Dataset(y, z, wqte::ExposureKind::binary(), x);
}

wqte::PropensityModel half(Eigen::Index n) {
  wqte::PropensityModel m;
  m.scores = MatrixXd::Constant(n, 2, 0.5);
  return m;
}

TEST(PluginVariance, MatchesTwoSampleClosedForm) {
  EXPECT_NEAR(closed_form_v(0.5), 2.0 * std::numbers::pi, 1e-9);
  const Eigen::Index n = 100000;
  const auto data = randomized_normal(n, 8);
  const auto ps = half(n);
  for (double tau : {0.5, 0.9}) {
    const auto est = wqte::wqte_two_step(data, ps, wqte::TiltingSpec::uniform(), tau);
    const auto v = wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), est, tau);
    EXPECT_NEAR(v.v_tau, closed_form_v(tau), 0.15 * closed_form_v(tau)) << tau;
    EXPECT_NEAR(v.se, std::sqrt(v.v_tau / n), 1e-15);
  }
}

TEST(PluginVariance, InvariantToRescalingG) {
  const auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", 2000, 9);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::fit_logistic(data.x(), data.z());
  for (double c : {1e-3, 37.0}) {
    const auto g = wqte::TiltingSpec::overlap();
    const auto cg = wqte::TiltingSpec::from_function(
        [c](const Eigen::RowVectorXd& r) { const double e = 1.0 / (1.0 + std::exp(-r[0])); return c * e * (1.0 - e); },
        "scaled");
    // Custom g sees x; pass logit(e) as the single covariate so both specs agree.
    const VectorXd e = ps.treated_score();
    MatrixXd lx(data.x().rows(), 1);
    lx.col(0) = (e.array() / (1.0 - e.array())).log();
    const wqte::Dataset dl(data.y(), data.z(), data.kind(), lx);
    const auto est = wqte::wqte_two_step(dl, ps, g, 0.95);
    const auto est_c = wqte::wqte_two_step(dl, ps, cg, 0.95);
    EXPECT_NEAR(est_c.point, est.point, 1e-12);
    const auto v = wqte::plugin_variance(dl, ps, g, est, 0.95);
    const auto vc = wqte::plugin_variance(dl, ps, cg, est_c, 0.95);
    EXPECT_NEAR(vc.v_tau, v.v_tau, 1e-8 * v.v_tau);
  }
}

TEST(PluginVariance, InfluenceFunctionsAreMeanZero) {
  const auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", 100000, 10);
  const auto data = wqte::simulate(sc);
  const auto ps = wqte::true_propensity(sc, data.x());
  for (const auto& g : {wqte::TiltingSpec::uniform(), wqte::TiltingSpec::overlap()}) {
    const auto est = wqte::wqte_two_step(data, ps, g, 0.95);
    const auto v = wqte::plugin_variance(data, ps, g, est, 0.95);
    const double n = static_cast<double>(data.n());
    const double sd1 = std::sqrt((v.psi1.array() - v.psi1.mean()).square().sum() / (n - 1.0)) / std::sqrt(n);
    const double sd0 = std::sqrt((v.psi0.array() - v.psi0.mean()).square().sum() / (n - 1.0)) / std::sqrt(n);
    EXPECT_LE(std::abs(v.psi1.mean()), 3.0 * sd1);
    EXPECT_LE(std::abs(v.psi0.mean()), 3.0 * sd0);
    EXPECT_GT(v.density_terms[0], 0.0);
    EXPECT_GT(v.density_terms[1], 0.0);
  }
}

TEST(PluginVariance, KnownPsFormTracksSamplingSd) {
  const int reps = 100;
  const std::size_t n = 2000;
  std::vector<double> points;
  double se_known = 0.0, se_eff = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto sc = wqte::make_scenario("binary-weak-d1-nointer-pareto5", n, 300 + r);
    const auto data = wqte::simulate(sc);
    const auto ps = wqte::true_propensity(sc, data.x());
    const auto est = wqte::wqte_two_step(data, ps, wqte::TiltingSpec::uniform(), 0.95);
    points.push_back(est.point);
    se_known += wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), est, 0.95, {},
                                      wqte::InfluenceForm::kKnownPs).se / reps;
    se_eff += wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), est, 0.95).se / reps;
  }
  double mean = 0.0;
  for (double p : points) mean += p / reps;
  double ss = 0.0;
  for (double p : points) ss += (p - mean) * (p - mean);
  const double sd = std::sqrt(ss / (reps - 1));
  EXPECT_NEAR(se_known / sd, 1.0, 0.2);
  // Projection terms can only remove variance.
  EXPECT_LT(se_eff, se_known);
}

TEST(PluginVariance, ErrorsAndDeterminism) {
  const auto data = randomized_normal(500, 12);
  const auto ps = half(500);
  const auto est = wqte::wqte_two_step(data, ps, wqte::TiltingSpec::uniform(), 0.5);
  const auto a = wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), est, 0.5);
  const auto b = wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), est, 0.5);
  EXPECT_EQ(a.v_tau, b.v_tau);
  wqte::QteEstimate no_arms;
  EXPECT_THROW(wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), no_arms, 0.5), wqte::ArgumentError);
  // A bandwidth this small puts no kernel mass at a quantile sitting far from
  // every observation.
  wqte::QteEstimate far = est;
  far.arm_quantiles = std::make_pair(1e6, 1e6);
  wqte::BandwidthSpec tiny{wqte::BandwidthSpec::Rule::kFixed, 1e-3};
  EXPECT_THROW(wqte::plugin_variance(data, ps, wqte::TiltingSpec::uniform(), far, 0.5, tiny),
               wqte::VarianceUndefinedError);
  const auto ci = wqte::plugin_interval(1.0, 0.1);
  EXPECT_NEAR(ci.hi - 1.0, 0.1959963985, 1e-8);
}

}  // namespace
