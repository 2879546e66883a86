// Copyright 2026 The modebench Authors
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

#include "modebench/errors.hpp"
#include "modebench/harness.hpp"
#include "modebench/importance.hpp"
#include "modebench/smc.hpp"
#include "modebench/target.hpp"
#include "modebench/validate.hpp"

namespace modebench {
namespace {

MixtureTarget make(int d, double a) {
  TargetSpec spec;
  spec.d = d;
  spec.a = a;
  return build_target(spec);
}

GaussianParams moment_gaussian(const MixtureTarget& t) {
  const Moments m = moments(t);
  return GaussianParams::diagonal(m.mean, m.variances);
}

TEST(NextBeta, ConstantRatioJumpsToOne) {
  EXPECT_EQ(next_beta(Eigen::VectorXd::Constant(16, -3.0), 0.0, 8.0), 1.0);
}

TEST(NextBeta, TwoParticleClosedForm) {
  const double c = 5.0;
  Eigen::VectorXd r(2);
  r << 0.0, -c;
  EXPECT_NEAR(next_beta(r, 0.0, 1.6), std::log(3.0) / c, 1e-9);
  EXPECT_NEAR(next_beta(r, 0.25, 1.6), 0.25 + std::log(3.0) / c, 1e-9);
}

TEST(NextBeta, ClampedFullJump) {
  Eigen::VectorXd r(4);
  r << 0.1, -0.2, 0.3, 0.0;
  EXPECT_EQ(next_beta(r, 0.999, 2.0), 1.0);
  EXPECT_THROW(next_beta(r, 1.0, 2.0), DomainError);
}

TEST(NextBeta, HitsEssMinimum) {
  RngStream s(1);
  Eigen::VectorXd r(512);
  fill_standard_normal(s, r);
  r *= 30.0;
  const double b = next_beta(r, 0.0, 256.0);
  ASSERT_LT(b, 1.0);
  EXPECT_NEAR(ess(b * r), 256.0, 1e-6);
}

TEST(Reweight, Examples) {
  ParticleSystem sys;
  sys.positions = Eigen::MatrixXd::Zero(1, 3);
  sys.log_weights = Eigen::VectorXd::Zero(3);
  sys.log_ratio = Eigen::VectorXd(3);
  sys.log_ratio << 1.0, 2.0, 3.0;
  reweight(sys, 0.0);
  EXPECT_EQ(sys.log_weights, Eigen::VectorXd::Zero(3));
  reweight(sys, 0.5);
  Eigen::VectorXd expect(3);
  expect << 0.5, 1.0, 1.5;
  EXPECT_LE((sys.log_weights - expect).cwiseAbs().maxCoeff(), 1e-15);
  // normalized weights proportional to exp(beta * ratio)
  const Eigen::VectorXd w = normalize_log_weights(sys.log_weights);
  const double z = std::exp(0.5) + std::exp(1.0) + std::exp(1.5);
  EXPECT_NEAR(w(0), std::exp(0.5) / z, 1e-15);
  EXPECT_THROW(reweight(sys, 0.25), DomainError);
}

TEST(Reweight, Additive) {
  ParticleSystem a;
  a.log_weights = Eigen::VectorXd::Zero(4);
  a.log_ratio = Eigen::VectorXd::LinSpaced(4, -2.0, 1.0);
  ParticleSystem b = a;
  reweight(a, 0.2);
  reweight(a, 0.7);
  reweight(b, 0.7);
  EXPECT_LE((a.log_weights - b.log_weights).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Resample, DegenerateWeight) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
  w(4) = 1.0;
  RngStream s(1);
  for (Eigen::Index a : multinomial_ancestors(w, 100, s)) {
    EXPECT_EQ(a, 4);
  }
  EXPECT_THROW(multinomial_ancestors(Eigen::VectorXd::Zero(3), 3, s), DegeneracyError);
}

TEST(Resample, UniformOffspringCounts) {
  EXPECT_GT(resampling_uniformity_pvalue(8192, 1000, 7), 0.001);
}

TEST(Resample, ResetsWeights) {
  ParticleSystem sys;
  sys.positions = Eigen::MatrixXd(1, 5);
  sys.positions << 0, 1, 2, 3, 4;
  sys.log_weights = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  sys.log_ratio = sys.positions.row(0).transpose();
  RngStream s(2);
  resample_multinomial(sys, s);
  EXPECT_EQ(sys.log_weights, Eigen::VectorXd::Zero(5));
  EXPECT_NEAR(ess(sys.log_weights), 5.0, 1e-12);
  // the cached ratio travels with its particle
  EXPECT_EQ(sys.log_ratio, sys.positions.row(0).transpose());
}

TEST(RunSmc, TargetEqualsInit) {
  Eigen::VectorXd mean(2);
  mean << 1.0, -1.0;
  const GaussianParams p = GaussianParams::diagonal(mean, Eigen::VectorXd::Constant(2, 0.5));
  const GaussianDensity g(p);
  SmcConfig c;
  c.n_particles = 256;
  c.mutation_steps = 4;
  RngStream s(1);
  const SmcResult r = run_smc(g, p, c, s);
  ASSERT_EQ(r.diagnostics.betas.size(), 2U);
  EXPECT_EQ(r.diagnostics.betas[0], 0.0);
  EXPECT_EQ(r.diagnostics.betas[1], 1.0);
  EXPECT_TRUE(r.diagnostics.complete);
  EXPECT_NEAR(r.normalized_weights.sum(), 1.0, 1e-12);
}

TEST(RunSmc, RecoversWellSeparatedModes) {
  const MixtureTarget t = make(2, 10.0);
  RngStream o(1, {50});
  const double truth = true_mode_weight(t, 1000000, o).w1;
  SmcConfig c;
  c.n_particles = 2048;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    RngStream s(seed, {51});
    const SmcResult r = run_smc(t, moment_gaussian(t), c, s);
    EXPECT_TRUE(r.diagnostics.complete);
    mean += mode_weight_estimate(t, r.positions, r.normalized_weights) / 4.0;
  }
  EXPECT_NEAR(mean, truth, 0.03);
}

TEST(RunSmc, PathIncreasesToOne) {
  for (double a : {0.5, 2.875, 5.25, 7.625, 10.0}) {
    for (int d : {4, 8, 16}) {
      const MixtureTarget t = make(d, a);
      SmcConfig c;
      c.n_particles = 256;
      c.mutation_steps = 16;
      RngStream s(2, {static_cast<std::uint64_t>(d)});
      const SmcResult r = run_smc(t, moment_gaussian(t), c, s);
      const std::vector<double>& b = r.diagnostics.betas;
      ASSERT_TRUE(r.diagnostics.complete) << a << " " << d;
      EXPECT_EQ(b.back(), 1.0);
      for (std::size_t k = 1; k < b.size(); ++k) {
        EXPECT_GT(b[k], b[k - 1]);
      }
      for (double e : r.diagnostics.ess) {
        EXPECT_GE(e, 0.5 * 256 * (1.0 - 1e-6));
      }
    }
  }
}

TEST(RunSmc, Deterministic) {
  const MixtureTarget t = make(4, 2.875);
  SmcConfig c;
  c.n_particles = 128;
  c.mutation_steps = 8;
  RngStream a(3);
  RngStream b(3);
  const SmcResult ra = run_smc(t, moment_gaussian(t), c, a);
  const SmcResult rb = run_smc(t, moment_gaussian(t), c, b);
  EXPECT_EQ(ra.positions, rb.positions);
  EXPECT_EQ(ra.diagnostics.betas, rb.diagnostics.betas);
}

TEST(SmcConfig, Validation) {
  SmcConfig c;
  c.ess_threshold_alpha = 1.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SmcConfig{};
  c.n_particles = 1;
  EXPECT_THROW(c.validate(), ValidationError);
}

}  // namespace
}  // namespace modebench
