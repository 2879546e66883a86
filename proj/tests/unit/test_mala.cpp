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

#include "modebench/errors.hpp"
#include "modebench/mala.hpp"
#include "modebench/target.hpp"

namespace modebench {
namespace {

GaussianDensity standard_normal(int d) {
  return GaussianDensity(GaussianParams::diagonal(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)));
}

TEST(MalaConfig, Validation) {
  MalaConfig c;
  c.lambda_init = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = MalaConfig{};
  c.target_accept = 1.0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(MalaStep, NullMoveAlwaysAccepted) {
  const MixtureTarget t = [] {
    TargetSpec s;
    s.d = 3;
    s.a = 1.0;
    return build_target(s);
  }();
  Eigen::VectorXd x(3);
  x << 0.3, -0.2, 0.9;
  ChainState state = ChainState::start(t, x, 0.04);
  // noise that cancels the drift, so the proposal equals x
  const Eigen::VectorXd z = -std::sqrt(state.lambda / 2.0) * state.grad;
  EXPECT_TRUE(mala_step_with_noise(state, t, z, 1.0 - 1e-16));
  EXPECT_LE((state.x - x).norm(), 1e-15);
  EXPECT_EQ(mala_acceptance_probability(t, x, x, 0.04), 1.0);
}

TEST(MalaStep, HandEvaluatedAcceptance) {
  const GaussianDensity g = standard_normal(1);
  // x=0 -> x'=1 with lambda=1/4: forward N(1; 0, 1/2), reverse N(0; 3/4, 1/2)
  const double log_target = -0.5;
  const double log_forward = -0.5 * 1.0 / 0.5;
  const double log_reverse = -0.5 * 0.5625 / 0.5;
  const double expect = std::exp(log_target + log_reverse - log_forward);
  const double got = mala_acceptance_probability(g, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), 0.25);
  EXPECT_NEAR(got, expect, 1e-12);
  EXPECT_NEAR(got, std::exp(-0.0625), 1e-12);
}

TEST(MalaStep, VanishingStepAccepts) {
  const GaussianDensity g = standard_normal(4);
  RngStream s(1);
  ChainState state = ChainState::start(g, Eigen::VectorXd::Constant(4, 0.5), 1e-30);
  int accepted = 0;
  for (int i = 0; i < 100; ++i) {
    accepted += mala_step(state, g, s) ? 1 : 0;
  }
  EXPECT_EQ(accepted, 100);
  EXPECT_LE((state.x - Eigen::VectorXd::Constant(4, 0.5)).norm(), 1e-12);
}

TEST(MalaStep, AcceptanceProbabilityInUnitInterval) {
  const MixtureTarget t = [] {
    TargetSpec s;
    s.d = 4;
    s.a = 2.875;
    return build_target(s);
  }();
  RngStream s(2);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd x(4);
    Eigen::VectorXd y(4);
    fill_standard_normal(s, x);
    fill_standard_normal(s, y);
    const double p = mala_acceptance_probability(t, 3.0 * x, 3.0 * y, 0.01 + s.uniform());
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(MalaStep, NonFiniteProposalRejected) {
  const GaussianDensity g = standard_normal(1);
  ChainState state = ChainState::start(g, Eigen::VectorXd::Zero(1), 1.0);
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, std::numeric_limits<double>::infinity());
  EXPECT_FALSE(mala_step_with_noise(state, g, z, 0.5));
  EXPECT_EQ(state.x(0), 0.0);
  EXPECT_EQ(state.nonfinite_count, 1);
}

TEST(AdaptStep, Examples) {
  EXPECT_NEAR(adapt_step(1.0, true, 0.75, 0.05), std::exp(0.0125), 1e-15);
  EXPECT_NEAR(adapt_step(1.0, false, 0.75, 0.05), std::exp(-0.0375), 1e-15);
  // zero drift of log lambda at the target rate
  const double up = std::log(adapt_step(1.0, true, 0.75, 0.05));
  const double down = std::log(adapt_step(1.0, false, 0.75, 0.05));
  EXPECT_NEAR(0.75 * up + 0.25 * down, 0.0, 1e-15);
}

TEST(RunMala, StandardNormalMoments) {
  const GaussianDensity g = standard_normal(1);
  RngStream s(1, {30});
  const MalaRun run = run_mala(Eigen::VectorXd::Zero(1), g, MalaConfig{}, 4096, 1000000, s);
  const double mean = run.samples.mean();
  const double var = (run.samples.array() - mean).square().mean();
  EXPECT_LE(std::abs(mean), 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(RunMala, BimodalStaysInFirstMode) {
  TargetSpec spec;
  spec.d = 16;
  spec.a = 5.25;
  const MixtureTarget t = build_target(spec);
  RngStream s(1, {31});
  RngStream init_stream(1, {32});
  const Eigen::VectorXd init = gaussian_sample(init_stream, t.component(1), 1).col(0);
  const MalaRun run = run_mala(init, t, MalaConfig{}, 4096, 8192, s);
  for (Eigen::Index j = 0; j < run.samples.cols(); ++j) {
    ASSERT_EQ(t.mode_of(run.samples.col(j)), ModeLabel::kFirst);
  }
}

TEST(RunMala, FrozenChainReturnsInit) {
  const GaussianDensity g = standard_normal(3);
  MalaConfig c;
  c.lambda_init = 1e-30;
  RngStream s(1);
  const Eigen::VectorXd init = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);
  const MalaRun run = run_mala(init, g, c, 0, 1, s);
  ASSERT_EQ(run.samples.cols(), 1);
  EXPECT_LE((run.samples.col(0) - init).norm(), 1e-12);
}

TEST(RunMala, AdaptationHitsTargetRate) {
  for (int d : {2, 16, 64}) {
    const GaussianDensity g = standard_normal(d);
    RngStream s(1, {33, static_cast<std::uint64_t>(d)});
    const std::int64_t n_warmup = 4096;
    std::int64_t step = 0;
    int late_accepts = 0;
    int late_steps = 0;
    run_mala_chain(Eigen::VectorXd::Zero(d), g, MalaConfig{}, n_warmup, 1, s,
                   [&](const ChainState&, bool accepted, bool warmup) {
                     if (warmup && step++ >= n_warmup / 2) {
                       late_accepts += accepted ? 1 : 0;
                       ++late_steps;
                     }
                   });
    const double rate = static_cast<double>(late_accepts) / late_steps;
    EXPECT_GE(rate, 0.6) << "d=" << d;
    EXPECT_LE(rate, 0.9) << "d=" << d;
  }
}

TEST(RunMala, Deterministic) {
  const GaussianDensity g = standard_normal(5);
  RngStream a(8, {1});
  RngStream b(8, {1});
  const MalaRun ra = run_mala(Eigen::VectorXd::Zero(5), g, MalaConfig{}, 100, 200, a);
  const MalaRun rb = run_mala(Eigen::VectorXd::Zero(5), g, MalaConfig{}, 100, 200, b);
  EXPECT_EQ(ra.samples, rb.samples);
  EXPECT_EQ(ra.final_state.lambda, rb.final_state.lambda);
}

TEST(RunMala, Errors) {
  const GaussianDensity g = standard_normal(2);
  RngStream s(1);
  EXPECT_THROW(run_mala(Eigen::VectorXd::Zero(3), g, MalaConfig{}, 0, 1, s), ShapeError);
  EXPECT_THROW(run_mala(Eigen::VectorXd::Zero(2), g, MalaConfig{}, -1, 1, s), DomainError);
}

}  // namespace
}  // namespace modebench
