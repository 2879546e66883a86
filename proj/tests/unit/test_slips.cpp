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

#include <algorithm>
#include <cmath>

#include "modebench/errors.hpp"
#include "modebench/slips.hpp"
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

TEST(AlphaGeom, Examples) {
  EXPECT_NEAR(alpha_geom(0.5).alpha, 1.0, 1e-15);
  EXPECT_NEAR(alpha_geom(0.9).alpha, 3.0, 1e-14);
  EXPECT_NEAR(alpha_geom(0.5).alpha_dot, 2.0, 1e-14);
  const double h = 1e-6;
  const double fd = (alpha_geom(0.3 + h).alpha - alpha_geom(0.3 - h).alpha) / (2.0 * h);
  EXPECT_NEAR(alpha_geom(0.3).alpha_dot, fd, 1e-6);
}

TEST(SlipsConfig, Validation) {
  SlipsConfig c;
  c.t0 = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SlipsConfig{};
  c.t1 = 1.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = SlipsConfig{};
  c.inner_steps = -1;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Posterior, GradientMatchesFiniteDifferences) {
  const MixtureTarget t = make(4, 1.5);
  RngStream s(1);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x(4);
    Eigen::VectorXd y(4);
    fill_standard_normal(s, x);
    fill_standard_normal(s, y);
    const double time = 0.1 + 0.8 * s.uniform();
    const double alpha = alpha_geom(time).alpha;
    const PosteriorEval e = posterior_logpdf_grad(t, y, time, alpha, 1.2, x);
    const double h = 1e-5;
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp(i) += h;
      xm(i) -= h;
      const double fd = (posterior_logpdf_grad(t, y, time, alpha, 1.2, xp).log_density -
                         posterior_logpdf_grad(t, y, time, alpha, 1.2, xm).log_density) /
                        (2.0 * h);
      EXPECT_LE(std::abs(fd - e.grad(i)), 1e-5 * std::max(1.0, std::abs(e.grad(i))));
    }
  }
}

TEST(Posterior, UninformativeLimit) {
  const MixtureTarget t = make(3, 2.0);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 0.7);
  RngStream s(2);
  double ref = 0.0;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd x(3);
    fill_standard_normal(s, x);
    const double diff = posterior_logpdf_grad(t, y, 0.5, 1e-12, 1.0, x).log_density - t.log_density(x);
    if (i == 0) {
      ref = diff;
    }
    EXPECT_NEAR(diff, ref, 1e-10);
  }
}

TEST(Posterior, StationaryAtSingleComponentMode) {
  const MixtureTarget t = make(4, 10.0);
  const double time = 0.6;
  const double alpha = alpha_geom(time).alpha;
  const Eigen::VectorXd y = alpha * t.mean(1);
  const PosteriorEval e = posterior_logpdf_grad(t, y, time, alpha, 1.0, t.mean(1));
  EXPECT_LE(e.grad.norm(), 1e-6);
}

TEST(EstimateDrift, MatchesMixtureOracle) {
  const DriftCheck c = drift_oracle_check(2.875, 8, 50, 11);
  EXPECT_EQ(c.n_within, c.n_total);
  EXPECT_LE(c.worst, 0.05);
}

TEST(EstimateDrift, GaussianClosedForm) {
  Eigen::VectorXd m(2);
  m << 0.5, -1.0;
  Eigen::VectorXd v(2);
  v << 0.3, 1.5;
  const GaussianDensity prior(GaussianParams::diagonal(m, v));
  SlipsConfig c;
  c.sigma = 1.1;
  c.inner_steps = 40000;
  const double time = 0.4;
  const double alpha = alpha_geom(time).alpha;
  Eigen::VectorXd y(2);
  y << 0.2, 0.9;
  const Eigen::ArrayXd prec = 1.0 / v.array() + alpha * alpha / (c.sigma * c.sigma * time);
  const Eigen::ArrayXd post_mean =
      (m.array() / v.array() + alpha * y.array() / (c.sigma * c.sigma * time)) / prec;
  ObservationState obs;
  obs.y = y;
  obs.t = time;
  const PosteriorDensity q(prior, y, time, alpha, c.sigma);
  obs.warm_chain = ChainState::start(q, post_mean.matrix(), 0.1);
  RngStream s(1, {70});
  const Eigen::VectorXd u = estimate_drift(prior, obs, c, s);
  for (int i = 0; i < 2; ++i) {
    // generous autocorrelation allowance: effective size n/20
    EXPECT_LT(std::abs(u(i) - post_mean(i)), 4.0 * std::sqrt(20.0 / prec(i) / c.inner_steps));
  }
}

TEST(EstimateDrift, ZeroInnerStepsReturnsChain) {
  const MixtureTarget t = make(2, 1.0);
  SlipsConfig c;
  c.inner_steps = 0;
  ObservationState obs;
  obs.y = Eigen::VectorXd::Constant(2, 0.4);
  obs.t = 0.5;
  const PosteriorDensity q(t, obs.y, obs.t, 1.0, c.sigma);
  obs.warm_chain = ChainState::start(q, Eigen::VectorXd::Constant(2, -0.3), 0.1);
  RngStream s(1);
  EXPECT_EQ(estimate_drift(t, obs, c, s), Eigen::VectorXd::Constant(2, -0.3));
}

TEST(InitObservation, Moments) {
  const MixtureTarget t = make(3, 2.875);
  const Moments m = moments(t);
  const double t0 = 0.3;
  const double sigma = 1.4;
  const double alpha = alpha_geom(t0).alpha;
  RngStream s(1, {71});
  const int n = 1000000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < n; ++i) {
    sum += init_observation(m, t0, sigma, s);
  }
  sum /= n;
  for (int i = 0; i < 3; ++i) {
    const double sd = std::sqrt(alpha * alpha * m.variances(i) + sigma * sigma * t0);
    EXPECT_LT(std::abs(sum(i) - alpha * m.mean(i)), 4.0 * sd / std::sqrt(n));
  }
}

TEST(InitObservation, VanishingTime) {
  const Moments m = moments(make(3, 2.875));
  RngStream s(2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_LE(init_observation(m, 1e-10, 1.0, s).cwiseAbs().maxCoeff(), 1e-3);
  }
  RngStream a(3);
  RngStream b(3);
  EXPECT_EQ(init_observation(m, 0.2, 1.0, a), init_observation(m, 0.2, 1.0, b));
}

TEST(IntegrateObservation, FrozenDynamics) {
  Eigen::VectorXd y0(2);
  y0 << 0.3, -0.6;
  RngStream s(1);
  const DriftFn zero = [](const Eigen::VectorXd& y, double) { return Eigen::VectorXd::Zero(y.size()).eval(); };
  const Eigen::VectorXd x = integrate_observation(y0, 0.2, 0.9, 64, 0.0, zero, s);
  EXPECT_LE((x - y0 / 3.0).norm(), 1e-15);
  EXPECT_THROW(integrate_observation(y0, 0.5, 0.5, 64, 0.0, zero, s), DomainError);
}

TEST(RunSlips, GaussianTarget) {
  Eigen::VectorXd m(2);
  m << 1.0, -0.5;
  Eigen::VectorXd v(2);
  v << 0.5, 0.2;
  const GaussianDensity target(GaussianParams::diagonal(m, v));
  const Moments mom{m, v};
  SlipsConfig c;
  c.sigma = default_sigma(mom);
  // the uniform Euler grid needs fine steps near t1 where alpha_dot is large
  c.n_steps = 2048;
  const int n = 4096;
  Eigen::MatrixXd x(2, n);
  for (int i = 0; i < n; ++i) {
    RngStream s(1, {72, static_cast<std::uint64_t>(i)});
    x.col(i) = run_slips(target, mom, c, s).x;
  }
  const Eigen::VectorXd em = x.rowwise().mean();
  const Eigen::VectorXd ev = (x.colwise() - em).array().square().rowwise().mean();
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(std::abs(em(i) - m(i)), 4.0 * std::sqrt(v(i) / n));
    EXPECT_NEAR(ev(i) / v(i), 1.0, 0.1);
  }
}

TEST(RunSlips, Deterministic) {
  const MixtureTarget t = make(4, 2.875);
  const Moments m = moments(t);
  SlipsConfig c;
  c.n_steps = 32;
  RngStream a(5);
  RngStream b(5);
  EXPECT_EQ(run_slips(t, m, c, a).x, run_slips(t, m, c, b).x);
}

TEST(TuneT0, SingleCandidate) {
  const MixtureTarget t = make(2, 1.0);
  SlipsConfig c;
  c.n_steps = 16;
  RngStream s(1);
  EXPECT_EQ(tune_t0(t, 0.6, {0.25}, c, 4, s).t0, 0.25);
  EXPECT_THROW(tune_t0(t, 0.6, {}, c, 4, s), DomainError);
}

TEST(TuneT0, TiesGoToSmallest) {
  // coincident components: every draw lands in mode 2, so every candidate has error 0
  const Eigen::VectorXd v = Eigen::VectorXd::Constant(2, 0.2);
  const MixtureTarget t(0.5, Eigen::VectorXd::Zero(2), v, Eigen::VectorXd::Zero(2), v);
  SlipsConfig c;
  c.n_steps = 16;
  RngStream s(2);
  const T0Tuning r = tune_t0(t, 0.0, {0.4, 0.2, 0.3}, c, 8, s);
  EXPECT_EQ(r.t0, 0.2);
  for (double e : r.pilot_errors) {
    EXPECT_EQ(e, 0.0);
  }
}

TEST(TuneT0, SelectsArgmin) {
  const MixtureTarget t = make(8, 5.25);
  RngStream o(1, {73});
  const double w1 = true_mode_weight(t, 1000000, o).w1;
  SlipsConfig c;
  c.sigma = default_sigma(moments(t));
  c.n_steps = 128;
  RngStream s(1, {74});
  const T0Tuning r = tune_t0(t, w1, {0.1, 0.2, 0.3, 0.4, 0.5}, c, 48, s);
  ASSERT_EQ(r.pilot_errors.size(), 5U);
  const auto best = std::min_element(r.pilot_errors.begin(), r.pilot_errors.end());
  EXPECT_EQ(r.t0, r.candidates[static_cast<std::size_t>(best - r.pilot_errors.begin())]);
  for (double e : r.pilot_errors) {
    EXPECT_LE(*best, e);
  }
}

}  // namespace
}  // namespace modebench
