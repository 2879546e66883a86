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
#include <limits>
#include <vector>

#include "modebench/errors.hpp"
#include "modebench/importance.hpp"
#include "modebench/target.hpp"
#include "modebench/variational.hpp"

namespace modebench {
namespace {

class ShiftedDensity final : public LogDensity {
 public:
  ShiftedDensity(const LogDensity& base, double shift) : base_(&base), shift_(shift) {}
  [[nodiscard]] Eigen::Index dim() const override { return base_->dim(); }
  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override {
    return base_->log_density(x) + shift_;
  }
  double log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Ref<Eigen::VectorXd> grad) const override {
    return base_->log_density_grad(x, grad) + shift_;
  }

 private:
  const LogDensity* base_;
  double shift_;
};

MixtureTarget make(int d, double a) {
  TargetSpec spec;
  spec.d = d;
  spec.a = a;
  return build_target(spec);
}

double in_first(const MixtureTarget& t, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return t.mode_of(x) == ModeLabel::kFirst ? 1.0 : 0.0;
}

TEST(Ess, Examples) {
  EXPECT_NEAR(ess(Eigen::VectorXd::Zero(4)), 4.0, 1e-12);
  const double ninf = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd one(4);
  one << 0.0, ninf, ninf, ninf;
  EXPECT_NEAR(ess(one), 1.0, 1e-12);
  Eigen::VectorXd w(4);
  w << std::log(2.0), 0.0, 0.0, ninf;
  EXPECT_NEAR(ess(w), 16.0 / 6.0, 1e-12);
  EXPECT_THROW(ess(Eigen::VectorXd::Constant(3, ninf)), DegeneracyError);
}

TEST(FitGaussianMle, ConstantSampleRegularized) {
  Eigen::VectorXd v(3);
  v << 1.0, -2.0, 0.5;
  const Eigen::MatrixXd x = v.replicate(1, 10);
  const GaussianFit fit = fit_gaussian_mle(x);
  EXPECT_TRUE(fit.regularized);
  EXPECT_LE((fit.params.mean() - v).norm(), 1e-14);
  const Eigen::MatrixXd cov = fit.params.covariance();
  EXPECT_TRUE(cov.isApprox(1e-8 * Eigen::MatrixXd::Identity(3, 3), 1e-10));
}

TEST(FitGaussianMle, TwoPointSample) {
  Eigen::VectorXd u(2);
  u << 1.0, 2.0;
  Eigen::MatrixXd x(2, 4);
  x << u, -u, u, -u;
  const GaussianFit fit = fit_gaussian_mle(x);
  EXPECT_TRUE(fit.regularized);
  EXPECT_LE(fit.params.mean().norm(), 1e-15);
  const double eps = 1e-8 * u.squaredNorm() / 2.0;
  const Eigen::MatrixXd expect = u * u.transpose() + eps * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_TRUE(fit.params.covariance().isApprox(expect, 1e-9));
}

TEST(FitGaussianMle, RecoversParameters) {
  Eigen::VectorXd m(3);
  m << 1.0, -1.0, 0.5;
  Eigen::MatrixXd cov(3, 3);
  cov << 2.0, 0.3, 0.0, 0.3, 1.0, -0.2, 0.0, -0.2, 0.5;
  const GaussianParams p = GaussianParams::from_covariance(m, cov);
  RngStream s(1, {40});
  const Eigen::Index n = 1000000;
  const GaussianFit fit = fit_gaussian_mle(gaussian_sample(s, p, n));
  EXPECT_FALSE(fit.regularized);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(fit.params.mean()(i) - m(i)), 4.0 * std::sqrt(cov(i, i) / static_cast<double>(n)));
  }
  const Eigen::MatrixXd est = fit.params.covariance();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // off-diagonal tolerance relative to the diagonal scale
      EXPECT_LE(std::abs(est(i, j) - cov(i, j)), 0.05 * std::sqrt(cov(i, i) * cov(j, j)));
    }
  }
  EXPECT_THROW(fit_gaussian_mle(Eigen::MatrixXd::Zero(3, 3)), DomainError);
}

TEST(IsEstimate, ConstantFunctionIsExact) {
  const MixtureTarget t = make(4, 2.875);
  const Moments m = moments(t);
  RngStream s(1);
  const ISResult r = is_estimate(t, GaussianParams::diagonal(m.mean, m.variances),
                                 [](const auto&) { return 1.0; }, 4096, s);
  EXPECT_NEAR(r.estimate, 1.0, 1e-12);
  EXPECT_NEAR(r.normalized_weights.sum(), 1.0, 1e-12);
  EXPECT_GE(r.normalized_weights.minCoeff(), 0.0);
  EXPECT_GE(r.weight_ess, 1.0);
  EXPECT_LE(r.weight_ess, 4096.0);
}

TEST(IsEstimate, ProposalEqualsTarget) {
  Eigen::VectorXd mean(2);
  mean << 0.5, -0.5;
  const GaussianParams p = GaussianParams::diagonal(mean, Eigen::VectorXd::Constant(2, 0.3));
  const GaussianDensity g(p);
  RngStream s(2);
  const ISResult r = is_estimate(g, p, [](const auto& x) { return x(0); }, 1000, s);
  EXPECT_LE((r.normalized_weights.array() - 1e-3).abs().maxCoeff(), 1e-15);
  EXPECT_NEAR(r.estimate, r.samples.row(0).mean(), 1e-12);
  EXPECT_NEAR(r.weight_ess, 1000.0, 1e-9);
}

TEST(IsEstimate, SymmetricHalf) {
  const GaussianDensity target(GaussianParams::diagonal(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)));
  const GaussianParams proposal = GaussianParams::diagonal(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 2.0));
  RngStream s(1, {41});
  const Eigen::Index n = 1000000;
  const ISResult r = is_estimate(target, proposal, [](const auto& x) { return x(0) > 0.0 ? 1.0 : 0.0; }, n, s);
  // self-normalized standard error
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f = r.samples(0, i) > 0.0 ? 1.0 : 0.0;
    var += r.normalized_weights(i) * r.normalized_weights(i) * (f - r.estimate) * (f - r.estimate);
  }
  EXPECT_LT(std::abs(r.estimate - 0.5), 4.0 * std::sqrt(var));
}

TEST(IsEstimate, ShiftInvariance) {
  const MixtureTarget t = make(4, 2.875);
  const ShiftedDensity shifted(t, 123.5);
  const Moments m = moments(t);
  const GaussianParams p = GaussianParams::diagonal(m.mean, m.variances);
  const auto f = [&](const Eigen::Ref<const Eigen::VectorXd>& x) { return in_first(t, x); };
  RngStream a(3);
  RngStream b(3);
  const ISResult ra = is_estimate(t, p, f, 4096, a);
  const ISResult rb = is_estimate(shifted, p, f, 4096, b);
  EXPECT_NEAR(ra.estimate, rb.estimate, 1e-12);
  EXPECT_NEAR(ra.weight_ess, rb.weight_ess, 1e-9);
}

TEST(IsEstimate, WeightEssDecreasesWithDimension) {
  std::vector<double> medians;
  for (int d : {4, 16, 64}) {
    const MixtureTarget t = make(d, 5.25);
    std::vector<double> values;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RngStream s(seed, {42, static_cast<std::uint64_t>(d)});
      const GaussianParams p = fit_gaussian_mle(equilibrated_sample(t, 16384, s)).params;
      values.push_back(is_estimate(t, p, [&](const auto& x) { return in_first(t, x); }, 2048, s).weight_ess);
    }
    std::nth_element(values.begin(), values.begin() + 10, values.end());
    medians.push_back(values[10]);
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}

TEST(ViLossGrad, ZeroAtOptimum) {
  Eigen::VectorXd mu(3);
  mu << 0.5, -1.0, 2.0;
  Eigen::VectorXd rho(3);
  rho << -0.5, 0.0, 0.3;
  const GaussianDensity target(GaussianParams::diagonal(mu, (2.0 * rho).array().exp().matrix()));
  RngStream s(1, {43});
  const ViLossGrad lg = vi_loss_and_grad(ViParams{mu, rho}, target, 100000, s);
  // per-sample gradient sd is exp(-rho) for mu and sqrt(2) for rho
  const double n = 100000.0;
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(lg.grad_mu(i)), 4.0 * std::exp(-rho(i)) / std::sqrt(n));
    EXPECT_LT(std::abs(lg.grad_rho(i)), 4.0 * std::sqrt(2.0) / std::sqrt(n));
  }
}

TEST(ViLossGrad, MatchesFiniteDifferences) {
  const MixtureTarget t = make(4, 1.0);
  Eigen::VectorXd mu(4);
  mu << -0.3, 0.1, 0.4, -0.8;
  const Eigen::VectorXd rho = Eigen::VectorXd::Constant(4, -1.0);
  RngStream s(4);
  Eigen::MatrixXd noise(4, 64);
  for (Eigen::Index j = 0; j < noise.cols(); ++j) {
    fill_standard_normal(s, noise.col(j));
  }
  const ViLossGrad lg = vi_loss_and_grad(ViParams{mu, rho}, t, noise);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    ViParams p{mu, rho};
    ViParams m{mu, rho};
    p.mu(i) += h;
    m.mu(i) -= h;
    const double fd = (vi_loss_and_grad(p, t, noise).loss - vi_loss_and_grad(m, t, noise).loss) / (2.0 * h);
    EXPECT_LE(std::abs(fd - lg.grad_mu(i)), 1e-5 * std::max(1.0, std::abs(lg.grad_mu(i))));
    ViParams pr{mu, rho};
    ViParams mr{mu, rho};
    pr.rho(i) += h;
    mr.rho(i) -= h;
    const double fdr = (vi_loss_and_grad(pr, t, noise).loss - vi_loss_and_grad(mr, t, noise).loss) / (2.0 * h);
    EXPECT_LE(std::abs(fdr - lg.grad_rho(i)), 1e-5 * std::max(1.0, std::abs(lg.grad_rho(i))));
  }
}

TEST(ViLossGrad, CollapseLimit) {
  const MixtureTarget t = make(3, 2.0);
  RngStream s(5);
  const ViLossGrad lg = vi_loss_and_grad(ViParams{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Constant(3, -20.0)},
                                         t, 256, s);
  EXPECT_LE((lg.grad_rho.array() + 1.0).abs().maxCoeff(), 1e-6);
}

TEST(ViOptimize, RecoversGaussian) {
  Eigen::VectorXd mu(4);
  mu << 1.0, -0.5, 0.0, 2.0;
  Eigen::VectorXd var(4);
  var << 0.5, 1.0, 2.0, 0.25;
  const GaussianDensity target(GaussianParams::diagonal(mu, var));
  RngStream s(1, {44});
  ViConfig c;
  c.batch = 256;
  const ViResult r =
      vi_optimize(target, ViParams{(mu.array() + 1.0).matrix(), Eigen::VectorXd::Zero(4)}, c, s);
  EXPECT_LE((r.params.mu - mu).cwiseAbs().maxCoeff(), 0.05);
  const Eigen::VectorXd fitted = (2.0 * r.params.rho).array().exp().matrix();
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(fitted(i) / var(i), 1.0, 0.1);
  }
  ASSERT_EQ(r.loss_trace.size(), 2048U);
  double first = 0.0;
  double last = 0.0;
  for (int i = 0; i < 100; ++i) {
    first += r.loss_trace[i];
    last += r.loss_trace[r.loss_trace.size() - 1 - i];
  }
  EXPECT_LT(last, first);
}

TEST(ViOptimize, CollapsesOnBimodal) {
  const MixtureTarget t = make(8, 5.25);
  const Moments m = moments(t);
  RngStream s(1, {45});
  ViConfig c;
  c.batch = 256;
  c.iters = 1024;
  const ViResult r = vi_optimize(t, ViParams{m.mean, (0.5 * m.variances.array().log()).matrix()}, c, s);
  const Eigen::MatrixXd x = vi_sample(r.params, 2048, s);
  double w1 = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    w1 += in_first(t, x.col(j));
  }
  w1 /= static_cast<double>(x.cols());
  EXPECT_TRUE(w1 <= 0.01 || w1 >= 0.99) << w1;
}

TEST(ViOptimize, ZeroIterationsReturnsInit) {
  const MixtureTarget t = make(2, 1.0);
  const ViParams init{Eigen::VectorXd::Constant(2, 0.25), Eigen::VectorXd::Constant(2, -0.5)};
  ViConfig c;
  c.iters = 0;
  RngStream s(1);
  const ViResult r = vi_optimize(t, init, c, s);
  EXPECT_EQ(r.params.mu, init.mu);
  EXPECT_EQ(r.params.rho, init.rho);
  EXPECT_TRUE(r.loss_trace.empty());
}

}  // namespace
}  // namespace modebench
