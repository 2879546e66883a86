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

#include "modebench/target.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "modebench/errors.hpp"

namespace modebench {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double log_normalizer(const Eigen::VectorXd& var) {
  return -0.5 * (static_cast<double>(var.size()) * kLog2Pi + var.array().log().sum());
}

void check_dim(const MixtureTarget& target, Eigen::Index n) {
  if (n != target.dim()) {
    throw ShapeError("mixture target: dimension mismatch");
  }
}

Eigen::MatrixXd sample_mixture(const MixtureTarget& target, double w, Eigen::Index n,
                               RngStream& stream) {
  if (n < 1) {
    throw DomainError("mixture sampling: n must be positive");
  }
  const Eigen::Index d = target.dim();
  const Eigen::VectorXd sd1 = target.variances(1).cwiseSqrt();
  const Eigen::VectorXd sd2 = target.variances(2).cwiseSqrt();
  Eigen::MatrixXd out(d, n);
  Eigen::VectorXd z(d);
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool first = stream.uniform() < w;
    fill_standard_normal(stream, z);
    if (first) {
      out.col(j) = target.mean(1) + sd1.cwiseProduct(z);
    } else {
      out.col(j) = target.mean(2) + sd2.cwiseProduct(z);
    }
  }
  return out;
}

}  // namespace

void TargetSpec::validate() const {
  if (d < 1) {
    throw ValidationError("TargetSpec: d must be >= 1");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("TargetSpec: a must be positive");
  }
  if (!(w > 0.0 && w < 1.0)) {
    throw ValidationError("TargetSpec: w must lie in (0, 1)");
  }
  if (!(sigma_min_sq > 0.0 && sigma_min_sq <= sigma_max_sq) || !std::isfinite(sigma_max_sq)) {
    throw ValidationError("TargetSpec: need 0 < sigma_min_sq <= sigma_max_sq");
  }
}

MixtureTarget::MixtureTarget(double w, Eigen::VectorXd mu1, Eigen::VectorXd var1,
                             Eigen::VectorXd mu2, Eigen::VectorXd var2)
    : w_(w),
      log_w1_(std::log(w)),
      log_w2_(std::log1p(-w)),
      mu1_(std::move(mu1)),
      var1_(std::move(var1)),
      mu2_(std::move(mu2)),
      var2_(std::move(var2)) {
  if (!(w > 0.0 && w < 1.0)) {
    throw ValidationError("MixtureTarget: w must lie in (0, 1)");
  }
  const Eigen::Index d = mu1_.size();
  if (d < 1 || var1_.size() != d || mu2_.size() != d || var2_.size() != d) {
    throw ShapeError("MixtureTarget: component shapes disagree");
  }
  if (!(var1_.array() > 0.0).all() || !(var2_.array() > 0.0).all()) {
    throw ValidationError("MixtureTarget: variances must be positive");
  }
  inv1_ = var1_.cwiseInverse();
  inv2_ = var2_.cwiseInverse();
  norm1_ = log_normalizer(var1_);
  norm2_ = log_normalizer(var2_);
}

double MixtureTarget::log_component(int k, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dim(*this, x.size());
  if (k == 1) {
    return norm1_ - 0.5 * ((x - mu1_).array().square() * inv1_.array()).sum();
  }
  return norm2_ - 0.5 * ((x - mu2_).array().square() * inv2_.array()).sum();
}

double MixtureTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const std::array<double, 2> terms{log_w1_ + log_component(1, x), log_w2_ + log_component(2, x)};
  return logsumexp(terms);
}

double MixtureTarget::log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                                       Eigen::Ref<Eigen::VectorXd> grad) const {
  check_dim(*this, grad.size());
  const double l1 = log_w1_ + log_component(1, x);
  const double l2 = log_w2_ + log_component(2, x);
  const double hi = std::max(l1, l2);
  const double lse = hi + std::log(std::exp(l1 - hi) + std::exp(l2 - hi));
  const double r1 = std::exp(l1 - lse);
  const double r2 = std::exp(l2 - lse);
  grad = r1 * (mu1_ - x).cwiseProduct(inv1_) + r2 * (mu2_ - x).cwiseProduct(inv2_);
  return lse;
}

ModeLabel MixtureTarget::mode_of(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return log_component(1, x) > log_component(2, x) ? ModeLabel::kFirst : ModeLabel::kSecond;
}

GaussianParams MixtureTarget::component(int k) const {
  return GaussianParams::diagonal(mean(k), variances(k));
}

Eigen::VectorXd benchmark_variances(const TargetSpec& spec) {
  const int d = spec.d;
  Eigen::VectorXd var(d);
  for (int i = 1; i <= d; ++i) {
    const double frac = static_cast<double>(i) / d;
    var[i - 1] = frac * spec.sigma_max_sq + (1.0 - frac) * spec.sigma_min_sq;
  }
  return var;
}

MixtureTarget build_target(const TargetSpec& spec) {
  spec.validate();
  const Eigen::VectorXd var1 = benchmark_variances(spec);
  const Eigen::VectorXd var2 = var1.reverse();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(spec.d);
  return MixtureTarget(spec.w, -spec.a * ones, var1, spec.a * ones, var2);
}

Eigen::VectorXd grad_log_gamma(const MixtureTarget& target, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd g(target.dim());
  target.log_density_grad(x, g);
  return g;
}

Eigen::MatrixXd exact_sample(const MixtureTarget& target, Eigen::Index n, RngStream& stream) {
  return sample_mixture(target, target.weight(), n, stream);
}

Eigen::MatrixXd equilibrated_sample(const MixtureTarget& target, Eigen::Index n, RngStream& stream) {
  return sample_mixture(target, 0.5, n, stream);
}

Moments moments(const MixtureTarget& target) {
  const double w = target.weight();
  Moments m;
  m.mean = w * target.mean(1) + (1.0 - w) * target.mean(2);
  m.variances =
      w * (target.variances(1).array() + (target.mean(1) - m.mean).array().square()) +
      (1.0 - w) * (target.variances(2).array() + (target.mean(2) - m.mean).array().square());
  return m;
}

ModeWeightOracle true_mode_weight(const MixtureTarget& target, std::int64_t n_oracle,
                                  RngStream& stream) {
  if (n_oracle < 10000) {
    throw DomainError("true_mode_weight: n_oracle must be at least 1e4");
  }
  const Eigen::Index d = target.dim();
  const Eigen::VectorXd sd1 = target.variances(1).cwiseSqrt();
  const Eigen::VectorXd sd2 = target.variances(2).cwiseSqrt();
  Eigen::VectorXd z(d);
  Eigen::VectorXd x(d);
  std::int64_t hits = 0;
  for (std::int64_t j = 0; j < n_oracle; ++j) {
    const bool first = stream.uniform() < target.weight();
    fill_standard_normal(stream, z);
    if (first) {
      x = target.mean(1) + sd1.cwiseProduct(z);
    } else {
      x = target.mean(2) + sd2.cwiseProduct(z);
    }
    if (target.mode_of(x) == ModeLabel::kFirst) {
      ++hits;
    }
  }
  const double n = static_cast<double>(n_oracle);
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

Eigen::VectorXd posterior_mean_oracle(const MixtureTarget& target,
                                      const Eigen::Ref<const Eigen::VectorXd>& y, double t,
                                      double alpha, double sigma) {
  if (!(t > 0.0)) {
    throw DomainError("posterior_mean_oracle: t must be positive");
  }
  if (!(alpha > 0.0) || !(sigma > 0.0)) {
    throw DomainError("posterior_mean_oracle: alpha and sigma must be positive");
  }
  check_dim(target, y.size());
  const double noise_var = sigma * sigma * t;
  std::array<double, 2> log_weights{};
  std::array<Eigen::VectorXd, 2> means;
  for (int k = 1; k <= 2; ++k) {
    const Eigen::ArrayXd prior_prec = target.variances(k).cwiseInverse().array();
    const Eigen::ArrayXd post_prec = prior_prec + alpha * alpha / noise_var;
    means[k - 1] = ((prior_prec * target.mean(k).array() + (alpha / noise_var) * y.array()) / post_prec)
                       .matrix();
    // marginal of y under component k: N(alpha mu_k, alpha^2 Sigma_k + sigma^2 t I)
    const Eigen::VectorXd marg_var =
        (alpha * alpha * target.variances(k).array() + noise_var).matrix();
    const double lw = k == 1 ? std::log(target.weight()) : std::log1p(-target.weight());
    log_weights[k - 1] =
        lw + gaussian_logpdf(y, GaussianParams::diagonal(alpha * target.mean(k), marg_var));
  }
  const double lse = logsumexp(log_weights);
  return std::exp(log_weights[0] - lse) * means[0] + std::exp(log_weights[1] - lse) * means[1];
}

}  // namespace modebench
