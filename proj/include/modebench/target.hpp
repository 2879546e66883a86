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

#ifndef MODEBENCH_TARGET_HPP
#define MODEBENCH_TARGET_HPP

#include <Eigen/Core>

#include "modebench/density.hpp"
#include "modebench/numerics.hpp"
#include "modebench/rng.hpp"

namespace modebench {

/// Parameters of the bi-modal benchmark mixture.
struct TargetSpec {
  int d = 1;
  double a = 1.0;  // mode half-separation: means at -a 1_d and +a 1_d
  double w = 2.0 / 3.0;
  double sigma_min_sq = 0.01;
  double sigma_max_sq = 0.2;

  /// Throws ValidationError unless d >= 1, a > 0, w in (0, 1), 0 < min <= max.
  void validate() const;
};

/// Partition element: kFirst iff log q1(x) > log q2(x) (ties go to kSecond).
enum class ModeLabel : int { kFirst = 1, kSecond = 2 };

/// First two moments of the mixture, covariance reduced to its diagonal.
struct Moments {
  Eigen::VectorXd mean;
  Eigen::VectorXd variances;
};

/// Monte Carlo estimate of the first mode weight with its standard error.
struct ModeWeightOracle {
  double w1 = 0.0;
  double std_error = 0.0;
};

/// Two-component mixture with diagonal Gaussian components,
/// w N(mu1, diag var1) + (1 - w) N(mu2, diag var2).
///
/// Immutable after construction. As a LogDensity it is the black-box oracle
/// handed to samplers; the component accessors and the free functions below
/// are privileged and used only on the evaluation side.
class MixtureTarget final : public LogDensity {
 public:
  MixtureTarget(double w, Eigen::VectorXd mu1, Eigen::VectorXd var1, Eigen::VectorXd mu2,
                Eigen::VectorXd var2);

  [[nodiscard]] Eigen::Index dim() const override { return mu1_.size(); }
  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Ref<Eigen::VectorXd> grad) const override;

  /// log q_k(x) for component k in {1, 2} (unweighted).
  [[nodiscard]] double log_component(int k, const Eigen::Ref<const Eigen::VectorXd>& x) const;
  [[nodiscard]] ModeLabel mode_of(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  [[nodiscard]] double weight() const { return w_; }
  [[nodiscard]] const Eigen::VectorXd& mean(int k) const { return k == 1 ? mu1_ : mu2_; }
  [[nodiscard]] const Eigen::VectorXd& variances(int k) const { return k == 1 ? var1_ : var2_; }
  [[nodiscard]] GaussianParams component(int k) const;

 private:
  double w_;
  double log_w1_;
  double log_w2_;
  Eigen::VectorXd mu1_, var1_, inv1_;
  Eigen::VectorXd mu2_, var2_, inv2_;
  double norm1_;
  double norm2_;
};

/// Benchmark mixture: Sigma1 interpolates linearly from sigma_min_sq to
/// sigma_max_sq along the coordinates, Sigma2 is its coordinate reversal.
MixtureTarget build_target(const TargetSpec& spec);

/// Component-1 diagonal variances (Sigma1)_ii = (i/d) max + ((d - i)/d) min.
Eigen::VectorXd benchmark_variances(const TargetSpec& spec);

/// Gradient of log gamma (free-function form of log_density_grad).
Eigen::VectorXd grad_log_gamma(const MixtureTarget& target, const Eigen::Ref<const Eigen::VectorXd>& x);

// ---- privileged evaluation-side oracles -----------------------------------

/// i.i.d. draws from the mixture, one per column.
Eigen::MatrixXd exact_sample(const MixtureTarget& target, Eigen::Index n, RngStream& stream);

/// i.i.d. draws from the equal-weight mixture (q1 + q2) / 2.
Eigen::MatrixXd equilibrated_sample(const MixtureTarget& target, Eigen::Index n, RngStream& stream);

/// Exact mean and diagonal marginal variances.
Moments moments(const MixtureTarget& target);

/// Fraction of n_oracle exact draws falling in S1; n_oracle >= 1e4.
ModeWeightOracle true_mode_weight(const MixtureTarget& target, std::int64_t n_oracle,
                                  RngStream& stream);

/// E[X | Y_t = y] for the observation Y_t = alpha X + sigma W_t, in closed form.
Eigen::VectorXd posterior_mean_oracle(const MixtureTarget& target,
                                      const Eigen::Ref<const Eigen::VectorXd>& y, double t,
                                      double alpha, double sigma);

}  // namespace modebench

#endif  // MODEBENCH_TARGET_HPP
