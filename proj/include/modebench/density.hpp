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

#ifndef MODEBENCH_DENSITY_HPP
#define MODEBENCH_DENSITY_HPP

#include <Eigen/Core>

#include "modebench/numerics.hpp"

namespace modebench {

/// Unnormalized log-density oracle with gradient.
///
/// Samplers only ever see this interface: the value of log gamma and its
/// gradient at query points.
class LogDensity {
 public:
  virtual ~LogDensity() = default;

  [[nodiscard]] virtual Eigen::Index dim() const = 0;
  [[nodiscard]] virtual double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  /// Returns the log-density at x and writes its gradient into `grad`.
  virtual double log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  Eigen::Ref<Eigen::VectorXd> grad) const = 0;
};

/// Normalized Gaussian log-density.
class GaussianDensity final : public LogDensity {
 public:
  explicit GaussianDensity(GaussianParams params);

  [[nodiscard]] Eigen::Index dim() const override { return params_.dim(); }
  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Ref<Eigen::VectorXd> grad) const override;
  [[nodiscard]] const GaussianParams& params() const { return params_; }

 private:
  GaussianParams params_;
  Eigen::VectorXd inv_variances_;
};

/// Geometric interpolation (1 - beta) log p_init + beta log gamma.
///
/// Holds references; both densities must outlive it.
class TemperedDensity final : public LogDensity {
 public:
  TemperedDensity(const LogDensity& base, const LogDensity& target, double beta);

  [[nodiscard]] Eigen::Index dim() const override { return target_->dim(); }
  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Ref<Eigen::VectorXd> grad) const override;

  [[nodiscard]] double beta() const { return beta_; }
  void set_beta(double beta);
  [[nodiscard]] const LogDensity& base() const { return *base_; }
  [[nodiscard]] const LogDensity& target() const { return *target_; }

 private:
  const LogDensity* base_;
  const LogDensity* target_;
  double beta_;
};

}  // namespace modebench

#endif  // MODEBENCH_DENSITY_HPP
