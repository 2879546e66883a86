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

#include "modebench/density.hpp"

#include "modebench/errors.hpp"

namespace modebench {

GaussianDensity::GaussianDensity(GaussianParams params) : params_(std::move(params)) {
  if (params_.is_diagonal()) {
    inv_variances_ = params_.variances().cwiseInverse();
  }
}

double GaussianDensity::log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (params_.is_diagonal()) {
    if (x.size() != params_.dim()) {
      throw ShapeError("GaussianDensity: dimension mismatch");
    }
    return params_.log_normalizer() -
           0.5 * ((x - params_.mean()).array().square() / params_.variances().array()).sum();
  }
  return gaussian_logpdf(x, params_);
}

double GaussianDensity::log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                                         Eigen::Ref<Eigen::VectorXd> grad) const {
  if (x.size() != params_.dim() || grad.size() != params_.dim()) {
    throw ShapeError("GaussianDensity: dimension mismatch");
  }
  if (params_.is_diagonal()) {
    grad = (params_.mean() - x).cwiseProduct(inv_variances_);
    return params_.log_normalizer() -
           0.5 * ((x - params_.mean()).array().square() / params_.variances().array()).sum();
  }
  const auto lower = params_.factor().triangularView<Eigen::Lower>();
  const Eigen::VectorXd white = lower.solve(x - params_.mean());
  grad = -lower.transpose().solve(white);
  return params_.log_normalizer() - 0.5 * white.squaredNorm();
}

TemperedDensity::TemperedDensity(const LogDensity& base, const LogDensity& target, double beta)
    : base_(&base), target_(&target), beta_(0.0) {
  if (base.dim() != target.dim()) {
    throw ShapeError("TemperedDensity: base and target dimensions differ");
  }
  set_beta(beta);
}

void TemperedDensity::set_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw DomainError("TemperedDensity: beta must lie in [0, 1]");
  }
  beta_ = beta;
}

double TemperedDensity::log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (beta_ == 0.0) {
    return base_->log_density(x);
  }
  if (beta_ == 1.0) {
    return target_->log_density(x);
  }
  return (1.0 - beta_) * base_->log_density(x) + beta_ * target_->log_density(x);
}

double TemperedDensity::log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                                         Eigen::Ref<Eigen::VectorXd> grad) const {
  if (beta_ == 0.0) {
    return base_->log_density_grad(x, grad);
  }
  if (beta_ == 1.0) {
    return target_->log_density_grad(x, grad);
  }
  thread_local Eigen::VectorXd g_base;
  g_base.resize(x.size());
  const double l_base = base_->log_density_grad(x, g_base);
  const double l_target = target_->log_density_grad(x, grad);
  grad = (1.0 - beta_) * g_base + beta_ * grad;
  return (1.0 - beta_) * l_base + beta_ * l_target;
}

}  // namespace modebench
