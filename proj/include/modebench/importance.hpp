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

#ifndef MODEBENCH_IMPORTANCE_HPP
#define MODEBENCH_IMPORTANCE_HPP

#include <Eigen/Core>
#include <functional>

#include "modebench/density.hpp"
#include "modebench/numerics.hpp"
#include "modebench/rng.hpp"

namespace modebench {

struct GaussianFit {
  GaussianParams params;
  bool regularized = false;  // eps I was added to a rank-deficient covariance
};

/// Unrestricted Gaussian MLE (divisor n) of d x n samples, n > d.
///
/// A covariance that fails to factor is replaced by cov + eps I with
/// eps = 1e-8 * trace / d (1e-8 when the trace vanishes).
GaussianFit fit_gaussian_mle(const Eigen::Ref<const Eigen::MatrixXd>& samples);

struct ISResult {
  double estimate = 0.0;
  Eigen::VectorXd normalized_weights;
  double weight_ess = 0.0;
  Eigen::MatrixXd samples;  // d x N proposal draws
};

using TestFunction = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

/// Self-normalized importance sampling estimate of E_pi[f] with N >= 2
/// proposal draws. Throws DegeneracyError when every weight is zero.
ISResult is_estimate(const LogDensity& target, const GaussianParams& proposal, const TestFunction& f,
                     Eigen::Index n, RngStream& stream);

/// Normalizes log weights in log-space.
Eigen::VectorXd normalize_log_weights(const Eigen::Ref<const Eigen::VectorXd>& log_weights);

/// (sum w)^2 / sum w^2 from log weights, without leaving log-space.
double ess(const Eigen::Ref<const Eigen::VectorXd>& log_weights);

}  // namespace modebench

#endif  // MODEBENCH_IMPORTANCE_HPP
