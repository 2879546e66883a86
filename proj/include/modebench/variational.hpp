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

#ifndef MODEBENCH_VARIATIONAL_HPP
#define MODEBENCH_VARIATIONAL_HPP

#include <Eigen/Core>
#include <vector>

#include "modebench/density.hpp"
#include "modebench/rng.hpp"

namespace modebench {

/// Diagonal Gaussian variational family: mean mu, log-standard-deviations rho.
struct ViParams {
  Eigen::VectorXd mu;
  Eigen::VectorXd rho;
};

struct ViLossGrad {
  double loss = 0.0;  // reverse KL up to the log normalizer of gamma
  Eigen::VectorXd grad_mu;
  Eigen::VectorXd grad_rho;
};

/// Reparameterized Monte Carlo estimate of KL(nu_theta | pi) and its gradient,
/// using x = mu + exp(rho) * z and the analytic entropy of nu_theta.
ViLossGrad vi_loss_and_grad(const ViParams& params, const LogDensity& target, Eigen::Index batch_size,
                            RngStream& stream);

/// Same estimate with the standard normal draws supplied (d x batch).
ViLossGrad vi_loss_and_grad(const ViParams& params, const LogDensity& target,
                            const Eigen::Ref<const Eigen::MatrixXd>& noise);

/// Adam defaults; the learning rate is ours, not a published value.
struct ViConfig {
  int iters = 2048;
  int batch = 2048;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct ViResult {
  ViParams params;
  std::vector<double> loss_trace;
};

/// Minimizes the reverse KL with Adam steps. Throws NumericError on a
/// non-finite loss.
ViResult vi_optimize(const LogDensity& target, ViParams init, const ViConfig& config, RngStream& stream);

/// n draws from the fitted variational distribution, one per column.
Eigen::MatrixXd vi_sample(const ViParams& params, Eigen::Index n, RngStream& stream);

}  // namespace modebench

#endif  // MODEBENCH_VARIATIONAL_HPP
