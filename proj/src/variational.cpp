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

#include "modebench/variational.hpp"

#include <cmath>
#include <string>

#include "modebench/errors.hpp"
#include "modebench/numerics.hpp"

namespace modebench {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_params(const ViParams& params, const LogDensity& target) {
  if (params.mu.size() != target.dim() || params.rho.size() != target.dim()) {
    throw ShapeError("vi: parameter dimension mismatch");
  }
}

}  // namespace

ViLossGrad vi_loss_and_grad(const ViParams& params, const LogDensity& target,
                            const Eigen::Ref<const Eigen::MatrixXd>& noise) {
  check_params(params, target);
  const Eigen::Index d = params.mu.size();
  const Eigen::Index batch = noise.cols();
  if (batch < 1 || noise.rows() != d) {
    throw ShapeError("vi_loss_and_grad: noise must be d x batch with batch >= 1");
  }
  const Eigen::VectorXd scale = params.rho.array().exp().matrix();
  Eigen::VectorXd x(d);
  Eigen::VectorXd g(d);
  Eigen::VectorXd sum_g = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sum_gz = Eigen::VectorXd::Zero(d);
  double sum_log = 0.0;
  for (Eigen::Index j = 0; j < batch; ++j) {
    x = params.mu + scale.cwiseProduct(noise.col(j));
    sum_log += target.log_density_grad(x, g);
    sum_g += g;
    sum_gz += g.cwiseProduct(noise.col(j));
  }
  const double inv_b = 1.0 / static_cast<double>(batch);
  const double entropy = 0.5 * static_cast<double>(d) * (1.0 + kLog2Pi) + params.rho.sum();
  ViLossGrad out;
  out.loss = -entropy - sum_log * inv_b;
  out.grad_mu = -sum_g * inv_b;
  out.grad_rho = (-1.0 - (sum_gz * inv_b).cwiseProduct(scale).array()).matrix();
  return out;
}

ViLossGrad vi_loss_and_grad(const ViParams& params, const LogDensity& target, Eigen::Index batch_size,
                            RngStream& stream) {
  if (batch_size < 1) {
    throw DomainError("vi_loss_and_grad: batch_size must be >= 1");
  }
  Eigen::MatrixXd noise(params.mu.size(), batch_size);
  for (Eigen::Index j = 0; j < batch_size; ++j) {
    for (Eigen::Index i = 0; i < noise.rows(); ++i) {
      noise(i, j) = stream.normal();
    }
  }
  return vi_loss_and_grad(params, target, noise);
}

ViResult vi_optimize(const LogDensity& target, ViParams init, const ViConfig& config, RngStream& stream) {
  check_params(init, target);
  if (config.iters < 0 || config.batch < 1) {
    throw DomainError("vi_optimize: need iters >= 0 and batch >= 1");
  }
  const Eigen::Index d = init.mu.size();
  ViResult result{std::move(init), {}};
  result.loss_trace.reserve(static_cast<std::size_t>(config.iters));
  Eigen::VectorXd m_mu = Eigen::VectorXd::Zero(d), v_mu = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd m_rho = Eigen::VectorXd::Zero(d), v_rho = Eigen::VectorXd::Zero(d);
  double b1_pow = 1.0;
  double b2_pow = 1.0;
  for (int it = 0; it < config.iters; ++it) {
    const ViLossGrad lg = vi_loss_and_grad(result.params, target, config.batch, stream);
    if (!std::isfinite(lg.loss) || !lg.grad_mu.allFinite() || !lg.grad_rho.allFinite()) {
      throw NumericError("vi_optimize: non-finite loss at iteration " + std::to_string(it));
    }
    result.loss_trace.push_back(lg.loss);
    b1_pow *= config.beta1;
    b2_pow *= config.beta2;
    auto adam = [&](Eigen::VectorXd& param, Eigen::VectorXd& m, Eigen::VectorXd& v,
                    const Eigen::VectorXd& grad) {
      m = config.beta1 * m + (1.0 - config.beta1) * grad;
      v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseAbs2();
      const Eigen::ArrayXd m_hat = m.array() / (1.0 - b1_pow);
      const Eigen::ArrayXd v_hat = v.array() / (1.0 - b2_pow);
      param.array() -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
    };
    adam(result.params.mu, m_mu, v_mu, lg.grad_mu);
    adam(result.params.rho, m_rho, v_rho, lg.grad_rho);
  }
  return result;
}

Eigen::MatrixXd vi_sample(const ViParams& params, Eigen::Index n, RngStream& stream) {
  const Eigen::VectorXd var = (2.0 * params.rho).array().exp().matrix();
  return gaussian_sample(stream, GaussianParams::diagonal(params.mu, var), n);
}

}  // namespace modebench
