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

#include "modebench/mala.hpp"

#include <cmath>

#include "modebench/errors.hpp"
#include "modebench/numerics.hpp"

namespace modebench {

void MalaConfig::validate() const {
  if (!(lambda_init > 0.0)) {
    throw ValidationError("MalaConfig: lambda_init must be positive");
  }
  if (!(target_accept > 0.0 && target_accept < 1.0)) {
    throw ValidationError("MalaConfig: target_accept must lie in (0, 1)");
  }
  if (!(adapt_rate > 0.0)) {
    throw ValidationError("MalaConfig: adapt_rate must be positive");
  }
}

ChainState ChainState::start(const LogDensity& density, Eigen::VectorXd x, double lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("ChainState: lambda must be positive");
  }
  ChainState s;
  s.x = std::move(x);
  s.grad.resize(s.x.size());
  s.lambda = lambda;
  s.refresh(density);
  return s;
}

void ChainState::refresh(const LogDensity& density) {
  grad.resize(x.size());
  log_density = density.log_density_grad(x, grad);
}

double ChainState::acceptance_rate() const {
  return step_count == 0 ? 0.0 : static_cast<double>(accept_count) / static_cast<double>(step_count);
}

double mala_log_ratio(const Eigen::Ref<const Eigen::VectorXd>& x, double log_x,
                      const Eigen::Ref<const Eigen::VectorXd>& grad_x,
                      const Eigen::Ref<const Eigen::VectorXd>& x_new, double log_x_new,
                      const Eigen::Ref<const Eigen::VectorXd>& grad_x_new, double lambda) {
  // log N(x; x' + l g', 2l) - log N(x'; x + l g, 2l); normalizers cancel.
  const double reverse = (x - x_new - lambda * grad_x_new).squaredNorm();
  const double forward = (x_new - x - lambda * grad_x).squaredNorm();
  return log_x_new - log_x - (reverse - forward) / (4.0 * lambda);
}

double mala_acceptance_probability(const LogDensity& density,
                                   const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& x_new, double lambda) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd g_new(x.size());
  const double l = density.log_density_grad(x, g);
  const double l_new = density.log_density_grad(x_new, g_new);
  const double r = mala_log_ratio(x, l, g, x_new, l_new, g_new, lambda);
  if (std::isnan(r)) {
    return 0.0;
  }
  return r >= 0.0 ? 1.0 : std::exp(r);
}

bool mala_step_with_noise(ChainState& state, const LogDensity& density,
                          const Eigen::Ref<const Eigen::VectorXd>& z, double u) {
  thread_local Eigen::VectorXd proposal;
  thread_local Eigen::VectorXd proposal_grad;
  const double lambda = state.lambda;
  proposal = state.x + lambda * state.grad + std::sqrt(2.0 * lambda) * z;
  proposal_grad.resize(proposal.size());
  const double log_new = density.log_density_grad(proposal, proposal_grad);
  ++state.step_count;
  if (!std::isfinite(log_new) || !proposal_grad.allFinite()) {
    ++state.nonfinite_count;
    return false;
  }
  const double log_ratio =
      mala_log_ratio(state.x, state.log_density, state.grad, proposal, log_new, proposal_grad, lambda);
  if (log_ratio >= 0.0 || std::log(u) < log_ratio) {
    state.x.swap(proposal);
    state.grad.swap(proposal_grad);
    state.log_density = log_new;
    ++state.accept_count;
    return true;
  }
  return false;
}

bool mala_step(ChainState& state, const LogDensity& density, RngStream& stream) {
  thread_local Eigen::VectorXd z;
  z.resize(state.x.size());
  fill_standard_normal(stream, z);
  return mala_step_with_noise(state, density, z, stream.uniform());
}

double adapt_step(double lambda, bool accepted, double target_accept, double adapt_rate) {
  return lambda * std::exp(adapt_rate * ((accepted ? 1.0 : 0.0) - target_accept));
}

ChainState run_mala_chain(Eigen::VectorXd init, const LogDensity& density, const MalaConfig& config,
                          std::int64_t n_warmup, std::int64_t n_samples, RngStream& stream,
                          const MalaObserver& observer) {
  config.validate();
  if (n_warmup < 0 || n_samples < 1) {
    throw DomainError("run_mala: need n_warmup >= 0 and n_samples >= 1");
  }
  if (init.size() != density.dim()) {
    throw ShapeError("run_mala: init dimension mismatch");
  }
  ChainState state = ChainState::start(density, std::move(init), config.lambda_init);
  for (std::int64_t i = 0; i < n_warmup; ++i) {
    const bool accepted = mala_step(state, density, stream);
    if (config.adapt) {
      state.lambda = adapt_step(state.lambda, accepted, config.target_accept, config.adapt_rate);
    }
    if (observer) {
      observer(state, accepted, true);
    }
  }
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const bool accepted = mala_step(state, density, stream);
    if (observer) {
      observer(state, accepted, false);
    }
  }
  return state;
}

MalaRun run_mala(Eigen::VectorXd init, const LogDensity& density, const MalaConfig& config,
                 std::int64_t n_warmup, std::int64_t n_samples, RngStream& stream) {
  MalaRun run;
  if (n_samples >= 1) {
    run.samples.resize(init.size(), n_samples);
  }
  Eigen::Index col = 0;
  run.final_state = run_mala_chain(std::move(init), density, config, n_warmup, n_samples, stream,
                                   [&](const ChainState& s, bool, bool warmup) {
                                     if (!warmup) {
                                       run.samples.col(col++) = s.x;
                                     }
                                   });
  return run;
}

}  // namespace modebench
