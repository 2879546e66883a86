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

#include "modebench/smc.hpp"

#include <algorithm>
#include <cmath>

#include "modebench/errors.hpp"
#include "modebench/importance.hpp"
#include "modebench/mala.hpp"

namespace modebench {

void SmcConfig::validate() const {
  if (n_particles < 2) {
    throw ValidationError("SmcConfig: need at least 2 particles");
  }
  if (!(ess_threshold_alpha > 0.0 && ess_threshold_alpha < 1.0)) {
    throw ValidationError("SmcConfig: ess_threshold_alpha must lie in (0, 1)");
  }
  if (max_steps < 1 || mutation_steps < 0) {
    throw ValidationError("SmcConfig: need max_steps >= 1 and mutation_steps >= 0");
  }
  if (!(lambda_init > 0.0) || !(adapt_rate > 0.0) || !(target_accept > 0.0 && target_accept < 1.0)) {
    throw ValidationError("SmcConfig: invalid step-size settings");
  }
}

void ParticleSystem::refresh_log_ratio(const LogDensity& base, const LogDensity& target) {
  log_ratio.resize(size());
  for (Eigen::Index n = 0; n < size(); ++n) {
    const auto x = positions.col(n);
    log_ratio[n] = target.log_density(x) - base.log_density(x);
  }
}

namespace {

double ess_at(const Eigen::Ref<const Eigen::VectorXd>& log_ratio,
              const Eigen::Ref<const Eigen::VectorXd>& log_weights, double delta) {
  if (log_weights.size() == 0) {
    return ess(delta * log_ratio);
  }
  return ess(log_weights + delta * log_ratio);
}

}  // namespace

double next_beta(const Eigen::Ref<const Eigen::VectorXd>& log_ratio, double beta, double ess_min,
                 const Eigen::Ref<const Eigen::VectorXd>& log_weights) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("next_beta: beta must lie in [0, 1)");
  }
  if (log_weights.size() != 0 && log_weights.size() != log_ratio.size()) {
    throw ShapeError("next_beta: log_weights and log_ratio differ in length");
  }
  const double gap = 1.0 - beta;
  if (ess_at(log_ratio, log_weights, gap) >= ess_min) {
    return 1.0;
  }
  if (ess_at(log_ratio, log_weights, 0.0) < ess_min) {
    throw Error("next_beta: current weights are already below ESS_min");
  }
  const double delta = brent_root(
      [&](double dlt) { return ess_at(log_ratio, log_weights, dlt) - ess_min; }, 0.0, gap);
  return std::min(1.0, beta + delta);
}

void reweight(ParticleSystem& system, double new_beta) {
  if (new_beta < system.beta) {
    throw DomainError("reweight: beta must not decrease");
  }
  if (new_beta > system.beta) {
    system.log_weights += (new_beta - system.beta) * system.log_ratio;
  }
  system.beta = new_beta;
}

std::vector<Eigen::Index> multinomial_ancestors(const Eigen::Ref<const Eigen::VectorXd>& weights,
                                                Eigen::Index n, RngStream& stream) {
  const Eigen::Index m = weights.size();
  if (m == 0 || n < 1) {
    throw DomainError("multinomial_ancestors: empty input");
  }
  std::vector<double> cumulative(static_cast<std::size_t>(m));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += weights[i];
    cumulative[static_cast<std::size_t>(i)] = acc;
  }
  if (!(acc > 0.0) || !std::isfinite(acc)) {
    throw DegeneracyError("multinomial_ancestors: weights do not sum to a positive value");
  }
  std::vector<double> u(static_cast<std::size_t>(n));
  for (double& v : u) {
    v = stream.uniform() * acc;
  }
  std::sort(u.begin(), u.end());
  std::vector<Eigen::Index> ancestors(static_cast<std::size_t>(n));
  std::size_t i = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    while (i + 1 < cumulative.size() && cumulative[i] < u[k]) {
      ++i;
    }
    ancestors[k] = static_cast<Eigen::Index>(i);
  }
  return ancestors;
}

void resample_multinomial(ParticleSystem& system, RngStream& stream) {
  const Eigen::Index n = system.size();
  const Eigen::VectorXd w = normalize_log_weights(system.log_weights);
  const std::vector<Eigen::Index> ancestors = multinomial_ancestors(w, n, stream);
  Eigen::MatrixXd positions(system.positions.rows(), n);
  Eigen::VectorXd log_ratio(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index a = ancestors[static_cast<std::size_t>(k)];
    positions.col(k) = system.positions.col(a);
    if (system.log_ratio.size() == n) {
      log_ratio[k] = system.log_ratio[a];
    }
  }
  system.positions.swap(positions);
  if (system.log_ratio.size() == n) {
    system.log_ratio.swap(log_ratio);
  }
  system.log_weights.setZero();
}

SmcResult run_smc(const LogDensity& target, const GaussianParams& init, const SmcConfig& config,
                  RngStream& stream) {
  config.validate();
  if (init.dim() != target.dim()) {
    throw ShapeError("run_smc: init and target dimensions differ");
  }
  const GaussianDensity base(init);
  const Eigen::Index n = config.n_particles;
  const double ess_min = config.ess_threshold_alpha * static_cast<double>(n);

  RngStream init_stream = stream.child(0);
  ParticleSystem system;
  system.positions = gaussian_sample(init_stream, init, n);
  system.log_weights = Eigen::VectorXd::Zero(n);
  system.lambda = config.lambda_init;
  system.refresh_log_ratio(base, target);

  SmcResult result;
  SmcDiagnostics& diag = result.diagnostics;
  diag.betas.push_back(0.0);

  TemperedDensity tempered(base, target, 0.0);
  std::vector<ChainState> chains(static_cast<std::size_t>(n));

  int level = 0;
  for (; level < config.max_steps && system.beta < 1.0; ++level) {
    const double new_beta = next_beta(system.log_ratio, system.beta, ess_min,
                                      config.resample_every_step ? Eigen::VectorXd() : system.log_weights);
    const double old_beta = system.beta;
    reweight(system, new_beta);
    const double level_ess = ess(system.log_weights);
    diag.ess.push_back(level_ess);
    diag.betas.push_back(new_beta);

    // non-monotone ESS(delta): check a coarse grid before the root
    if (new_beta < 1.0) {
      for (int k = 1; k < 8; ++k) {
        const double probe = old_beta + (new_beta - old_beta) * k / 8.0;
        Eigen::VectorXd lw = system.log_weights - (new_beta - probe) * system.log_ratio;
        if (ess(lw) < ess_min * (1.0 - 1e-9)) {
          ++diag.non_monotone_levels;
          break;
        }
      }
    }

    RngStream level_stream = stream.child(static_cast<std::uint64_t>(level) + 1);
    if (config.resample_every_step || level_ess < ess_min) {
      RngStream resample_stream = level_stream.child(0);
      resample_multinomial(system, resample_stream);
    }

    tempered.set_beta(new_beta);
    for (Eigen::Index i = 0; i < n; ++i) {
      ChainState& c = chains[static_cast<std::size_t>(i)];
      c.x = system.positions.col(i);
      c.lambda = system.lambda;
      c.accept_count = 0;
      c.step_count = 0;
      c.refresh(tempered);
    }
    std::vector<RngStream> particle_streams;
    particle_streams.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      particle_streams.push_back(level_stream.child(static_cast<std::uint64_t>(i) + 1));
    }
    double accepted_total = 0.0;
    for (int m = 0; m < config.mutation_steps; ++m) {
      int accepted = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        chains[idx].lambda = system.lambda;
        if (mala_step(chains[idx], tempered, particle_streams[idx])) {
          ++accepted;
        }
      }
      const double rate = static_cast<double>(accepted) / static_cast<double>(n);
      accepted_total += rate;
      system.lambda *= std::exp(config.adapt_rate * (rate - config.target_accept));
    }
    diag.acceptance.push_back(config.mutation_steps > 0 ? accepted_total / config.mutation_steps : 0.0);
    diag.step_sizes.push_back(system.lambda);

    for (Eigen::Index i = 0; i < n; ++i) {
      system.positions.col(i) = chains[static_cast<std::size_t>(i)].x;
    }
    system.refresh_log_ratio(base, target);
  }
  diag.complete = system.beta >= 1.0;

  result.positions = std::move(system.positions);
  result.normalized_weights = normalize_log_weights(system.log_weights);
  return result;
}

}  // namespace modebench
