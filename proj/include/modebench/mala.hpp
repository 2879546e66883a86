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

#ifndef MODEBENCH_MALA_HPP
#define MODEBENCH_MALA_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "modebench/density.hpp"
#include "modebench/rng.hpp"

namespace modebench {

struct MalaConfig {
  double lambda_init = 1e-4;
  double target_accept = 0.75;
  double adapt_rate = 0.05;
  bool adapt = true;

  void validate() const;
};

/// Position of a Langevin chain together with caches of log gamma and its
/// gradient at that position. The caches are refreshed on every accepted move.
struct ChainState {
  Eigen::VectorXd x;
  double log_density = 0.0;
  Eigen::VectorXd grad;
  double lambda = 1e-4;
  std::int64_t accept_count = 0;
  std::int64_t step_count = 0;
  std::int64_t nonfinite_count = 0;  // proposals rejected for a non-finite density

  static ChainState start(const LogDensity& density, Eigen::VectorXd x, double lambda);
  /// Recomputes the caches, e.g. after the density itself changed.
  void refresh(const LogDensity& density);
  [[nodiscard]] double acceptance_rate() const;
};

/// log of the Metropolis-Hastings ratio for moving x -> x' with step lambda
/// (before clipping at 0).
double mala_log_ratio(const Eigen::Ref<const Eigen::VectorXd>& x, double log_x,
                      const Eigen::Ref<const Eigen::VectorXd>& grad_x,
                      const Eigen::Ref<const Eigen::VectorXd>& x_new, double log_x_new,
                      const Eigen::Ref<const Eigen::VectorXd>& grad_x_new, double lambda);

/// Acceptance probability min(1, ratio) of the move x -> x_new.
double mala_acceptance_probability(const LogDensity& density,
                                   const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& x_new, double lambda);

/// One MALA transition. Returns true when the proposal was accepted.
bool mala_step(ChainState& state, const LogDensity& density, RngStream& stream);

/// MALA transition with caller-supplied noise `z` and acceptance uniform `u`.
bool mala_step_with_noise(ChainState& state, const LogDensity& density,
                          const Eigen::Ref<const Eigen::VectorXd>& z, double u);

/// Stochastic-approximation update on log lambda:
/// lambda * exp(rate * (1{accepted} - target)).
double adapt_step(double lambda, bool accepted, double target_accept, double adapt_rate);

using MalaObserver = std::function<void(const ChainState& state, bool accepted, bool warmup)>;

/// Runs n_warmup adaptive steps followed by n_samples steps with the step
/// size frozen, calling `observer` after every step. Returns the final state.
ChainState run_mala_chain(Eigen::VectorXd init, const LogDensity& density, const MalaConfig& config,
                          std::int64_t n_warmup, std::int64_t n_samples, RngStream& stream,
                          const MalaObserver& observer = {});

struct MalaRun {
  Eigen::MatrixXd samples;  // d x n_samples, post-warm-up trajectory
  ChainState final_state;
};

MalaRun run_mala(Eigen::VectorXd init, const LogDensity& density, const MalaConfig& config,
                 std::int64_t n_warmup, std::int64_t n_samples, RngStream& stream);

}  // namespace modebench

#endif  // MODEBENCH_MALA_HPP
