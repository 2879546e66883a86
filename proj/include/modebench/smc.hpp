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

#ifndef MODEBENCH_SMC_HPP
#define MODEBENCH_SMC_HPP

#include <Eigen/Core>
#include <vector>

#include "modebench/density.hpp"
#include "modebench/numerics.hpp"
#include "modebench/rng.hpp"

namespace modebench {

struct SmcConfig {
  int n_particles = 8192;
  double ess_threshold_alpha = 0.5;  // ESS_min = alpha N
  int max_steps = 512;
  int mutation_steps = 96;
  double lambda_init = 1e-2;
  double target_accept = 0.75;
  double adapt_rate = 0.05;
  /// Resample at every tempering step; otherwise only when ESS < ESS_min.
  bool resample_every_step = true;

  void validate() const;
};

/// Weighted particle cloud at inverse temperature beta.
struct ParticleSystem {
  Eigen::MatrixXd positions;  // d x N
  Eigen::VectorXd log_weights;
  Eigen::VectorXd log_ratio;  // (log gamma - log p_init) at each position
  double beta = 0.0;
  double lambda = 1e-2;

  [[nodiscard]] Eigen::Index size() const { return positions.cols(); }
  /// Recomputes log_ratio from the current positions.
  void refresh_log_ratio(const LogDensity& base, const LogDensity& target);
};

/// Largest admissible tempering increment: returns 1 when the full jump keeps
/// ESS >= ess_min, otherwise beta + delta with ESS(delta) = ess_min solved by
/// Brent's method on [0, 1 - beta]. `log_weights` are the current weights
/// (uniform when empty).
double next_beta(const Eigen::Ref<const Eigen::VectorXd>& log_ratio, double beta, double ess_min,
                 const Eigen::Ref<const Eigen::VectorXd>& log_weights = Eigen::VectorXd());

/// Multiplies the weights by (p_{beta'} / p_beta) at each particle.
void reweight(ParticleSystem& system, double new_beta);

/// n ancestor indices drawn i.i.d. from the categorical law of `weights`
/// (inverse CDF over sorted uniforms).
std::vector<Eigen::Index> multinomial_ancestors(const Eigen::Ref<const Eigen::VectorXd>& weights,
                                                Eigen::Index n, RngStream& stream);

/// Multinomial resampling; weights are reset to uniform.
void resample_multinomial(ParticleSystem& system, RngStream& stream);

struct SmcDiagnostics {
  std::vector<double> betas;           // realized path, starting at 0
  std::vector<double> ess;             // ESS after each reweight
  std::vector<double> acceptance;      // mean MALA acceptance per level
  std::vector<double> step_sizes;      // lambda at the end of each level
  bool complete = true;                // beta reached 1 within max_steps
  int non_monotone_levels = 0;         // ESS(delta) dipped below ESS_min before delta*
};

struct SmcResult {
  Eigen::MatrixXd positions;  // d x N
  Eigen::VectorXd normalized_weights;
  SmcDiagnostics diagnostics;
};

/// Adaptive-tempering SMC from p_init = `init` to `target` along the geometric
/// path: next_beta, reweight, resample, then MALA mutations on p_beta with the
/// step size carried over between levels.
SmcResult run_smc(const LogDensity& target, const GaussianParams& init, const SmcConfig& config,
                  RngStream& stream);

}  // namespace modebench

#endif  // MODEBENCH_SMC_HPP
