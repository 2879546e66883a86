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

#ifndef MODEBENCH_SLIPS_HPP
#define MODEBENCH_SLIPS_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "modebench/density.hpp"
#include "modebench/mala.hpp"
#include "modebench/rng.hpp"
#include "modebench/target.hpp"

namespace modebench {

/// Stochastic localization sampler settings (Geom(1,1) schedule, horizon 1).
struct SlipsConfig {
  double sigma = 1.0;
  double t0 = 0.3;
  double t1 = 0.99;
  int n_steps = 512;
  int inner_steps = 5;
  double inner_lambda_init = 1e-2;
  double target_accept = 0.75;
  double adapt_rate = 0.05;

  void validate() const;
};

struct AlphaGeom {
  double alpha;
  double alpha_dot;
};

/// alpha(t) = sqrt(t / (1 - t)) and its derivative, t in (0, 1).
AlphaGeom alpha_geom(double t);

/// Scale-matched noise level: sigma^2 = (|m|^2 + sum_i var_i) / d.
double default_sigma(const Moments& moments);

/// Tilted posterior q_t(x | y) proportional to N(y; alpha x, sigma^2 t I) gamma(x).
/// Holds a reference to `prior`, which must outlive it.
class PosteriorDensity final : public LogDensity {
 public:
  PosteriorDensity(const LogDensity& prior, Eigen::VectorXd y, double t, double alpha, double sigma);

  void set_observation(const Eigen::Ref<const Eigen::VectorXd>& y, double t, double alpha);

  [[nodiscard]] Eigen::Index dim() const override { return prior_->dim(); }
  [[nodiscard]] double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Ref<Eigen::VectorXd> grad) const override;

 private:
  const LogDensity* prior_;
  Eigen::VectorXd y_;
  double t_;
  double alpha_;
  double sigma_;
  double noise_var_;
  double log_norm_;
};

struct PosteriorEval {
  double log_density;
  Eigen::VectorXd grad;
};

PosteriorEval posterior_logpdf_grad(const LogDensity& prior, const Eigen::Ref<const Eigen::VectorXd>& y,
                                    double t, double alpha, double sigma,
                                    const Eigen::Ref<const Eigen::VectorXd>& x);

/// Current observation with the persistent inner chain targeting q_t(. | y).
struct ObservationState {
  Eigen::VectorXd y;
  double t = 0.0;
  ChainState warm_chain;
};

/// Runs config.inner_steps adaptive MALA steps on q_t(. | y) from the warm
/// chain and returns the mean of the visited states (the chain position when
/// inner_steps == 0). The warm chain is updated in place.
Eigen::VectorXd estimate_drift(const LogDensity& prior, ObservationState& state, const SlipsConfig& config,
                               RngStream& stream);

/// Y_t0 ~ N(alpha(t0) m, alpha(t0)^2 diag(var) + sigma^2 t0 I).
Eigen::VectorXd init_observation(const Moments& moments, double t0, double sigma, RngStream& stream);

using DriftFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& y, double t)>;

/// Euler-Maruyama on dY = alpha'(t) u(Y, t) dt + noise dB over the uniform grid
/// t0 < ... < t1 with n_steps steps; returns Y_t1 / alpha(t1).
Eigen::VectorXd integrate_observation(Eigen::VectorXd y0, double t0, double t1, int n_steps, double noise,
                                      const DriftFn& drift, RngStream& stream);

struct SlipsDraw {
  Eigen::VectorXd x;
  double inner_acceptance = 0.0;
  double final_lambda = 0.0;
};

/// One SLIPS trajectory with the drift estimated by the warm-started inner chain.
SlipsDraw run_slips(const LogDensity& target, const Moments& moments, const SlipsConfig& config,
                    RngStream& stream);

struct T0Tuning {
  double t0 = 0.0;
  std::vector<double> candidates;
  std::vector<double> pilot_estimates;
  std::vector<double> pilot_errors;
};

/// Picks the candidate t0 whose pilot mode-weight estimate (n_pilot
/// trajectories) is closest to `oracle_w1`. Ties go to the smallest t0.
/// Uses the privileged target for the partition.
T0Tuning tune_t0(const MixtureTarget& target, double oracle_w1, std::vector<double> grid,
                 const SlipsConfig& pilot_config, int n_pilot, RngStream& stream);

}  // namespace modebench

#endif  // MODEBENCH_SLIPS_HPP
