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

#include "modebench/slips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modebench/errors.hpp"
#include "modebench/numerics.hpp"

namespace modebench {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

}  // namespace

void SlipsConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("SlipsConfig: sigma must be positive");
  }
  if (!(t0 > 0.0 && t0 < t1 && t1 < 1.0)) {
    throw ValidationError("SlipsConfig: need 0 < t0 < t1 < 1");
  }
  if (n_steps < 1 || inner_steps < 0) {
    throw ValidationError("SlipsConfig: need n_steps >= 1 and inner_steps >= 0");
  }
  if (!(inner_lambda_init > 0.0) || !(adapt_rate > 0.0) || !(target_accept > 0.0 && target_accept < 1.0)) {
    throw ValidationError("SlipsConfig: invalid inner step-size settings");
  }
}

AlphaGeom alpha_geom(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("alpha_geom: t must lie in (0, 1)");
  }
  const double one_minus = 1.0 - t;
  return {std::sqrt(t / one_minus), 0.5 / (std::sqrt(t) * one_minus * std::sqrt(one_minus))};
}

double default_sigma(const Moments& moments) {
  const double d = static_cast<double>(moments.mean.size());
  return std::sqrt((moments.mean.squaredNorm() + moments.variances.sum()) / d);
}

PosteriorDensity::PosteriorDensity(const LogDensity& prior, Eigen::VectorXd y, double t, double alpha,
                                   double sigma)
    : prior_(&prior), t_(t), alpha_(alpha), sigma_(sigma) {
  if (!(sigma > 0.0)) {
    throw DomainError("PosteriorDensity: sigma must be positive");
  }
  set_observation(y, t, alpha);
}

void PosteriorDensity::set_observation(const Eigen::Ref<const Eigen::VectorXd>& y, double t, double alpha) {
  if (!(t > 0.0)) {
    throw DomainError("PosteriorDensity: t must be positive");
  }
  if (y.size() != prior_->dim()) {
    throw ShapeError("PosteriorDensity: observation dimension mismatch");
  }
  y_ = y;
  t_ = t;
  alpha_ = alpha;
  noise_var_ = sigma_ * sigma_ * t;
  log_norm_ = -0.5 * static_cast<double>(y.size()) * (kLog2Pi + std::log(noise_var_));
}

double PosteriorDensity::log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return log_norm_ - 0.5 * (y_ - alpha_ * x).squaredNorm() / noise_var_ + prior_->log_density(x);
}

double PosteriorDensity::log_density_grad(const Eigen::Ref<const Eigen::VectorXd>& x,
                                          Eigen::Ref<Eigen::VectorXd> grad) const {
  const double lp = prior_->log_density_grad(x, grad);
  grad += (alpha_ / noise_var_) * (y_ - alpha_ * x);
  return log_norm_ - 0.5 * (y_ - alpha_ * x).squaredNorm() / noise_var_ + lp;
}

PosteriorEval posterior_logpdf_grad(const LogDensity& prior, const Eigen::Ref<const Eigen::VectorXd>& y,
                                    double t, double alpha, double sigma,
                                    const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != prior.dim()) {
    throw ShapeError("posterior_logpdf_grad: dimension mismatch");
  }
  const PosteriorDensity q(prior, y, t, alpha, sigma);
  PosteriorEval out{0.0, Eigen::VectorXd(x.size())};
  out.log_density = q.log_density_grad(x, out.grad);
  return out;
}

Eigen::VectorXd estimate_drift(const LogDensity& prior, ObservationState& state, const SlipsConfig& config,
                               RngStream& stream) {
  const AlphaGeom ag = alpha_geom(state.t);
  const PosteriorDensity q(prior, state.y, state.t, ag.alpha, config.sigma);
  ChainState& chain = state.warm_chain;
  chain.refresh(q);
  if (config.inner_steps == 0) {
    return chain.x;
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(chain.x.size());
  for (int i = 0; i < config.inner_steps; ++i) {
    const bool accepted = mala_step(chain, q, stream);
    chain.lambda = adapt_step(chain.lambda, accepted, config.target_accept, config.adapt_rate);
    sum += chain.x;
  }
  return sum / static_cast<double>(config.inner_steps);
}

Eigen::VectorXd init_observation(const Moments& moments, double t0, double sigma, RngStream& stream) {
  const AlphaGeom ag = alpha_geom(t0);
  const Eigen::VectorXd mean = ag.alpha * moments.mean;
  const Eigen::VectorXd var = (ag.alpha * ag.alpha * moments.variances.array() + sigma * sigma * t0).matrix();
  return gaussian_sample(stream, GaussianParams::diagonal(mean, var), 1).col(0);
}

Eigen::VectorXd integrate_observation(Eigen::VectorXd y0, double t0, double t1, int n_steps, double noise,
                                      const DriftFn& drift, RngStream& stream) {
  if (n_steps < 1 || !(t0 < t1)) {
    throw DomainError("integrate_observation: need n_steps >= 1 and t0 < t1");
  }
  const double dt = (t1 - t0) / n_steps;
  const double noise_step = noise * std::sqrt(dt);
  Eigen::VectorXd y = std::move(y0);
  Eigen::VectorXd z(y.size());
  for (int k = 0; k < n_steps; ++k) {
    const double t = t0 + k * dt;
    const Eigen::VectorXd u = drift(y, t);
    fill_standard_normal(stream, z);
    y += alpha_geom(t).alpha_dot * dt * u + noise_step * z;
  }
  return y / alpha_geom(t1).alpha;
}

SlipsDraw run_slips(const LogDensity& target, const Moments& moments, const SlipsConfig& config,
                    RngStream& stream) {
  config.validate();
  if (moments.mean.size() != target.dim()) {
    throw ShapeError("run_slips: moments dimension mismatch");
  }
  RngStream init_stream = stream.child(0);
  RngStream noise_stream = stream.child(1);
  RngStream inner_stream = stream.child(2);

  ObservationState obs;
  obs.y = init_observation(moments, config.t0, config.sigma, init_stream);
  obs.t = config.t0;
  const AlphaGeom start = alpha_geom(config.t0);
  {
    const PosteriorDensity q(target, obs.y, obs.t, start.alpha, config.sigma);
    obs.warm_chain = ChainState::start(q, obs.y / start.alpha, config.inner_lambda_init);
  }
  const DriftFn drift = [&](const Eigen::VectorXd& y, double t) {
    obs.y = y;
    obs.t = t;
    return estimate_drift(target, obs, config, inner_stream);
  };
  SlipsDraw draw;
  draw.x = integrate_observation(obs.y, config.t0, config.t1, config.n_steps, config.sigma, drift, noise_stream);
  draw.inner_acceptance = obs.warm_chain.acceptance_rate();
  draw.final_lambda = obs.warm_chain.lambda;
  return draw;
}

T0Tuning tune_t0(const MixtureTarget& target, double oracle_w1, std::vector<double> grid,
                 const SlipsConfig& pilot_config, int n_pilot, RngStream& stream) {
  if (grid.empty()) {
    throw DomainError("tune_t0: empty candidate grid");
  }
  if (n_pilot < 1) {
    throw DomainError("tune_t0: n_pilot must be >= 1");
  }
  std::sort(grid.begin(), grid.end());
  const Moments m = moments(target);
  T0Tuning out;
  out.candidates = grid;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    SlipsConfig cfg = pilot_config;
    cfg.t0 = grid[c];
    cfg.validate();
    RngStream cand_stream = stream.child(c);
    int hits = 0;
    for (int i = 0; i < n_pilot; ++i) {
      RngStream traj = cand_stream.child(static_cast<std::uint64_t>(i));
      const SlipsDraw draw = run_slips(target, m, cfg, traj);
      if (target.mode_of(draw.x) == ModeLabel::kFirst) {
        ++hits;
      }
    }
    const double est = static_cast<double>(hits) / n_pilot;
    const double err = std::abs(est - oracle_w1);
    out.pilot_estimates.push_back(est);
    out.pilot_errors.push_back(err);
    if (err < best) {
      best = err;
      out.t0 = grid[c];
    }
  }
  return out;
}

}  // namespace modebench
