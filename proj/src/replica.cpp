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

#include "modebench/replica.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "modebench/errors.hpp"

namespace modebench {

void LadderConfig::validate() const {
  if (K < 0) {
    throw ValidationError("LadderConfig: K must be >= 0");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("LadderConfig: epsilon must lie in (0, 1)");
  }
  if (swap_interval < 1 || thinning < 1 || n_instances < 1 || n_warmup < 0 || n_steps < 1) {
    throw ValidationError("LadderConfig: invalid step counts");
  }
  if (!(lambda_init > 0.0) || !(adapt_rate > 0.0) || !(target_accept > 0.0 && target_accept < 1.0)) {
    throw ValidationError("LadderConfig: invalid step-size settings");
  }
}

std::vector<double> build_schedule(int K, double epsilon) {
  if (K < 1) {
    throw DomainError("build_schedule: K must be >= 1");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("build_schedule: epsilon must lie in (0, 1)");
  }
  std::vector<double> betas(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k < K; ++k) {
    betas[static_cast<std::size_t>(k)] = 1.0 - std::pow(epsilon, static_cast<double>(k) / K);
  }
  betas[static_cast<std::size_t>(K)] = 1.0;
  return betas;
}

double swap_probability(double log_pk_at_xk, double log_pk_at_xk1, double log_pk1_at_xk,
                        double log_pk1_at_xk1) {
  if (!std::isfinite(log_pk_at_xk) || !std::isfinite(log_pk_at_xk1) || !std::isfinite(log_pk1_at_xk) ||
      !std::isfinite(log_pk1_at_xk1)) {
    return 0.0;
  }
  const double log_ratio = (log_pk_at_xk1 + log_pk1_at_xk) - (log_pk_at_xk + log_pk1_at_xk1);
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

ReplicaState ReplicaState::create(const LogDensity& base, const LogDensity& target, std::vector<double> betas,
                                  const Eigen::Ref<const Eigen::MatrixXd>& init_positions,
                                  double lambda_init) {
  const auto levels = static_cast<Eigen::Index>(betas.size());
  if (levels < 1 || init_positions.cols() != levels || init_positions.rows() != target.dim()) {
    throw ShapeError("ReplicaState: one initial position per level is required");
  }
  ReplicaState s;
  s.betas = std::move(betas);
  s.levels.reserve(s.betas.size());
  s.chains.reserve(s.betas.size());
  for (std::size_t k = 0; k < s.betas.size(); ++k) {
    s.levels.emplace_back(base, target, s.betas[k]);
  }
  for (std::size_t k = 0; k < s.betas.size(); ++k) {
    s.chains.push_back(ChainState::start(s.levels[k], init_positions.col(static_cast<Eigen::Index>(k)),
                                         lambda_init));
  }
  const std::size_t pairs = s.betas.size() - 1;
  s.swap_attempts.assign(pairs, 0);
  s.swap_accepts.assign(pairs, 0);
  return s;
}

void swap_sweep(ReplicaState& state, SwapParity parity, RngStream& stream) {
  const std::size_t first = parity == SwapParity::kEven ? 0 : 1;
  for (std::size_t k = first; k + 1 < state.chains.size(); k += 2) {
    ChainState& lo = state.chains[k];
    ChainState& hi = state.chains[k + 1];
    const TemperedDensity& p_lo = state.levels[k];
    const TemperedDensity& p_hi = state.levels[k + 1];
    const double prob = swap_probability(p_lo.log_density(lo.x), p_lo.log_density(hi.x),
                                         p_hi.log_density(lo.x), p_hi.log_density(hi.x));
    ++state.swap_attempts[k];
    if (prob == 0.0 && (!std::isfinite(lo.log_density) || !std::isfinite(hi.log_density))) {
      ++state.nonfinite_swaps;
    }
    if (stream.uniform() < prob) {
      lo.x.swap(hi.x);
      lo.refresh(p_lo);
      hi.refresh(p_hi);
      ++state.swap_accepts[k];
    }
  }
}

ReResult run_re(const LogDensity& target, const GaussianParams& init, const LadderConfig& config,
                RngStream& stream, Eigen::Index n_subsample) {
  config.validate();
  if (init.dim() != target.dim()) {
    throw ShapeError("run_re: init and target dimensions differ");
  }
  const GaussianDensity base(init);
  const std::vector<double> betas =
      config.K == 0 ? std::vector<double>{1.0} : build_schedule(config.K, config.epsilon);
  const std::size_t n_levels = betas.size();
  const Eigen::Index d = target.dim();

  ReResult result;
  const std::int64_t per_instance = config.n_steps / config.thinning;
  result.samples.resize(d, per_instance * config.n_instances);
  std::vector<std::int64_t> attempts(n_levels - 1, 0);
  std::vector<std::int64_t> accepts(n_levels - 1, 0);
  std::vector<std::int64_t> level_accepts(n_levels, 0);
  std::vector<Eigen::VectorXd> sums(n_levels, Eigen::VectorXd::Zero(d));
  std::vector<Eigen::VectorXd> sq_sums(n_levels, Eigen::VectorXd::Zero(d));
  std::int64_t recorded_per_level = 0;
  Eigen::Index col = 0;

  for (int inst = 0; inst < config.n_instances; ++inst) {
    RngStream inst_stream = stream.child(static_cast<std::uint64_t>(inst));
    RngStream init_stream = inst_stream.child(0);
    RngStream swap_stream = inst_stream.child(1);
    std::vector<RngStream> level_streams;
    level_streams.reserve(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) {
      level_streams.push_back(inst_stream.child(2 + k));
    }
    const Eigen::MatrixXd start = gaussian_sample(init_stream, init, static_cast<Eigen::Index>(n_levels));
    ReplicaState state = ReplicaState::create(base, target, betas, start, config.lambda_init);

    std::int64_t sweeps = 0;
    const std::int64_t total = static_cast<std::int64_t>(config.n_warmup) + config.n_steps;
    for (std::int64_t step = 0; step < total; ++step) {
      const bool warmup = step < config.n_warmup;
      for (std::size_t k = 0; k < n_levels; ++k) {
        ChainState& chain = state.chains[k];
        const bool accepted = mala_step(chain, state.levels[k], level_streams[k]);
        if (warmup) {
          chain.lambda = adapt_step(chain.lambda, accepted, config.target_accept, config.adapt_rate);
        } else if (accepted) {
          ++level_accepts[k];
        }
      }
      if ((step + 1) % config.swap_interval == 0 && n_levels > 1) {
        swap_sweep(state, sweeps % 2 == 0 ? SwapParity::kEven : SwapParity::kOdd, swap_stream);
        ++sweeps;
      }
      if (!warmup && (step - config.n_warmup + 1) % config.thinning == 0) {
        result.samples.col(col++) = state.chains.back().x;
        for (std::size_t k = 0; k < n_levels; ++k) {
          sums[k] += state.chains[k].x;
          sq_sums[k] += state.chains[k].x.cwiseAbs2();
        }
        ++recorded_per_level;
      }
    }
    for (std::size_t k = 0; k + 1 < n_levels; ++k) {
      attempts[k] += state.swap_attempts[k];
      accepts[k] += state.swap_accepts[k];
    }
    result.nonfinite_swaps += state.nonfinite_swaps;
  }

  for (std::size_t k = 0; k + 1 < n_levels; ++k) {
    result.swap_rates.push_back(attempts[k] == 0 ? 0.0
                                                 : static_cast<double>(accepts[k]) / static_cast<double>(attempts[k]));
  }
  const double post_steps = static_cast<double>(config.n_steps) * config.n_instances;
  for (std::size_t k = 0; k < n_levels; ++k) {
    result.acceptance.push_back(static_cast<double>(level_accepts[k]) / post_steps);
    const double m = static_cast<double>(std::max<std::int64_t>(recorded_per_level, 1));
    Eigen::VectorXd mean = sums[k] / m;
    result.level_means.push_back(mean);
    result.level_variances.push_back((sq_sums[k] / m - mean.cwiseAbs2()).cwiseMax(0.0));
  }

  if (n_subsample > 0 && n_subsample < result.samples.cols()) {
    RngStream sub_stream = stream.child(static_cast<std::uint64_t>(config.n_instances));
    const Eigen::Index pool = result.samples.cols();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(pool));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    // partial Fisher-Yates
    Eigen::MatrixXd picked(d, n_subsample);
    for (Eigen::Index i = 0; i < n_subsample; ++i) {
      const auto span = static_cast<std::uint64_t>(pool - i);
      const auto j = i + static_cast<Eigen::Index>(sub_stream() % span);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      picked.col(i) = result.samples.col(idx[static_cast<std::size_t>(i)]);
    }
    result.samples.swap(picked);
  }
  return result;
}

}  // namespace modebench
