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

#ifndef MODEBENCH_REPLICA_HPP
#define MODEBENCH_REPLICA_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "modebench/density.hpp"
#include "modebench/mala.hpp"
#include "modebench/numerics.hpp"
#include "modebench/rng.hpp"

namespace modebench {

struct LadderConfig {
  int K = 64;  // K = 0 degenerates to a single chain on the target
  double epsilon = 1e-5;
  int swap_interval = 8;
  int n_warmup = 16384;
  int n_steps = 32768;
  int thinning = 8;
  int n_instances = 16;
  double lambda_init = 1e-2;
  double target_accept = 0.75;
  double adapt_rate = 0.05;

  void validate() const;
};

/// beta_k = 1 - epsilon^(k/K) for k < K and beta_K = 1 exactly.
std::vector<double> build_schedule(int K, double epsilon);

/// min(1, p_k(x_{k+1}) p_{k+1}(x_k) / (p_k(x_k) p_{k+1}(x_{k+1}))) from the four
/// tempered log-densities; 0 when any input is non-finite.
double swap_probability(double log_pk_at_xk, double log_pk_at_xk1, double log_pk1_at_xk,
                        double log_pk1_at_xk1);

enum class SwapParity { kEven, kOdd };

/// One chain per ladder level plus per-pair swap statistics.
struct ReplicaState {
  std::vector<double> betas;
  std::vector<TemperedDensity> levels;
  std::vector<ChainState> chains;
  std::vector<std::int64_t> swap_attempts;  // per adjacent pair (k, k+1)
  std::vector<std::int64_t> swap_accepts;
  std::int64_t nonfinite_swaps = 0;

  /// Chains start at `init_positions` (d x (K+1)). `base` and `target` must
  /// outlive the state.
  static ReplicaState create(const LogDensity& base, const LogDensity& target,
                             std::vector<double> betas, const Eigen::Ref<const Eigen::MatrixXd>& init_positions,
                             double lambda_init);
};

/// Attempts a swap on every pair (0,1),(2,3),... (even) or (1,2),(3,4),... (odd).
void swap_sweep(ReplicaState& state, SwapParity parity, RngStream& stream);

struct ReResult {
  Eigen::MatrixXd samples;                 // pooled level-K states, d x n
  std::vector<double> swap_rates;          // per pair, pooled over instances
  std::vector<double> acceptance;          // per level MALA acceptance after warm-up
  std::vector<Eigen::VectorXd> level_means;      // post-warm-up thinned means per level
  std::vector<Eigen::VectorXd> level_variances;  // matching marginal variances
  std::int64_t nonfinite_swaps = 0;
};

/// Replica exchange on the geometric ladder from p_init = `init` to `target`.
/// When `n_subsample` > 0 the pooled level-K states are sub-sampled uniformly
/// without replacement to that size.
ReResult run_re(const LogDensity& target, const GaussianParams& init, const LadderConfig& config,
                RngStream& stream, Eigen::Index n_subsample = 0);

}  // namespace modebench

#endif  // MODEBENCH_REPLICA_HPP
