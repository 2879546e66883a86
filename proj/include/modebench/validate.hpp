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


#ifndef MODEBENCH_VALIDATE_HPP
#define MODEBENCH_VALIDATE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace modebench {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant and closed-form oracle battery over every module. Each result is
/// passed to `on_result` as soon as it is known.
std::vector<CheckResult> run_validation(const std::function<void(const CheckResult&)>& on_result = {});

struct DriftCheck {
  int n_within = 0;
  int n_total = 0;
  double worst = 0.0;  // largest ||u_hat - u|| / (1 + ||u||)
};

/// Compares the MCMC drift estimate with the analytic posterior mean on
/// random (y, t): x from the target, t uniform in [t0, t1] of the default
/// SLIPS settings, y = alpha(t) x + sigma sqrt(t) z. The inner chain starts at
/// y / alpha and is burnt in before the measured call.
DriftCheck drift_oracle_check(double a, int d, int n_configs, std::uint64_t seed, int inner_steps = 200,
                              int burn_in = 200, double tolerance = 0.05);

/// Pearson chi-square p-value of the pooled offspring counts of `replications`
/// multinomial resamplings of n particles with uniform weights.
double resampling_uniformity_pvalue(int n, int replications, std::uint64_t seed);

}  // namespace modebench

#endif  // MODEBENCH_VALIDATE_HPP
