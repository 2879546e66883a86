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


#ifndef MODEBENCH_CONFIG_HPP
#define MODEBENCH_CONFIG_HPP

#include <string>

#include "modebench/harness.hpp"

namespace modebench {

/// Sweep configuration file (YAML). `output_dir` and every key of the
/// `protocol` section are required; sampler sections are optional and default
/// to the benchmark settings. Unknown keys are rejected.
struct SweepConfig {
  Protocol protocol;
  SamplerSettings settings;
  std::string output_dir;
};

/// Errors are ValidationError with a "source:line:column: " prefix.
SweepConfig parse_config(const std::string& text, const std::string& source = "<config>");
SweepConfig load_config(const std::string& path);

}  // namespace modebench

#endif  // MODEBENCH_CONFIG_HPP
