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


#ifndef MODEBENCH_CLI_HPP
#define MODEBENCH_CLI_HPP

#include <iosfwd>

namespace modebench {

/// Entry point of the modebench command line tool: subcommands sweep,
/// report, oracle and validate. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modebench

#endif  // MODEBENCH_CLI_HPP
