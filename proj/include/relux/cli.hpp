// Copyright 2026 the relu-unwrap authors.
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

#ifndef RELUX_CLI_HPP_
#define RELUX_CLI_HPP_

namespace relux {

// Dispatches one command. Returns the process exit code: 0 on success,
// 2 on flag/usage problems, 1 on module errors. Failures print a single
// "error: <module>: <message>" line to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace relux

#endif  // RELUX_CLI_HPP_
