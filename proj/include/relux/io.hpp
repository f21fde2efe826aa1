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

#ifndef RELUX_IO_HPP_
#define RELUX_IO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace relux {

std::string read_file(const std::string& path);

// Writes to a sibling temp file then renames, so a crash mid-write never
// leaves a truncated artifact at the target path.
void write_file_atomic(const std::string& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

// %.*g with the given significant digits, for display-grade numbers.
std::string format_sig(double v, int digits);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace relux

#endif  // RELUX_IO_HPP_
