// Copyright 2026 The rel-toa Authors
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

#pragma once

#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace reltoa::csv {

/// Shortest-round-trip is not used on purpose: every number is written with
/// 17 significant digits in the "C" representation so output is
/// byte-identical across runs and locales.
std::string format(double value);

void write_header(std::ostream& out, std::initializer_list<std::string_view> columns);
void write_row(std::ostream& out, std::initializer_list<double> values);
void write_row(std::ostream& out, std::span<const double> values);
/// "# key=value" metadata line.
void write_meta(std::ostream& out, std::string_view key, std::string_view value);
void write_meta(std::ostream& out, std::string_view key, double value);

}  // namespace reltoa::csv
