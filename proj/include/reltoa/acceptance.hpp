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

#include <iosfwd>
#include <string>
#include <vector>

namespace reltoa::app {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria (all when `ids` is empty), printing one
/// "PASS|FAIL <id> ..." line per criterion to `log` as it completes. A
/// criterion that throws is reported as FAIL with the exception text.
std::vector<CriterionResult> run_acceptance(std::ostream& log, const std::vector<int>& ids = {});

int acceptance_criterion_count();

}  // namespace reltoa::app
