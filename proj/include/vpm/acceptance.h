// Copyright 2026 The vpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vpm {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    double budget_seconds = 0;
    /// One line per individual check; lines starting with "info" do not gate.
    std::vector<std::string> details;
};

struct AcceptanceOptions {
    uint64_t seed = 20240611;
    size_t workers = 0;
    /// Criteria to run; empty runs all.
    std::vector<int> only;
};

constexpr int kCriterionCount = 8;

CriterionResult run_criterion(int id, const AcceptanceOptions &options);
/// Runs the selected criteria, streaming the summary line of each to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options, std::ostream *log = nullptr);
/// "[PASS] criterion 3: ... (0.12 s / 5 s)".
std::string summary_line(const CriterionResult &r);

}  // namespace vpm
