// Copyright 2026 The fwscale Authors
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

// Runs the eight acceptance criteria and prints one verdict line for each,
// preceded by the individual checks that make it up.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fwscale/bench.hpp"
#include "fwscale/errors.hpp"
#include "fwscale/verify.hpp"

namespace {

struct Criterion {
  int id;
  const char* name;
  std::function<std::vector<fws::CriterionReport>()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fwscale acceptance criteria"};
  std::optional<double> budget_s;
  std::vector<int> only;
  app.add_option("--time-budget-s", budget_s,
                 "per-run budget of the completion grid (default 30)")
      ->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criterion ids to run")
      ->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  fws::ExperimentConfig grid =
      fws::ExperimentConfig::defaults(fws::ExperimentKind::kFwCompletion);
  if (budget_s) grid.time_budget_s = budget_s;

  const std::vector<Criterion> criteria = {
      {1, "fw_rate", fws::verify_fw_rate},
      {2, "svrf_rate", fws::verify_svrf_rate},
      {3, "sketch_error", fws::verify_sketch_error},
      {4, "variance_bound", fws::verify_variance_bound},
      {5, "completion_replication",
       [&grid] { return fws::verify_replication(grid); }},
      {6, "ssvrf_equivalence_memory", fws::verify_ssvrf_equivalence},
      {7, "spectral_oracle", fws::verify_spectral_accuracy},
      {8, "ssvrf_solution_distance", fws::verify_solution_distance},
  };

  std::vector<std::string> verdicts;
  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), c.id) == only.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string why;
    try {
      for (const auto& r : c.run()) {
        std::printf("  %s\n", fws::format_report_line(r).c_str());
        pass = pass && r.pass;
      }
    } catch (const fws::Error& e) {
      pass = false;
      why = std::string(" (error: ") + e.what() + ")";
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    char line[256];
    std::snprintf(line, sizeof line, "criterion %d %-26s %s  %.1fs%s", c.id,
                  c.name, pass ? "PASS" : "FAIL", secs, why.c_str());
    std::printf("%s\n", line);
    std::fflush(stdout);
    verdicts.emplace_back(line);
    all = all && pass;
  }

  std::printf("\nsummary\n");
  for (const auto& v : verdicts) std::printf("%s\n", v.c_str());
  return all ? 0 : 1;
}
