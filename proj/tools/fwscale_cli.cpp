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

// Command line front end. Talks to the library through the C interface only.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fwscale/fwscale.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_budget_s;
  std::optional<std::uint64_t> max_iters;
  bool shadow = false;
};

void print_line(const char* line, void*) { std::printf("%s\n", line); }

int run(const std::string& subcommand, const Flags& flags) {
  fws_bench_options opts;
  fws_bench_options_init(&opts);
  opts.config_path = flags.config.empty() ? nullptr : flags.config.c_str();
  opts.out_path = flags.out.empty() ? nullptr : flags.out.c_str();
  if (flags.seed) {
    opts.has_seed = 1;
    opts.seed = *flags.seed;
  }
  if (flags.time_budget_s) opts.time_budget_s = *flags.time_budget_s;
  if (flags.max_iters) opts.max_iters = *flags.max_iters;
  opts.shadow = flags.shadow ? 1 : 0;
  opts.sink = print_line;

  int all_passed = 0;
  const fws_status s = fws_bench_run(subcommand.c_str(), &opts, &all_passed);
  std::fflush(stdout);
  if (s != FWS_OK) {
    std::fprintf(stderr, "fwscale %s: %s: %s\n", subcommand.c_str(),
                 fws_status_string(s), fws_last_error());
    return 2;
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe experiments: deterministic, variance-reduced and "
               "sketched solvers"};
  app.set_version_flag("--version", std::string(fws_version()));
  app.require_subcommand(1);

  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"complete-fw", "FW matrix completion grid with oracle diagnostics"},
      {"svrf", "SVRF with dense iterates, epoch-level metrics"},
      {"ssvrf", "Sketched SVRF, epoch-level metrics from reconstructions"},
      {"lmo-bench", "Oracle accuracy and cost per tolerance"},
      {"verify-bounds", "Run the convergence-bound suites"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "key = value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "CSV (or report) output path");
    sub->add_option("--seed", flags.seed, "run a single seed");
    sub->add_option("--time-budget-s", flags.time_budget_s,
                    "wall-clock budget per run")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", flags.max_iters, "iteration cap per run")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--shadow", flags.shadow, "enable dense shadow checks");
  }

  CLI11_PARSE(app, argc, argv);
  for (const CLI::App* sub : app.get_subcommands())
    return run(sub->get_name(), flags);
  return 2;
}
