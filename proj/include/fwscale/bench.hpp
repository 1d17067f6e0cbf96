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

// Experiment harness: configuration, metric rows, CSV output and the drivers
// behind the command line subcommands.

#ifndef FWSCALE_BENCH_HPP_
#define FWSCALE_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fwscale/fw.hpp"
#include "fwscale/svrf.hpp"

namespace fws {

enum class ExperimentKind { kFwCompletion, kSvrf, kSsvrf, kLmoBench, kVerifyBounds };

// Accepts the subcommand spellings ("complete-fw", "svrf", "ssvrf",
// "lmo-bench", "verify-bounds") and "fw-completion".
ExperimentKind parse_experiment_kind(const std::string& name);
const char* to_string(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kFwCompletion;
  std::string experiment_id;
  std::size_t n = 200;
  std::size_t m = 0;  // rows for rectangular instances; 0 means m = n
  bool symmetric = true;
  std::vector<std::size_t> ranks{10};
  double p = 0.8;
  double noise_scale = 0.1;
  std::optional<double> alpha;  // unset: nuclear norm of the truth
  std::vector<double> xis{1e-15, 1e-5, 1.0};
  ToleranceRule::Kind tolerance = ToleranceRule::Kind::kConstantXi;
  double delta = 1.0;
  std::vector<std::uint64_t> seeds{1};
  std::size_t max_iter = 100000;
  std::optional<double> time_budget_s;
  std::string output;
  // SVRF / SSVRF
  std::size_t epochs = 4;
  std::vector<SvrfVariant> variants{SvrfVariant::kRestart};
  double batch_multiplier = 1.0;
  double epoch_multiplier = 1.0;
  std::size_t sketch_rank = 0;  // 0: use the instance rank
  bool memory_audit = false;
  bool shadow = false;
  bool write_factors = false;
  // verify-bounds: "fast" skips the timed replication, "all" includes it.
  std::string suites = "fast";
  // Worker threads for independent cells. Timed grids should keep 1.
  std::size_t threads = 1;

  // Defaults for one experiment kind.
  static ExperimentConfig defaults(ExperimentKind kind);

  // Applies one `key = value` setting. Throws ParameterError on an unknown key
  // or a malformed value.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  std::size_t rows() const { return m == 0 ? n : m; }
};

// Defaults for `kind` overlaid with the `key = value` lines of a UTF-8 file.
// Blank lines and lines starting with '#' are ignored.
ExperimentConfig load_experiment_config(ExperimentKind kind,
                                        const std::string& path);
ExperimentConfig parse_experiment_config(ExperimentKind kind,
                                         const std::string& text);

// Instance for one grid cell: the seed and rank fix the instance, so cells
// differing only in xi or variant share it.
CompletionInstance make_experiment_instance(const ExperimentConfig& config,
                                            std::size_t rank,
                                            std::uint64_t seed);
// Explicit alpha, or the nuclear norm of the instance's ground truth.
double experiment_alpha(const ExperimentConfig& config,
                        const CompletionInstance& inst);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// One CSV line. NaN fields and t < 0 are written empty.
struct MetricRow {
  std::string experiment_id;
  std::string variant;
  std::uint64_t seed = 0;
  long long t = -1;
  long long k = 0;
  double wall_ms = kMissing;
  double rel_obj = kMissing;
  double rel_err = kMissing;
  double gap = kMissing;
  double eps_k = kMissing;
  double xi = kMissing;
  double lambda_rel_err = kMissing;
  double bound_ratio = kMissing;
};

extern const char* const kCsvHeader;
std::string format_metric_row(const MetricRow& row);
void write_csv(const std::vector<MetricRow>& rows, const std::string& path);

struct CriterionReport {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured in the direction that must be >= 0
  bool pass = false;
  std::string detail;
};

// `name measured bound margin PASS|FAIL`
std::string format_report_line(const CriterionReport& r);

struct BenchOutcome {
  std::vector<MetricRow> rows;
  std::vector<CriterionReport> reports;
  std::vector<std::string> notes;
  bool all_passed = true;
};

// Deterministic FW on symmetric completion over the PSD nuclear ball, one run
// per (rank, xi, seed) cell, with per-iteration oracle diagnostics.
BenchOutcome run_fw_completion(const ExperimentConfig& config);
// SVRF with dense iterates on a mean-scaled completion objective, one row per
// epoch.
BenchOutcome run_svrf(const ExperimentConfig& config);
// Sketched SVRF, one row per epoch from the reconstructed factors.
BenchOutcome run_ssvrf(const ExperimentConfig& config);
// Oracle accuracy and cost per xi along an exact FW trajectory.
BenchOutcome run_lmo_bench(const ExperimentConfig& config);
// Bound verification suites (implemented with the verification module).
BenchOutcome run_verify_bounds(const ExperimentConfig& config);

// Dispatches on config.kind and writes the CSV when config.output is set.
BenchOutcome run_experiment(const ExperimentConfig& config);

}  // namespace fws

#endif  // FWSCALE_BENCH_HPP_
