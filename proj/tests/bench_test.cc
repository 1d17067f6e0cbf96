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

#include "fwscale/bench.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fwscale/errors.hpp"
#include "fwscale/verify.hpp"
#include "gtest/gtest.h"

namespace fws {
namespace {

TEST(ExperimentKindTest, ParsesSubcommandNames) {
  EXPECT_EQ(parse_experiment_kind("complete-fw"), ExperimentKind::kFwCompletion);
  EXPECT_EQ(parse_experiment_kind("fw-completion"), ExperimentKind::kFwCompletion);
  EXPECT_EQ(parse_experiment_kind("svrf"), ExperimentKind::kSvrf);
  EXPECT_EQ(parse_experiment_kind("ssvrf"), ExperimentKind::kSsvrf);
  EXPECT_EQ(parse_experiment_kind("lmo-bench"), ExperimentKind::kLmoBench);
  EXPECT_EQ(parse_experiment_kind("verify-bounds"), ExperimentKind::kVerifyBounds);
  EXPECT_THROW(parse_experiment_kind("frank"), ParameterError);
}

TEST(ExperimentConfigTest, ParsesKeyValueText) {
  const auto c = parse_experiment_config(ExperimentKind::kSvrf, R"(
# comment line
experiment_id = demo
n = 30
m = 20
symmetric = false
ranks = 2, 3
seeds = 1..5
xis = 1e-3, 1
variant = both
delta = 0.25
time_budget_s = none
)");
  EXPECT_EQ(c.experiment_id, "demo");
  EXPECT_EQ(c.n, 30u);
  EXPECT_EQ(c.rows(), 20u);
  EXPECT_FALSE(c.symmetric);
  EXPECT_EQ(c.ranks, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(c.xis, (std::vector<double>{1e-3, 1.0}));
  EXPECT_EQ(c.variants.size(), 2u);
  EXPECT_EQ(c.delta, 0.25);
  EXPECT_FALSE(c.time_budget_s.has_value());
}

TEST(ExperimentConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_experiment_config(ExperimentKind::kSvrf, "colour = red"),
               ParameterError);
  EXPECT_THROW(parse_experiment_config(ExperimentKind::kSvrf, "n = ten"),
               ParameterError);
  EXPECT_THROW(parse_experiment_config(ExperimentKind::kSvrf, "n 10"),
               ParameterError);
  // Ranges are checked by validate(), after command-line overrides.
  EXPECT_THROW(
      parse_experiment_config(ExperimentKind::kSvrf, "delta = -1").validate(),
      ParameterError);
}

TEST(ExperimentConfigTest, KindSpecificValidation) {
  auto fw = ExperimentConfig::defaults(ExperimentKind::kFwCompletion);
  EXPECT_EQ(fw.n, 200u);
  EXPECT_EQ(fw.ranks, (std::vector<std::size_t>{10, 50, 100}));
  ASSERT_TRUE(fw.time_budget_s.has_value());
  EXPECT_EQ(*fw.time_budget_s, 30.0);
  fw.symmetric = false;
  EXPECT_THROW(fw.validate(), ParameterError);

  auto ss = ExperimentConfig::defaults(ExperimentKind::kSsvrf);
  ss.validate();
  ss.symmetric = true;
  EXPECT_THROW(ss.validate(), ParameterError);
}

TEST(ExperimentConfigTest, MissingFileIsIoError) {
  EXPECT_THROW(load_experiment_config(ExperimentKind::kSvrf, "/no/such.cfg"),
               IoError);
}

TEST(MetricRowTest, HeaderAndFormatting) {
  EXPECT_STREQ(kCsvHeader,
               "experiment_id,variant,seed,t,k,wall_ms,rel_obj,rel_err,gap,"
               "eps_k,xi,lambda_rel_err,bound_ratio");
  MetricRow row;
  row.experiment_id = "e";
  row.variant = "rank=2|xi=1";
  row.seed = 4;
  row.k = 7;
  row.rel_err = 0.5;
  EXPECT_EQ(format_metric_row(row), "e,rank=2|xi=1,4,,7,,,0.5,,,,,");
  row.t = 3;
  row.gap = 1e-9;
  EXPECT_EQ(format_metric_row(row), "e,rank=2|xi=1,4,3,7,,,0.5,1e-09,,,,");
}

TEST(MetricRowTest, WriteCsv) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "fws_bench_test.csv").string();
  std::vector<MetricRow> rows(3);
  write_csv(rows, path);
  std::ifstream in(path);
  std::string line;
  int count = 0;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  while (std::getline(in, line)) ++count;
  std::remove(path.c_str());
  EXPECT_EQ(count, 3);
}

TEST(ReportTest, LineFormat) {
  CriterionReport r{"x", 0.5, 1.0, 0.5, true, ""};
  EXPECT_EQ(format_report_line(r), "x 0.5 1 0.5 PASS");
  r.pass = false;
  EXPECT_EQ(format_report_line(r), "x 0.5 1 0.5 FAIL");
}

TEST(RunFwCompletionTest, SmallGrid) {
  auto c = ExperimentConfig::defaults(ExperimentKind::kFwCompletion);
  c.n = 20;
  c.ranks = {2};
  c.xis = {1e-5, 1.0};
  c.time_budget_s.reset();
  c.max_iter = 25;
  const auto out = run_fw_completion(c);
  ASSERT_EQ(out.rows.size(), 50u);
  for (const auto& row : out.rows) {
    EXPECT_EQ(row.variant.rfind("rank=2|xi=", 0), 0u) << row.variant;
    EXPECT_GE(row.rel_err, 0.0);
    if (!std::isnan(row.bound_ratio)) EXPECT_GE(row.bound_ratio, 1.0);
    EXPECT_GE(row.eps_k, -1e-9);
  }
}

TEST(RunSvrfTest, EpochRows) {
  auto c = ExperimentConfig::defaults(ExperimentKind::kSvrf);
  c.n = 15;
  c.ranks = {2};
  c.epochs = 2;
  c.batch_multiplier = 0.1;
  c.seeds = {1, 2};
  const auto out = run_svrf(c);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_EQ(out.rows[0].t, 1);
  EXPECT_EQ(out.rows[1].t, 2);
  EXPECT_EQ(out.rows[1].k, 14 + 30);
}

TEST(RunSsvrfTest, NoiselessRecoveryAndMemoryAudit) {
  auto c = ExperimentConfig::defaults(ExperimentKind::kSsvrf);
  c.seeds = {1, 2};
  c.memory_audit = true;
  c.shadow = true;
  const auto out = run_ssvrf(c);
  EXPECT_TRUE(out.all_passed);
  ASSERT_EQ(out.rows.size(), 2 * c.epochs);
  for (const auto& note : out.notes)
    EXPECT_NE(note.find("(match)"), std::string::npos) << note;
  EXPECT_LE(out.rows[c.epochs - 1].rel_err, 1e-2);
  EXPECT_LE(out.rows.back().rel_err, 1e-2);
}

TEST(RunSsvrfTest, RowsDependOnlyOnTheirSeed) {
  auto c = ExperimentConfig::defaults(ExperimentKind::kSsvrf);
  c.epochs = 2;
  c.seeds = {3, 4};
  const auto both = run_ssvrf(c);
  c.seeds = {4};
  const auto alone = run_ssvrf(c);
  ASSERT_EQ(alone.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(alone.rows[i].seed, 4u);
    EXPECT_EQ(alone.rows[i].rel_err, both.rows[2 + i].rel_err);
    EXPECT_EQ(alone.rows[i].rel_obj, both.rows[2 + i].rel_obj);
  }
}

TEST(RunLmoBenchTest, OneRowPerTolerance) {
  auto c = ExperimentConfig::defaults(ExperimentKind::kLmoBench);
  c.n = 20;
  c.ranks = {2};
  c.xis = {1e-8, 1.0};
  c.max_iter = 5;
  const auto out = run_lmo_bench(c);
  ASSERT_EQ(out.rows.size(), 10u);
  for (const auto& row : out.rows) {
    EXPECT_GE(row.eps_k, -1e-9);
    EXPECT_FALSE(std::isnan(row.lambda_rel_err));
  }
}

// Synthetic rows for the replication checks: rank 10, two tolerances.
std::vector<MetricRow> synthetic_rows(double slow_ms, double fast_ms) {
  std::vector<MetricRow> rows;
  for (const auto& [xi, per_iter] : {std::pair{1e-5, slow_ms}, {1.0, fast_ms}}) {
    for (int k = 0; k < 200; ++k) {
      MetricRow r;
      r.variant = "rank=10|xi=" + std::to_string(xi);
      r.seed = 1;
      r.k = k;
      r.xi = xi;
      r.wall_ms = per_iter * (k + 1) + ((k % 2) ? 0.05 : -0.05);
      r.rel_err = 1.0 / (k + 1);
      r.eps_k = 0.0;
      r.bound_ratio = 2.0;
      rows.push_back(r);
    }
  }
  return rows;
}

TEST(CheckReplicationTest, SyntheticPassAndFail) {
  auto c = ExperimentConfig::defaults(ExperimentKind::kFwCompletion);
  c.n = 30;
  auto reports = check_replication(c, synthetic_rows(2.0, 1.0));
  ASSERT_EQ(reports.size(), 4u);
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.name;

  reports = check_replication(c, synthetic_rows(1.0, 2.0));
  EXPECT_FALSE(reports[1].pass);
  EXPECT_EQ(reports[1].name, "replication_time_trend");
}

}  // namespace
}  // namespace fws
