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

// Exercises the shared library through its C header only.

#include "fwscale/fwscale.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace {

class InstanceHandle {
 public:
  InstanceHandle() = default;
  ~InstanceHandle() { fws_instance_free(p_); }
  fws_instance** out() { return &p_; }
  fws_instance* get() const { return p_; }

 private:
  fws_instance* p_ = nullptr;
};

TEST(CApiTest, VersionAndStatusStrings) {
  EXPECT_STREQ(fws_version(), "0.1.0");
  EXPECT_STREQ(fws_status_string(FWS_OK), "ok");
  EXPECT_STREQ(fws_status_string(FWS_ERR_IO), "i/o error");
}

TEST(CApiTest, InstanceLifecycle) {
  InstanceHandle inst;
  ASSERT_EQ(fws_instance_create_symmetric(6, 2, 0.0, 1.0, 3, inst.out()), FWS_OK);
  fws_instance_info info;
  ASSERT_EQ(fws_instance_info_get(inst.get(), &info), FWS_OK);
  EXPECT_EQ(info.rows, 6u);
  EXPECT_EQ(info.cols, 6u);
  EXPECT_EQ(info.symmetric, 1);
  EXPECT_EQ(info.num_observed, 36u);
  EXPECT_EQ(info.has_truth, 1);

  std::vector<double> zero(36, 0.0);
  double rel_obj = -1, rel_err = -1;
  ASSERT_EQ(fws_instance_metrics(inst.get(), zero.data(), &rel_obj, &rel_err),
            FWS_OK);
  EXPECT_DOUBLE_EQ(rel_obj, 1.0);
  EXPECT_DOUBLE_EQ(rel_err, 1.0);
}

TEST(CApiTest, SaveAndLoad) {
  InstanceHandle inst, back;
  ASSERT_EQ(fws_instance_create_rectangular(5, 4, 1, 0.1, 0.5, 8, inst.out()),
            FWS_OK);
  const std::string path =
      (std::filesystem::temp_directory_path() / "fws_capi.txt").string();
  ASSERT_EQ(fws_instance_save(inst.get(), path.c_str()), FWS_OK);
  ASSERT_EQ(fws_instance_load(path.c_str(), back.out()), FWS_OK);
  std::remove(path.c_str());
  fws_instance_info a, b;
  fws_instance_info_get(inst.get(), &a);
  fws_instance_info_get(back.get(), &b);
  EXPECT_EQ(a.num_observed, b.num_observed);
  EXPECT_EQ(b.has_truth, 0);
  std::vector<double> x(20, 0.0);
  double o, e;
  EXPECT_EQ(fws_instance_metrics(back.get(), x.data(), &o, &e),
            FWS_ERR_DEGENERATE);
}

TEST(CApiTest, ErrorsCarryMessages) {
  InstanceHandle inst;
  EXPECT_EQ(fws_instance_create_symmetric(3, 5, 0.0, 1.0, 1, inst.out()),
            FWS_ERR_PARAMETER);
  EXPECT_EQ(inst.get(), nullptr);
  EXPECT_NE(std::string(fws_last_error()).find("rank"), std::string::npos);
  EXPECT_EQ(fws_instance_load("/no/such/file", inst.out()), FWS_ERR_IO);
  EXPECT_EQ(fws_instance_create_symmetric(3, 1, 0.0, 1.0, 1, nullptr),
            FWS_ERR_NULL_ARGUMENT);
}

TEST(CApiTest, Oracles) {
  const double g[] = {3.0, -1.0};
  size_t index = 9;
  double value = 0, inner = 0;
  ASSERT_EQ(fws_lmo_l1(g, 2, 2.0, &index, &value, &inner), FWS_OK);
  EXPECT_EQ(index, 0u);
  EXPECT_EQ(value, -2.0);
  EXPECT_EQ(inner, -6.0);

  const double pd[] = {1.0, 0.0, 0.0, 2.0};
  double scale = -1, v[2], u[2];
  ASSERT_EQ(fws_lmo_psd_nuclear(pd, 2, 1.0, 1e-10, 1, &scale, v, &inner), FWS_OK);
  EXPECT_EQ(scale, 0.0);
  EXPECT_EQ(inner, 0.0);

  const double indef[] = {1.0, 0.0, 0.0, -2.0};
  ASSERT_EQ(fws_lmo_psd_nuclear(indef, 2, 3.0, 1e-10, 1, &scale, v, &inner),
            FWS_OK);
  EXPECT_EQ(scale, 3.0);
  EXPECT_NEAR(inner, -6.0, 1e-12);
  EXPECT_NEAR(std::abs(v[1]), 1.0, 1e-10);

  const double diag[] = {3.0, 0.0, 0.0, 1.0};
  ASSERT_EQ(fws_lmo_nuclear(diag, 2, 2, 1.0, 1e-10, 1, &scale, u, v, &inner),
            FWS_OK);
  EXPECT_NEAR(inner, -3.0, 1e-12);

  const double asym[] = {1.0, 2.0, 0.0, 1.0};
  EXPECT_EQ(fws_lmo_psd_nuclear(asym, 2, 1.0, 1e-8, 1, &scale, v, &inner),
            FWS_ERR_INPUT);
}

TEST(CApiTest, SpectralSolvers) {
  const double a[] = {1, 0, 0, 0, 2, 0, 0, 0, 3};
  double value = 0, vec[3], residual = 1;
  ASSERT_EQ(fws_extreme_eigenpair(a, 3, 1, 1e-10, 2, &value, vec, &residual),
            FWS_OK);
  EXPECT_NEAR(value, 3.0, 1e-12);
  ASSERT_EQ(fws_extreme_eigenpair(a, 3, 0, 1e-10, 2, &value, vec, &residual),
            FWS_OK);
  EXPECT_NEAR(value, 1.0, 1e-12);
  double sigma = 0, u[3], v[3];
  ASSERT_EQ(fws_top_singular_pair(a, 3, 3, 1e-10, 2, &sigma, u, v), FWS_OK);
  EXPECT_NEAR(sigma, 3.0, 1e-12);
}

TEST(CApiTest, SketchRecoversRankOne) {
  fws_sketch* s = nullptr;
  ASSERT_EQ(fws_sketch_create(4, 3, 1, 5, &s), FWS_OK);
  EXPECT_EQ(fws_sketch_buffer_floats(s), 4u * 3 + 7u * 3);
  const double u[] = {1, 2, 3, 4}, v[] = {1, -1, 2};
  ASSERT_EQ(fws_sketch_update(s, 0.0, 2.0, u, v), FWS_OK);
  double x[12];
  ASSERT_EQ(fws_sketch_reconstruct(s, 1, x), FWS_OK);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i)
      EXPECT_NEAR(x[i + 4 * j], 2.0 * u[i] * v[j], 1e-10);
  fws_sketch_free(s);
  EXPECT_EQ(fws_sketch_buffer_floats(nullptr), 0u);
}

void collect(const char* line, void* ctx) {
  static_cast<std::vector<std::string>*>(ctx)->emplace_back(line);
}

TEST(CApiTest, BenchRunWritesCsv) {
  const std::string out =
      (std::filesystem::temp_directory_path() / "fws_capi_ssvrf.csv").string();
  fws_bench_options opts;
  fws_bench_options_init(&opts);
  opts.out_path = out.c_str();
  opts.has_seed = 1;
  opts.seed = 3;
  opts.shadow = 1;
  std::vector<std::string> lines;
  opts.sink = collect;
  opts.sink_ctx = &lines;
  int passed = 0;
  ASSERT_EQ(fws_bench_run("ssvrf", &opts, &passed), FWS_OK) << fws_last_error();
  EXPECT_EQ(passed, 1);
  ASSERT_FALSE(lines.empty());
  EXPECT_NE(lines.back().find("rows -> "), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out));
  std::remove(out.c_str());

  EXPECT_EQ(fws_bench_run("nonsense", &opts, &passed), FWS_ERR_PARAMETER);
  EXPECT_EQ(fws_bench_run("svrf", &opts, nullptr), FWS_ERR_NULL_ARGUMENT);
}

}  // namespace
