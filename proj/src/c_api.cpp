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

#include "fwscale/fwscale.h"

#include <exception>
#include <new>
#include <string>

#include "fwscale/bench.hpp"
#include "fwscale/errors.hpp"
#include "fwscale/lmo.hpp"
#include "fwscale/problems.hpp"
#include "fwscale/sketch.hpp"
#include "fwscale/spectral.hpp"

struct fws_instance {
  fws::CompletionInstance inst;
};

struct fws_sketch {
  fws::SketchState state;
};

namespace {

thread_local std::string g_last_error;

fws_status fail(fws_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

fws_status status_of(fws::ErrorKind kind) {
  switch (kind) {
    case fws::ErrorKind::kParameter:
      return FWS_ERR_PARAMETER;
    case fws::ErrorKind::kInput:
      return FWS_ERR_INPUT;
    case fws::ErrorKind::kConvergence:
      return FWS_ERR_CONVERGENCE;
    case fws::ErrorKind::kConditioning:
      return FWS_ERR_CONDITIONING;
    case fws::ErrorKind::kDegenerate:
      return FWS_ERR_DEGENERATE;
    case fws::ErrorKind::kIo:
      return FWS_ERR_IO;
  }
  return FWS_ERR_INTERNAL;
}

template <typename F>
fws_status guarded(F&& f) {
  try {
    f();
    return FWS_OK;
  } catch (const fws::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FWS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FWS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FWS_ERR_INTERNAL, "unknown exception");
  }
}

#define FWS_REQUIRE(cond)                                            \
  do {                                                               \
    if (!(cond)) return fail(FWS_ERR_NULL_ARGUMENT, "null argument: " #cond); \
  } while (0)

using fws::DenseMatrix;
using fws::Vector;

DenseMatrix dense(const double* a, std::size_t rows, std::size_t cols) {
  return Eigen::Map<const DenseMatrix>(a, static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(cols));
}

void copy_out(const Vector& v, double* dst) {
  Eigen::Map<Vector>(dst, v.size()) = v;
}

}  // namespace

extern "C" {

const char* fws_status_string(fws_status status) {
  switch (status) {
    case FWS_OK:
      return "ok";
    case FWS_ERR_PARAMETER:
      return "invalid parameter";
    case FWS_ERR_INPUT:
      return "invalid input";
    case FWS_ERR_CONVERGENCE:
      return "convergence failure";
    case FWS_ERR_CONDITIONING:
      return "ill-conditioned problem";
    case FWS_ERR_DEGENERATE:
      return "degenerate metric";
    case FWS_ERR_IO:
      return "i/o error";
    case FWS_ERR_NULL_ARGUMENT:
      return "null argument";
    case FWS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* fws_last_error(void) { return g_last_error.c_str(); }

const char* fws_version(void) { return "0.1.0"; }

fws_status fws_instance_create_symmetric(size_t n, size_t rank,
                                         double noise_scale, double p,
                                         uint64_t seed, fws_instance** out) {
  FWS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new fws_instance{
        fws::make_symmetric_completion(n, rank, noise_scale, p, seed)};
  });
}

fws_status fws_instance_create_rectangular(size_t m, size_t n, size_t rank,
                                           double noise_scale, double p,
                                           uint64_t seed, fws_instance** out) {
  FWS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new fws_instance{
        fws::make_rectangular_completion(m, n, rank, noise_scale, p, seed)};
  });
}

fws_status fws_instance_load(const char* path, fws_instance** out) {
  FWS_REQUIRE(path && out);
  *out = nullptr;
  return guarded([&] { *out = new fws_instance{fws::load_instance(path)}; });
}

fws_status fws_instance_save(const fws_instance* inst, const char* path) {
  FWS_REQUIRE(inst && path);
  return guarded([&] { fws::save_instance(inst->inst, path); });
}

fws_status fws_instance_info_get(const fws_instance* inst,
                                 fws_instance_info* info) {
  FWS_REQUIRE(inst && info);
  const auto& i = inst->inst;
  info->rows = i.rows;
  info->cols = i.cols;
  info->symmetric = i.symmetric ? 1 : 0;
  info->rank = i.rank;
  info->num_observed = i.num_observed();
  info->has_truth = i.has_truth() ? 1 : 0;
  return FWS_OK;
}

fws_status fws_instance_metrics(const fws_instance* inst, const double* x,
                                double* rel_obj, double* rel_err) {
  FWS_REQUIRE(inst && x && rel_obj && rel_err);
  return guarded([&] {
    const auto m = fws::relative_metrics(
        dense(x, inst->inst.rows, inst->inst.cols), inst->inst);
    *rel_obj = m.rel_obj;
    *rel_err = m.rel_err;
  });
}

void fws_instance_free(fws_instance* inst) { delete inst; }

fws_status fws_lmo_l1(const double* g, size_t n, double alpha, size_t* index,
                      double* value, double* inner) {
  FWS_REQUIRE(g && index && value && inner);
  return guarded([&] {
    const auto a = fws::lmo_l1(Eigen::Map<const Vector>(g, n), alpha);
    const auto& atom = std::get<fws::BasisAtom>(a.atom);
    *index = atom.index;
    *value = atom.value;
    *inner = a.inner;
  });
}

fws_status fws_lmo_nuclear(const double* g, size_t rows, size_t cols,
                           double alpha, double xi, uint64_t seed,
                           double* scale, double* u, double* v, double* inner) {
  FWS_REQUIRE(g && scale && u && v && inner);
  return guarded([&] {
    const auto a = fws::lmo_nuclear(dense(g, rows, cols), alpha, xi, seed);
    const auto& atom = std::get<fws::RankOneAtom>(a.atom);
    *scale = atom.scale;
    copy_out(atom.left, u);
    copy_out(atom.right, v);
    *inner = a.inner;
  });
}

fws_status fws_lmo_psd_nuclear(const double* g, size_t n, double alpha,
                               double xi, uint64_t seed, double* scale,
                               double* v, double* inner) {
  FWS_REQUIRE(g && scale && v && inner);
  return guarded([&] {
    const auto a = fws::lmo_psd_nuclear(dense(g, n, n), alpha, xi, seed);
    const auto& atom = std::get<fws::RankOneAtom>(a.atom);
    if (atom.zero) {
      *scale = 0.0;
      Eigen::Map<Vector>(v, static_cast<Eigen::Index>(n)).setZero();
    } else {
      *scale = atom.scale;
      copy_out(atom.right, v);
    }
    *inner = a.inner;
  });
}

fws_status fws_extreme_eigenpair(const double* a, size_t n, int largest,
                                 double xi, uint64_t seed, double* value,
                                 double* vec, double* residual) {
  FWS_REQUIRE(a && value && vec && residual);
  return guarded([&] {
    const auto op = fws::LinearOperator::from_dense(dense(a, n, n), true);
    const auto r = fws::extreme_eigenpair(
        op, largest ? fws::Which::kLargest : fws::Which::kSmallest, xi, seed);
    *value = r.value;
    copy_out(r.right, vec);
    *residual = r.residual;
  });
}

fws_status fws_top_singular_pair(const double* a, size_t rows, size_t cols,
                                 double xi, uint64_t seed, double* sigma,
                                 double* u, double* v) {
  FWS_REQUIRE(a && sigma && u && v);
  return guarded([&] {
    const auto r = fws::top_singular_pair(
        fws::LinearOperator::from_dense(dense(a, rows, cols)), xi, seed);
    *sigma = r.value;
    copy_out(r.left, u);
    copy_out(r.right, v);
  });
}

fws_status fws_sketch_create(size_t rows, size_t cols, size_t rank,
                             uint64_t seed, fws_sketch** out) {
  FWS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new fws_sketch{fws::SketchState(rows, cols, rank, seed)};
  });
}

fws_status fws_sketch_update(fws_sketch* sketch, double beta1, double beta2,
                             const double* u, const double* v) {
  FWS_REQUIRE(sketch && u && v);
  return guarded([&] {
    const auto& s = sketch->state;
    sketch->state.update(
        beta1, beta2,
        Eigen::Map<const Vector>(u, static_cast<Eigen::Index>(s.rows())),
        Eigen::Map<const Vector>(v, static_cast<Eigen::Index>(s.cols())));
  });
}

fws_status fws_sketch_reconstruct(const fws_sketch* sketch, size_t r,
                                  double* x) {
  FWS_REQUIRE(sketch && x);
  return guarded([&] {
    const auto& s = sketch->state;
    Eigen::Map<DenseMatrix>(x, static_cast<Eigen::Index>(s.rows()),
                            static_cast<Eigen::Index>(s.cols())) =
        fws::sketch_reconstruct(s, r).reconstruct();
  });
}

size_t fws_sketch_buffer_floats(const fws_sketch* sketch) {
  return sketch ? sketch->state.buffer_floats() : 0;
}

void fws_sketch_free(fws_sketch* sketch) { delete sketch; }

void fws_bench_options_init(fws_bench_options* options) {
  if (!options) return;
  *options = fws_bench_options{};
}

fws_status fws_bench_run(const char* subcommand,
                         const fws_bench_options* options, int* all_passed) {
  FWS_REQUIRE(subcommand && all_passed);
  *all_passed = 0;
  fws_bench_options opts{};
  if (options) opts = *options;
  return guarded([&] {
    const fws::ExperimentKind kind = fws::parse_experiment_kind(subcommand);
    fws::ExperimentConfig config =
        opts.config_path ? fws::load_experiment_config(kind, opts.config_path)
                         : fws::ExperimentConfig::defaults(kind);
    if (opts.out_path) config.output = opts.out_path;
    if (opts.has_seed) config.seeds = {opts.seed};
    if (opts.time_budget_s > 0.0) config.time_budget_s = opts.time_budget_s;
    if (opts.max_iters > 0) config.max_iter = static_cast<std::size_t>(opts.max_iters);
    if (opts.shadow) config.shadow = true;
    config.validate();

    const fws::BenchOutcome out = fws::run_experiment(config);
    if (opts.sink) {
      for (const auto& line : out.notes) opts.sink(line.c_str(), opts.sink_ctx);
      if (kind != fws::ExperimentKind::kVerifyBounds)
        for (const auto& r : out.reports)
          opts.sink(fws::format_report_line(r).c_str(), opts.sink_ctx);
      const std::string summary =
          std::to_string(out.rows.size()) + " rows" +
          (config.output.empty() ? "" : " -> " + config.output);
      if (kind != fws::ExperimentKind::kVerifyBounds)
        opts.sink(summary.c_str(), opts.sink_ctx);
    }
    *all_passed = out.all_passed ? 1 : 0;
  });
}

}  // extern "C"
