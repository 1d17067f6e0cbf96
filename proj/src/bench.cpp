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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "fwscale/errors.hpp"
#include "fwscale/ssvrf.hpp"
#include "fwscale/verify.hpp"

namespace fws {

namespace {

using Clock = std::chrono::steady_clock;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ParameterError("config: bad value '" + value + "' for key '" + key +
                       "'");
}

double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) bad_value(key, s);
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) bad_value(key, s);
  return v;
}

std::size_t parse_size(const std::string& key, const std::string& s) {
  return static_cast<std::size_t>(parse_u64(key, s));
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad_value(key, s);
}

// "1,2,5" or "1..20".
std::vector<std::uint64_t> parse_seeds(const std::string& key,
                                       const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(s)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_u64(key, item));
      continue;
    }
    const std::uint64_t lo = parse_u64(key, trim(item.substr(0, dots)));
    const std::uint64_t hi = parse_u64(key, trim(item.substr(dots + 2)));
    if (hi < lo || hi - lo > 1000000) bad_value(key, s);
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) bad_value(key, s);
  return out;
}

std::string fmt_g(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Runs fn(i) for i in [0, count) on `threads` workers; rethrows the first
// failure after all workers stop.
void for_each_cell(std::size_t count, std::size_t threads,
                   const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string xi_label(double xi) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "xi=%g", xi);
  return buf;
}

std::string id_or(const ExperimentConfig& c) {
  return c.experiment_id.empty() ? to_string(c.kind) : c.experiment_id;
}

}  // namespace

// Seed streams: instances depend on (seed, rank), algorithm randomness on the
// run parameters, never on a cell's position in the grid.
constexpr std::uint64_t kInstanceStream = 0x1a57;
constexpr std::uint64_t kRunStream = 0x7a11;

CompletionInstance make_experiment_instance(const ExperimentConfig& c,
                                            std::size_t rank,
                                            std::uint64_t seed) {
  const std::uint64_t s = derive_seed(seed, kInstanceStream, rank);
  if (c.symmetric)
    return make_symmetric_completion(c.n, rank, c.noise_scale, c.p, s);
  return make_rectangular_completion(c.rows(), c.n, rank, c.noise_scale, c.p,
                                     s);
}

double experiment_alpha(const ExperimentConfig& c,
                        const CompletionInstance& inst) {
  if (c.alpha) return *c.alpha;
  if (!inst.has_truth())
    throw DegenerateError("alpha policy needs a ground truth");
  // trace(W W^T) for the symmetric PSD truth.
  if (inst.symmetric) return inst.truth_left.squaredNorm();
  return nuclear_norm(inst.truth());
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "complete-fw" || name == "fw-completion")
    return ExperimentKind::kFwCompletion;
  if (name == "svrf") return ExperimentKind::kSvrf;
  if (name == "ssvrf") return ExperimentKind::kSsvrf;
  if (name == "lmo-bench") return ExperimentKind::kLmoBench;
  if (name == "verify-bounds") return ExperimentKind::kVerifyBounds;
  throw ParameterError("unknown experiment kind '" + name + "'");
}

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFwCompletion:
      return "fw-completion";
    case ExperimentKind::kSvrf:
      return "svrf";
    case ExperimentKind::kSsvrf:
      return "ssvrf";
    case ExperimentKind::kLmoBench:
      return "lmo-bench";
    case ExperimentKind::kVerifyBounds:
      return "verify-bounds";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::kFwCompletion:
      c.ranks = {10, 50, 100};
      c.time_budget_s = 30.0;
      break;
    case ExperimentKind::kSvrf:
      c.n = 100;
      c.ranks = {5};
      c.delta = 0.1;
      c.epochs = 4;
      break;
    case ExperimentKind::kSsvrf:
      c.symmetric = false;
      c.m = 20;
      c.n = 15;
      c.ranks = {2};
      c.p = 1.0;
      c.noise_scale = 0.0;
      c.delta = 0.1;
      c.epochs = 6;
      break;
    case ExperimentKind::kLmoBench:
      c.max_iter = 20;
      break;
    case ExperimentKind::kVerifyBounds:
      break;
  }
  return c;
}

void ExperimentConfig::set(const std::string& key_in,
                           const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (value.empty()) bad_value(key, value);
  if (key == "experiment_id") {
    experiment_id = value;
  } else if (key == "kind") {
    if (parse_experiment_kind(value) != kind)
      throw ParameterError("config kind '" + value +
                           "' does not match the subcommand");
  } else if (key == "n") {
    n = parse_size(key, value);
  } else if (key == "m") {
    m = parse_size(key, value);
  } else if (key == "symmetric") {
    symmetric = parse_bool(key, value);
  } else if (key == "rank" || key == "ranks") {
    ranks.clear();
    for (const auto& r : split_list(value)) ranks.push_back(parse_size(key, r));
    if (ranks.empty()) bad_value(key, value);
  } else if (key == "p") {
    p = parse_double(key, value);
  } else if (key == "noise_scale") {
    noise_scale = parse_double(key, value);
  } else if (key == "alpha") {
    if (value == "truth" || value == "nuclear-of-truth")
      alpha.reset();
    else
      alpha = parse_double(key, value);
  } else if (key == "xi" || key == "xis") {
    xis.clear();
    for (const auto& x : split_list(value)) xis.push_back(parse_double(key, x));
    if (xis.empty()) bad_value(key, value);
  } else if (key == "tolerance") {
    if (value == "constant-xi")
      tolerance = ToleranceRule::Kind::kConstantXi;
    else if (value == "theorem1")
      tolerance = ToleranceRule::Kind::kTheorem1;
    else if (value == "exact")
      tolerance = ToleranceRule::Kind::kExact;
    else
      bad_value(key, value);
  } else if (key == "delta") {
    delta = parse_double(key, value);
  } else if (key == "seed" || key == "seeds") {
    seeds = parse_seeds(key, value);
  } else if (key == "max_iter") {
    max_iter = parse_size(key, value);
  } else if (key == "time_budget_s") {
    if (value == "none")
      time_budget_s.reset();
    else
      time_budget_s = parse_double(key, value);
  } else if (key == "output") {
    output = value;
  } else if (key == "epochs") {
    epochs = parse_size(key, value);
  } else if (key == "variant") {
    if (value == "restart")
      variants = {SvrfVariant::kRestart};
    else if (value == "stable")
      variants = {SvrfVariant::kStable};
    else if (value == "both")
      variants = {SvrfVariant::kRestart, SvrfVariant::kStable};
    else
      bad_value(key, value);
  } else if (key == "batch_multiplier") {
    batch_multiplier = parse_double(key, value);
  } else if (key == "epoch_multiplier") {
    epoch_multiplier = parse_double(key, value);
  } else if (key == "sketch_rank") {
    sketch_rank = parse_size(key, value);
  } else if (key == "memory_audit") {
    memory_audit = parse_bool(key, value);
  } else if (key == "shadow") {
    shadow = parse_bool(key, value);
  } else if (key == "write_factors") {
    write_factors = parse_bool(key, value);
  } else if (key == "suites") {
    if (value != "fast" && value != "all") bad_value(key, value);
    suites = value;
  } else if (key == "threads") {
    threads = parse_size(key, value);
  } else {
    throw ParameterError("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("config: ") + what);
  };
  require(n >= 1, "n must be >= 1");
  require(!symmetric || m == 0 || m == n, "symmetric instances are square");
  require(!ranks.empty(), "at least one rank");
  for (std::size_t r : ranks)
    require(r >= 1 && r <= std::min(rows(), n), "rank must be in [1, min(m, n)]");
  require(p > 0.0 && p <= 1.0, "p must be in (0, 1]");
  require(noise_scale >= 0.0, "noise_scale must be >= 0");
  require(!alpha || *alpha > 0.0, "alpha must be > 0");
  require(!xis.empty(), "at least one xi");
  for (double x : xis) require(x >= 0.0, "xi must be >= 0");
  require(delta >= 0.0, "delta must be >= 0");
  require(!seeds.empty(), "at least one seed");
  require(max_iter >= 1, "max_iter must be >= 1");
  require(!time_budget_s || *time_budget_s > 0.0, "time_budget_s must be > 0");
  require(epochs >= 1 && epochs <= 30, "epochs must be in [1, 30]");
  require(batch_multiplier > 0.0 && epoch_multiplier > 0.0,
          "schedule multipliers must be > 0");
  require(!variants.empty(), "at least one variant");
  require(threads >= 1, "threads must be >= 1");
  if (kind == ExperimentKind::kFwCompletion || kind == ExperimentKind::kLmoBench)
    require(symmetric, "this experiment runs on symmetric instances");
  if (kind == ExperimentKind::kSsvrf)
    require(!symmetric, "ssvrf runs on rectangular instances");
}

ExperimentConfig parse_experiment_config(ExperimentKind kind,
                                         const std::string& text) {
  ExperimentConfig c = ExperimentConfig::defaults(kind);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) +
                           ": expected key = value");
    c.set(t.substr(0, eq), t.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_experiment_config(ExperimentKind kind,
                                        const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(kind, ss.str());
}

const char* const kCsvHeader =
    "experiment_id,variant,seed,t,k,wall_ms,rel_obj,rel_err,gap,eps_k,xi,"
    "lambda_rel_err,bound_ratio";

std::string format_metric_row(const MetricRow& r) {
  std::string s = r.experiment_id + "," + r.variant + "," +
                  std::to_string(r.seed) + "," +
                  (r.t >= 0 ? std::to_string(r.t) : std::string()) + "," +
                  std::to_string(r.k);
  for (double v : {r.wall_ms, r.rel_obj, r.rel_err, r.gap, r.eps_k, r.xi,
                   r.lambda_rel_err, r.bound_ratio})
    s += "," + fmt_g(v);
  return s;
}

void write_csv(const std::vector<MetricRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  std::fprintf(f, "%s\n", kCsvHeader);
  for (const auto& r : rows) std::fprintf(f, "%s\n", format_metric_row(r).c_str());
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw IoError("error writing '" + path + "'");
}

std::string format_report_line(const CriterionReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), " %.6g %.6g %.6g ", r.measured, r.bound,
                r.margin);
  return r.name + buf + (r.pass ? "PASS" : "FAIL");
}

// ---------------------------------------------------------------------------
// Deterministic FW completion grid.

BenchOutcome run_fw_completion(const ExperimentConfig& config) {
  config.validate();
  struct Cell {
    std::size_t rank;
    double xi;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t r : config.ranks)
    for (double xi : config.xis)
      for (std::uint64_t s : config.seeds) cells.push_back({r, xi, s});

  std::vector<std::vector<MetricRow>> per_cell(cells.size());
  const std::string id = id_or(config);
  for_each_cell(cells.size(), config.threads, [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    const CompletionInstance inst =
        make_experiment_instance(config, cell.rank, cell.seed);
    const double alpha = experiment_alpha(config, inst);
    const Domain domain = Domain::psd_nuclear(inst.rows, alpha);
    const CompletionObjective objective(inst, Scaling::kPaperTotal);
    const DenseMatrix x0 = inst.truth();
    const double x0_sq = x0.squaredNorm();
    const double diameter = 2.0 * alpha;

    FwConfig fc;
    fc.gap_tol = -std::numeric_limits<double>::infinity();
    fc.max_iter = config.max_iter;
    fc.time_budget_s = config.time_budget_s;
    fc.seed = derive_seed(cell.seed, kRunStream, cell.rank);
    fc.record_objective = false;
    switch (config.tolerance) {
      case ToleranceRule::Kind::kConstantXi:
        fc.tolerance = ToleranceRule::constant_xi(cell.xi);
        break;
      case ToleranceRule::Kind::kTheorem1:
        fc.tolerance = ToleranceRule::theorem1(objective.smoothness(), diameter,
                                               config.delta);
        break;
      case ToleranceRule::Kind::kExact:
        fc.tolerance = ToleranceRule::exact();
        break;
    }

    std::string variant = "rank=" + std::to_string(cell.rank) + "|";
    if (config.tolerance == ToleranceRule::Kind::kConstantXi)
      variant += xi_label(cell.xi);
    else if (config.tolerance == ToleranceRule::Kind::kTheorem1)
      variant += "theorem1";
    else
      variant += "exact";
    auto& rows = per_cell[ci];
    const FwObserver observer = [&](const FwIterationView& v) {
      MetricRow row;
      row.experiment_id = id;
      row.variant = variant;
      row.seed = cell.seed;
      row.k = static_cast<long long>(v.k);
      row.wall_ms = 1000.0 * v.record.wall_s;
      row.gap = v.record.gap;
      row.xi = v.request.xi;

      const Eigen::Map<const DenseMatrix> x(v.x_prev.data(), inst.rows,
                                            inst.cols);
      row.rel_obj =
          relative_objective_from_measurements(inst.sampling->apply(v.x_prev),
                                               inst);
      row.rel_err = (x - x0).squaredNorm() / x0_sq;

      LinearOperator g = v.gradient.as_operator();
      g.symmetric = true;
      const std::uint64_t ref_seed = derive_seed(fc.seed, 0x7ef, v.k);
      const double lambda_min =
          extreme_eigenpair(g, Which::kSmallest, kReferenceTolerance, ref_seed)
              .value;
      const double lambda_max =
          extreme_eigenpair(g, Which::kLargest, kReferenceTolerance,
                            ref_seed + 1)
              .value;
      const double exact_min = alpha * std::min(lambda_min, 0.0);
      const double eps = oracle_suboptimality(v.answer, exact_min);
      row.eps_k = eps;
      if (std::isfinite(v.answer.spectral_value) && lambda_min != 0.0)
        row.lambda_rel_err =
            std::abs(v.answer.spectral_value - lambda_min) / std::abs(lambda_min);
      const double g_norm = std::max(std::abs(lambda_min), std::abs(lambda_max));
      if (eps > 0.0)
        row.bound_ratio = v.answer.tolerance_used * alpha * g_norm / eps;
      rows.push_back(std::move(row));
    };
    frank_wolfe(objective, domain, Vector::Zero(inst.rows * inst.cols), fc, {},
                observer);
  });

  BenchOutcome out;
  for (auto& rows : per_cell)
    for (auto& r : rows) out.rows.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// SVRF with dense iterates.

BenchOutcome run_svrf(const ExperimentConfig& config) {
  config.validate();
  struct Cell {
    std::size_t rank;
    SvrfVariant variant;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t r : config.ranks)
    for (SvrfVariant v : config.variants)
      for (std::uint64_t s : config.seeds) cells.push_back({r, v, s});

  std::vector<std::vector<MetricRow>> per_cell(cells.size());
  const std::string id = id_or(config);
  for_each_cell(cells.size(), config.threads, [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    const CompletionInstance inst =
        make_experiment_instance(config, cell.rank, cell.seed);
    const double alpha = experiment_alpha(config, inst);
    const Domain domain = inst.symmetric
                              ? Domain::psd_nuclear(inst.rows, alpha)
                              : Domain::nuclear(inst.rows, inst.cols, alpha);
    const CompletionObjective objective(inst, Scaling::kMean);

    SvrfConfig sc;
    sc.delta = config.delta;
    sc.smoothness = objective.smoothness();
    sc.diameter = 2.0 * alpha;
    sc.epochs = config.epochs;
    sc.variant = cell.variant;
    sc.batch_multiplier = config.batch_multiplier;
    sc.epoch_multiplier = config.epoch_multiplier;
    sc.seed = derive_seed(cell.seed, kRunStream, cell.rank,
                          static_cast<std::uint64_t>(cell.variant));

    std::vector<Vector> epoch_end;
    Vector last;
    std::size_t current_t = 0;
    const SvrfObserver observer = [&](const SvrfStepView& v) {
      if (v.t != current_t && current_t >= 1) epoch_end.push_back(last);
      current_t = v.t;
      last = v.w;
    };
    const SvrfResult res = svrf_run(objective, domain,
                                    Vector::Zero(inst.rows * inst.cols), sc, {},
                                    observer);
    epoch_end.push_back(res.x);

    auto& rows = per_cell[ci];
    std::size_t k_total = 0, inner_at = 0;
    for (std::size_t t = 1; t <= config.epochs; ++t) {
      k_total += res.trace.inner_counts[t - 1];
      inner_at += res.trace.inner_counts[t - 1];
      const InnerRecord& last_rec = res.trace.inner[inner_at - 1];
      const RelativeMetrics m = relative_metrics(epoch_end[t - 1], inst);
      MetricRow row;
      row.experiment_id = id;
      row.variant = std::string(to_string(cell.variant)) + "|rank=" +
                    std::to_string(cell.rank);
      row.seed = cell.seed;
      row.t = static_cast<long long>(t);
      row.k = static_cast<long long>(k_total);
      row.wall_ms = 1000.0 * res.trace.epoch_wall_s[t - 1];
      row.rel_obj = m.rel_obj;
      row.rel_err = m.rel_err;
      row.eps_k = last_rec.eps;
      row.xi = last_rec.xi;
      rows.push_back(std::move(row));
    }
  });

  BenchOutcome out;
  for (auto& rows : per_cell)
    for (auto& r : rows) out.rows.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// Sketched SVRF.

BenchOutcome run_ssvrf(const ExperimentConfig& config) {
  config.validate();
  const std::size_t rank = config.ranks.front();
  const std::size_t sketch_rank = config.sketch_rank ? config.sketch_rank : rank;
  const std::string id = id_or(config);

  std::vector<std::vector<MetricRow>> per_cell(config.seeds.size());
  std::vector<std::string> notes(config.seeds.size());
  std::vector<char> ok(config.seeds.size(), 1);
  for_each_cell(config.seeds.size(), config.threads, [&](std::size_t ci) {
    const std::uint64_t seed = config.seeds[ci];
    const CompletionInstance inst =
        make_experiment_instance(config, rank, seed);
    const double alpha = experiment_alpha(config, inst);
    const CompletionObjective objective(inst, Scaling::kMean);

    SvrfConfig sc;
    sc.delta = config.delta;
    sc.smoothness = objective.smoothness();
    sc.diameter = 2.0 * alpha;
    sc.epochs = config.epochs;
    sc.batch_multiplier = config.batch_multiplier;
    sc.epoch_multiplier = config.epoch_multiplier;
    sc.seed = derive_seed(seed, kRunStream, sketch_rank);
    SsvrfOptions opt;
    opt.reconstruct_each_epoch = true;
    opt.shadow = config.shadow;
    const SsvrfResult res = ssvrf_run(inst, alpha, sketch_rank, sc, opt);

    auto& rows = per_cell[ci];
    std::size_t k_total = 0, inner_at = 0;
    for (std::size_t t = 1; t <= config.epochs; ++t) {
      k_total += res.trace.inner_counts[t - 1];
      inner_at += res.trace.inner_counts[t - 1];
      const InnerRecord& last_rec = res.trace.inner[inner_at - 1];
      const RelativeMetrics m =
          relative_metrics(res.epoch_factors[t - 1].reconstruct(), inst);
      MetricRow row;
      row.experiment_id = id;
      row.variant = "ssvrf|r=" + std::to_string(sketch_rank);
      row.seed = seed;
      row.t = static_cast<long long>(t);
      row.k = static_cast<long long>(k_total);
      row.wall_ms = 1000.0 * res.trace.epoch_wall_s[t - 1];
      row.rel_obj = m.rel_obj;
      row.rel_err = m.rel_err;
      row.eps_k = last_rec.eps;
      row.xi = last_rec.xi;
      rows.push_back(std::move(row));
    }

    std::string note = "seed " + std::to_string(seed) + ":";
    if (config.memory_audit) {
      const std::size_t expected = inst.rows * (2 * sketch_rank + 1) +
                                   (4 * sketch_rank + 3) * inst.cols +
                                   inst.num_observed();
      const bool match = res.decision_floats == expected;
      ok[ci] = ok[ci] && match;
      note += " decision_floats=" + std::to_string(res.decision_floats) +
              " expected=" + std::to_string(expected) +
              (match ? " (match)" : " (MISMATCH)");
    }
    if (config.shadow) {
      const bool good =
          res.max_dual_deviation <= 1e-10 && res.max_sketch_deviation <= 1e-10;
      ok[ci] = ok[ci] && good;
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    " shadow dual_dev=%.3g sketch_dev=%.3g%s",
                    res.max_dual_deviation, res.max_sketch_deviation,
                    good ? "" : " (EXCEEDS 1e-10)");
      note += buf;
    }
    if (config.write_factors && !config.output.empty()) {
      const std::string stem = config.output + ".seed" + std::to_string(seed);
      save_factors(res.factors, stem + ".U.txt", stem + ".S.txt",
                   stem + ".V.txt");
      note += " factors=" + stem + ".{U,S,V}.txt";
    }
    notes[ci] = note;
  });

  BenchOutcome out;
  for (std::size_t i = 0; i < per_cell.size(); ++i) {
    for (auto& r : per_cell[i]) out.rows.push_back(std::move(r));
    if (notes[i].find('=') != std::string::npos) out.notes.push_back(notes[i]);
    out.all_passed = out.all_passed && ok[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracle accuracy and cost along an exact FW trajectory.

BenchOutcome run_lmo_bench(const ExperimentConfig& config) {
  config.validate();
  struct Cell {
    std::size_t rank;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t r : config.ranks)
    for (std::uint64_t s : config.seeds) cells.push_back({r, s});

  std::vector<std::vector<MetricRow>> per_cell(cells.size());
  const std::string id = id_or(config);
  for_each_cell(cells.size(), config.threads, [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    const CompletionInstance inst =
        make_experiment_instance(config, cell.rank, cell.seed);
    const double alpha = experiment_alpha(config, inst);
    const Domain domain = Domain::psd_nuclear(inst.rows, alpha);
    const CompletionObjective objective(inst, Scaling::kPaperTotal);
    const DenseMatrix x0 = inst.truth();
    const double x0_sq = x0.squaredNorm();

    FwConfig fc;
    fc.gap_tol = -std::numeric_limits<double>::infinity();
    fc.max_iter = config.max_iter;
    fc.time_budget_s = config.time_budget_s;
    fc.seed = derive_seed(cell.seed, kRunStream, cell.rank);
    fc.record_objective = false;

    auto& rows = per_cell[ci];
    const FwObserver observer = [&](const FwIterationView& v) {
      const Eigen::Map<const DenseMatrix> x(v.x_prev.data(), inst.rows,
                                            inst.cols);
      const double rel_obj = relative_objective_from_measurements(
          inst.sampling->apply(v.x_prev), inst);
      const double rel_err = (x - x0).squaredNorm() / x0_sq;
      LinearOperator g = v.gradient.as_operator();
      g.symmetric = true;
      const std::uint64_t ref_seed = derive_seed(fc.seed, 0x7ef, v.k);
      const double lambda_min =
          extreme_eigenpair(g, Which::kSmallest, kReferenceTolerance, ref_seed)
              .value;
      const double lambda_max =
          extreme_eigenpair(g, Which::kLargest, kReferenceTolerance,
                            ref_seed + 1)
              .value;
      const double exact_min = alpha * std::min(lambda_min, 0.0);
      const double g_norm = std::max(std::abs(lambda_min), std::abs(lambda_max));
      for (std::size_t j = 0; j < config.xis.size(); ++j) {
        OracleRequest req;
        req.xi = config.xis[j];
        req.seed = derive_seed(fc.seed, 0x1b0, v.k, j);
        const auto start = Clock::now();
        const OracleAnswer a = solve_lmo(domain, v.gradient, req);
        const double ms =
            std::chrono::duration<double, std::milli>(Clock::now() - start)
                .count();
        MetricRow row;
        row.experiment_id = id;
        row.variant = "rank=" + std::to_string(cell.rank) + "|" +
                      xi_label(config.xis[j]);
        row.seed = cell.seed;
        row.k = static_cast<long long>(v.k);
        row.wall_ms = ms;
        row.rel_obj = rel_obj;
        row.rel_err = rel_err;
        row.gap = duality_gap(v.x_prev, v.gradient, a);
        row.eps_k = oracle_suboptimality(a, exact_min);
        row.xi = req.xi;
        if (std::isfinite(a.spectral_value) && lambda_min != 0.0)
          row.lambda_rel_err =
              std::abs(a.spectral_value - lambda_min) / std::abs(lambda_min);
        if (row.eps_k > 0.0)
          row.bound_ratio = a.tolerance_used * alpha * g_norm / row.eps_k;
        rows.push_back(std::move(row));
      }
    };
    frank_wolfe(objective, domain, Vector::Zero(inst.rows * inst.cols), fc, {},
                observer);
  });

  BenchOutcome out;
  for (auto& rows : per_cell)
    for (auto& r : rows) out.rows.push_back(std::move(r));
  return out;
}

BenchOutcome run_experiment(const ExperimentConfig& config) {
  BenchOutcome out;
  switch (config.kind) {
    case ExperimentKind::kFwCompletion:
      out = run_fw_completion(config);
      out.reports = check_replication(config, out.rows);
      for (const auto& r : out.reports) out.all_passed = out.all_passed && r.pass;
      break;
    case ExperimentKind::kSvrf:
      out = run_svrf(config);
      break;
    case ExperimentKind::kSsvrf:
      out = run_ssvrf(config);
      break;
    case ExperimentKind::kLmoBench:
      out = run_lmo_bench(config);
      break;
    case ExperimentKind::kVerifyBounds:
      return run_verify_bounds(config);
  }
  if (!config.output.empty()) write_csv(out.rows, config.output);
  return out;
}

}  // namespace fws
