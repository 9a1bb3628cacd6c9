#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "eda_core.hpp"
#include "optimizers.hpp"
#include "problems.hpp"
#include "rng.hpp"

namespace noisy_eda {

struct TracePoint {
  std::int64_t eval_index = 0;
  double true_fitness = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct TrialRecord {
  std::vector<TracePoint> trace;
  bool hit_optimum = false;
  BitString final_recommendation;
  std::optional<ProbabilityVector> final_model;
  std::int64_t evals_used = 0;
  std::int64_t comparisons_made = 0;
  bool converged = false;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct ExperimentConfig {
  OptimizerConfig optimizer;
  ProblemSpec problem;
  int trials = 100;
  std::uint64_t master_seed = 0;

  std::int64_t budget() const noexcept { return optimizer.budget; }

  void validate() const {
    optimizer.validate();
    problem.validate();
    if (optimizer.d != problem.d) throw InvalidDimension("optimizer and problem dimensions differ");
    if (trials < 1) throw InvalidParameter("parameter 'trials' must be >= 1");
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SummaryStats {
  int trials = 0;
  int nho = 0;
  double rq_mean = 0.0;
  double rq_stderr = 0.0;
  std::vector<MeanStderr> curve;          // index i holds evaluation i + 1
  std::optional<std::vector<double>> mean_final_p;  // absent for RMHC
};

/// Sample mean and standard error (n - 1 denominator, divided by sqrt(n));
/// the standard error of a single value is 0.
inline MeanStderr mean_and_stderr(const std::vector<double>& values) {
  MeanStderr out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

/// Run one seeded trial. The RNG stream depends only on (master_seed, trial_index).
inline TrialRecord run_trial(const ExperimentConfig& cfg, int trial_index) {
  cfg.validate();
  if (trial_index < 0 || trial_index >= cfg.trials) throw std::out_of_range("trial index out of range");
  const Benchmark problem(cfg.problem);
  Rng rng(stream_seed(cfg.master_seed, static_cast<std::uint64_t>(trial_index)));

  TrialRecord rec;
  rec.trace.reserve(static_cast<std::size_t>(cfg.budget()));
  auto sink = [&](std::int64_t eval, const BitString& x) { rec.trace.push_back({eval, problem.true_fitness(x)}); };
  RunResult res = run(cfg.optimizer, problem, rng, sink);

  rec.hit_optimum = res.hit_optimum;
  rec.final_recommendation = std::move(res.recommendation);
  rec.final_model = std::move(res.model);
  rec.evals_used = res.evals_used;
  rec.comparisons_made = res.comparisons_made;
  rec.converged = res.converged;
  return rec;
}

/// Run `count` independent jobs on up to `threads` workers (0 = hardware
/// concurrency). Results land at their job index, so output does not depend
/// on scheduling.
template <class Result, class Job>
std::vector<Result> parallel_map(std::size_t count, unsigned threads, Job job) {
  std::vector<Result> results(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          results[i] = job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Aggregate finished trials. Traces shorter than `budget` (early convergence,
/// or an iteration cost that does not divide the budget) are held at the
/// final recommendation's fitness up to the horizon.
inline SummaryStats summarize(const ProblemSpec& problem, std::int64_t budget, const std::vector<TrialRecord>& records) {
  SummaryStats out;
  out.trials = static_cast<int>(records.size());
  if (records.empty()) return out;

  std::vector<double> finals;
  finals.reserve(records.size());
  for (const auto& r : records) {
    if (r.hit_optimum) ++out.nho;
    finals.push_back(true_fitness(problem, r.final_recommendation));
  }
  const MeanStderr rq = mean_and_stderr(finals);
  out.rq_mean = rq.mean;
  out.rq_stderr = rq.std_error;

  out.curve.resize(static_cast<std::size_t>(budget));
  std::vector<double> column(records.size());
  for (std::size_t e = 0; e < out.curve.size(); ++e) {
    for (std::size_t t = 0; t < records.size(); ++t) {
      const auto& trace = records[t].trace;
      column[t] = e < trace.size() ? trace[e].true_fitness : finals[t];
    }
    out.curve[e] = mean_and_stderr(column);
  }

  if (records.front().final_model) {
    std::vector<double> mean_p(records.front().final_model->size(), 0.0);
    for (const auto& r : records)
      for (std::size_t i = 0; i < mean_p.size(); ++i) mean_p[i] += (*r.final_model)[i];
    for (double& v : mean_p) v /= static_cast<double>(records.size());
    out.mean_final_p = std::move(mean_p);
  }
  return out;
}

inline std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, unsigned threads = 0) {
  cfg.validate();
  return parallel_map<TrialRecord>(static_cast<std::size_t>(cfg.trials), threads,
                                   [&](std::size_t i) { return run_trial(cfg, static_cast<int>(i)); });
}

inline SummaryStats run_experiment(const ExperimentConfig& cfg, unsigned threads = 0) {
  return summarize(cfg.problem, cfg.budget(), run_trials(cfg, threads));
}

struct SweepRow {
  ExperimentConfig config;
  SummaryStats stats;
};

/// One summary row per config, in grid order.
inline std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid, unsigned threads = 0) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& cfg : grid) rows.push_back({cfg, run_experiment(cfg, threads)});
  return rows;
}

/// Row layout of the published result tables: k as a multiple of d, the
/// MScGA sample number n (n = 2 is the standard cGA) and the SWcGA width w.
struct TableCell {
  std::string k_label;
  double k_multiple = 1.0;
  int n = 2;
  int w = 1;
};

inline std::vector<TableCell> table_layout(ProblemKind kind) {
  struct KRow {
    const char* label;
    double multiple;
  };
  std::vector<KRow> ks = {{"50d", 50}, {"20d", 20}, {"10d", 10}, {"5d", 5}, {"2d", 2}, {"d", 1}, {"d/2", 0.5}};
  if (kind == ProblemKind::PMax) ks.insert(ks.begin(), KRow{"100d", 100});
  const int ns[] = {50, 40, 30, 20, 10, 8, 6, 4, 2};
  const int ws[] = {50, 40, 30, 20, 10, 8, 6, 4, 1};
  std::vector<TableCell> cells;
  for (const auto& k : ks)
    for (std::size_t i = 0; i < std::size(ns); ++i) cells.push_back({k.label, k.multiple, ns[i], ws[i]});
  return cells;
}

/// Expand a table layout into the experiments for one side of the table:
/// the MScGA column (cGA for n = 2) or the SWcGA column.
inline std::vector<ExperimentConfig> table_grid(const std::vector<TableCell>& cells, Algorithm family,
                                                const ProblemSpec& problem, std::int64_t budget, int trials,
                                                std::uint64_t master_seed) {
  std::vector<ExperimentConfig> grid;
  grid.reserve(cells.size());
  for (const auto& c : cells) {
    ExperimentConfig cfg;
    cfg.problem = problem;
    cfg.trials = trials;
    cfg.master_seed = master_seed;
    cfg.optimizer.d = problem.d;
    cfg.optimizer.budget = budget;
    cfg.optimizer.k = c.k_multiple * static_cast<double>(problem.d);
    if (family == Algorithm::SWCGA) {
      cfg.optimizer.algorithm = Algorithm::SWCGA;
      cfg.optimizer.w = c.w;
    } else if (c.n == 2) {
      cfg.optimizer.algorithm = Algorithm::CGA;
    } else {
      cfg.optimizer.algorithm = Algorithm::MSCGA;
      cfg.optimizer.n = c.n;
    }
    grid.push_back(std::move(cfg));
  }
  return grid;
}

} // namespace noisy_eda
