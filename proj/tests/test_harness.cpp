#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <tuple>

#include "noisy_eda/harness.hpp"

using namespace noisy_eda;

namespace {

ExperimentConfig experiment(Algorithm alg, ProblemSpec problem, double k, int trials, std::int64_t budget,
                            std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.problem = problem;
  c.optimizer.algorithm = alg;
  c.optimizer.d = problem.d;
  c.optimizer.k = k;
  c.optimizer.budget = budget;
  c.trials = trials;
  c.master_seed = seed;
  return c;
}

TrialRecord finished_at(std::size_t d, std::size_t ones, bool hit) {
  TrialRecord r;
  r.final_recommendation = BitString(d);
  for (std::size_t i = 0; i < ones; ++i) r.final_recommendation.set(i, true);
  r.hit_optimum = hit;
  r.evals_used = 1;
  r.trace = {{1, double(ones)}};
  return r;
}

} // namespace

TEST(MeanAndStderr, HandComputed) {
  const auto two = mean_and_stderr({98.0, 100.0});
  EXPECT_DOUBLE_EQ(two.mean, 99.0);
  EXPECT_DOUBLE_EQ(two.std_error, 1.0);
  const auto one = mean_and_stderr({42.0});
  EXPECT_EQ(one.mean, 42.0);
  EXPECT_EQ(one.std_error, 0.0);
  EXPECT_EQ(mean_and_stderr({7.0, 7.0, 7.0}).std_error, 0.0);
}

TEST(RunTrial, Deterministic) {
  const auto cfg = experiment(Algorithm::SWCGA, {ProblemKind::NoisyOneMax, 50, 1.0}, 250, 4, 400);
  auto c = cfg;
  c.optimizer.w = 5;
  EXPECT_EQ(run_trial(c, 2), run_trial(c, 2));
  EXPECT_NE(run_trial(c, 1).trace, run_trial(c, 2).trace);
  EXPECT_THROW(run_trial(c, 4), std::out_of_range);
}

TEST(RunTrial, FullBudgetTrace) {
  const auto cfg = experiment(Algorithm::CGA, {ProblemKind::NoisyOneMax, 100, 1.0}, 500, 1, 1000);
  const auto rec = run_trial(cfg, 0);
  EXPECT_FALSE(rec.converged);
  ASSERT_EQ(rec.trace.size(), 1000u);
  EXPECT_EQ(rec.trace.back().eval_index, 1000);
  EXPECT_EQ(rec.evals_used, 1000);
  EXPECT_EQ(rec.trace.back().true_fitness, double(rec.final_recommendation.count_ones()));
}

TEST(RunTrial, NoiselessSmallInstanceSolved) {
  const auto cfg = experiment(Algorithm::CGA, {ProblemKind::NoisyOneMax, 10, 0.0}, 25, 100, 10000, 3);
  int solved = 0;
  for (int t = 0; t < cfg.trials; ++t) solved += run_trial(cfg, t).final_recommendation.all_ones();
  EXPECT_GE(solved, 95);
}

TEST(RunTrial, HitDetectionKeysOnSampledStrings) {
  // a tiny problem where the optimum is sampled almost surely
  const auto cfg = experiment(Algorithm::CGA, {ProblemKind::PMax, 2, 1.0}, 4, 1, 200);
  EXPECT_TRUE(run_trial(cfg, 0).hit_optimum);
}

TEST(Summarize, TwoTrials) {
  const ProblemSpec onemax{ProblemKind::NoisyOneMax, 100, 1.0};
  const auto s = summarize(onemax, 3, {finished_at(100, 98, false), finished_at(100, 100, true)});
  EXPECT_EQ(s.nho, 1);
  EXPECT_DOUBLE_EQ(s.rq_mean, 99.0);
  EXPECT_DOUBLE_EQ(s.rq_stderr, 1.0);
  ASSERT_EQ(s.curve.size(), 3u);
  // padded entries hold the final fitness
  EXPECT_DOUBLE_EQ(s.curve[2].mean, 99.0);
  EXPECT_FALSE(s.mean_final_p.has_value());
}

TEST(Summarize, OptimumRecommendedWithoutBeingSampled) {
  const ProblemSpec pmax{ProblemKind::PMax, 20, 1.0};
  const auto s = summarize(pmax, 1, {finished_at(20, 20, false), finished_at(20, 20, false)});
  EXPECT_EQ(s.nho, 0);
  EXPECT_EQ(s.rq_mean, 1.0);
  EXPECT_EQ(s.rq_stderr, 0.0);
}

TEST(RunExperiment, SingleTrialCurveEqualsTrace) {
  auto cfg = experiment(Algorithm::MSCGA, {ProblemKind::NoisyOneMax, 40, 1.0}, 200, 1, 300, 9);
  cfg.optimizer.n = 7;
  const auto s = run_experiment(cfg, 1);
  const auto rec = run_trial(cfg, 0);
  ASSERT_EQ(s.curve.size(), 300u);
  ASSERT_EQ(rec.trace.size(), 294u); // 42 iterations of 7
  for (std::size_t i = 0; i < s.curve.size(); ++i) {
    const double expected = i < rec.trace.size() ? rec.trace[i].true_fitness : rec.trace.back().true_fitness;
    EXPECT_EQ(s.curve[i].mean, expected);
    EXPECT_EQ(s.curve[i].std_error, 0.0);
  }
  EXPECT_EQ(s.rq_stderr, 0.0);
}

TEST(RunExperiment, ConsistencyAndThreadIndependence) {
  auto cfg = experiment(Algorithm::SWCGA, {ProblemKind::PMax, 30, 1.0}, 300, 12, 400, 4);
  cfg.optimizer.w = 6;
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 4);
  EXPECT_EQ(a.nho, b.nho);
  EXPECT_EQ(a.rq_mean, b.rq_mean);
  EXPECT_EQ(a.rq_stderr, b.rq_stderr);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve[i].mean, b.curve[i].mean);
    EXPECT_EQ(a.curve[i].std_error, b.curve[i].std_error);
  }
  EXPECT_EQ(*a.mean_final_p, *b.mean_final_p);
  // final curve point and RQ are the same statistic
  EXPECT_EQ(a.curve.back().mean, a.rq_mean);
  EXPECT_EQ(a.curve.back().std_error, a.rq_stderr);
  EXPECT_LE(a.nho, cfg.trials);
  EXPECT_GE(a.nho, 0);
}

TEST(RunExperiment, EarlyConvergenceIsPadded) {
  auto cfg = experiment(Algorithm::SWCGA, {ProblemKind::NoisyOneMax, 10, 1.0}, 2, 5, 1000, 2);
  cfg.optimizer.w = 10;
  const auto recs = run_trials(cfg, 1);
  for (const auto& r : recs) EXPECT_TRUE(r.converged);
  const auto s = summarize(cfg.problem, cfg.budget(), recs);
  ASSERT_EQ(s.curve.size(), 1000u);
  EXPECT_EQ(s.curve.back().mean, s.rq_mean);
}

TEST(RunExperiment, RmhcHasNoModel) {
  ExperimentConfig cfg;
  cfg.problem = {ProblemKind::NoisyOneMax, 20, 1.0};
  cfg.optimizer.algorithm = Algorithm::RMHC;
  cfg.optimizer.d = 20;
  cfg.optimizer.r = 2;
  cfg.optimizer.budget = 100;
  cfg.trials = 3;
  const auto s = run_experiment(cfg, 1);
  EXPECT_FALSE(s.mean_final_p.has_value());
  EXPECT_EQ(s.curve.size(), 100u);
}

TEST(Sweep, SingletonGrid) {
  auto cfg = experiment(Algorithm::CGA, {ProblemKind::NoisyOneMax, 10, 1.0}, 20, 2, 50);
  const auto rows = sweep({cfg}, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].config, cfg);
  EXPECT_THROW(sweep({}), std::invalid_argument);
}

TEST(TableLayout, ShapesMatchPublishedTables) {
  const auto onemax = table_layout(ProblemKind::NoisyOneMax);
  EXPECT_EQ(onemax.size(), 63u);
  const auto pmax = table_layout(ProblemKind::PMax);
  EXPECT_EQ(pmax.size(), 72u);
  EXPECT_EQ(pmax.front().k_label, "100d");
  std::set<std::string> labels;
  for (const auto& c : onemax) labels.insert(c.k_label);
  EXPECT_EQ(labels, (std::set<std::string>{"50d", "20d", "10d", "5d", "2d", "d", "d/2"}));

  const ProblemSpec problem{ProblemKind::NoisyOneMax, 100, 1.0};
  const auto ms = table_grid(onemax, Algorithm::MSCGA, problem, 1000, 100, 0);
  const auto sw = table_grid(onemax, Algorithm::SWCGA, problem, 1000, 100, 0);
  std::set<std::tuple<double, int>> keys;
  for (const auto& c : ms) {
    EXPECT_NO_THROW(c.validate());
    keys.insert({*c.optimizer.k, c.optimizer.param()});
  }
  EXPECT_EQ(keys.size(), 63u);
  EXPECT_EQ(ms.back().optimizer.algorithm, Algorithm::CGA);
  EXPECT_EQ(*ms.back().optimizer.k, 50.0);
  EXPECT_EQ(sw.back().optimizer.w, 1);
}
