#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eda_core.hpp"
#include "rng.hpp"

namespace noisy_eda {

/// Anything the optimisers can query: a dimension, a noisy evaluation that
/// consumes one unit of budget, and an optimum test used for hit detection.
template <class P>
concept NoisyProblem = requires(const P& p, const BitString& x, Rng& rng) {
  { p.dimension() } -> std::convertible_to<std::size_t>;
  { p.evaluate(x, rng) } -> std::convertible_to<double>;
  { p.is_optimum(x) } -> std::convertible_to<bool>;
};

enum class Algorithm { CGA, MSCGA, SWCGA, RMHC };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::CGA: return "cga";
  case Algorithm::MSCGA: return "mscga";
  case Algorithm::SWCGA: return "swcga";
  case Algorithm::RMHC: return "rmhc";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "cga") return Algorithm::CGA;
  if (name == "mscga") return Algorithm::MSCGA;
  if (name == "swcga") return Algorithm::SWCGA;
  if (name == "rmhc") return Algorithm::RMHC;
  return std::nullopt;
}

/// Parameters of one optimiser. Only the parameters the chosen algorithm uses
/// may be set: k for the cGA family, n for MScGA, w for SWcGA, r for RMHC.
struct OptimizerConfig {
  Algorithm algorithm = Algorithm::CGA;
  std::size_t d = 100;
  std::optional<double> k;
  std::optional<int> n;
  std::optional<int> w;
  std::optional<int> r;
  std::int64_t budget = 1000;

  bool uses_model() const noexcept { return algorithm != Algorithm::RMHC; }

  /// The algorithm-specific integer parameter (n, w or r); 2 for cGA.
  int param() const noexcept {
    switch (algorithm) {
    case Algorithm::CGA: return 2;
    case Algorithm::MSCGA: return n.value_or(0);
    case Algorithm::SWCGA: return w.value_or(0);
    case Algorithm::RMHC: return r.value_or(0);
    }
    return 0;
  }

  void validate() const {
    const std::string name(to_string(algorithm));
    auto check = [&](bool used, bool present, const char* key) {
      if (used && !present) throw InvalidParameter("algorithm '" + name + "' requires parameter '" + key + "'");
      if (!used && present)
        throw InvalidParameter("parameter '" + std::string(key) + "' is not used by algorithm '" + name + "'");
    };
    if (d == 0) throw InvalidDimension("parameter 'd' must be >= 1");
    if (budget < 1) throw InvalidParameter("parameter 'budget' must be >= 1");
    check(uses_model(), k.has_value(), "k");
    check(algorithm == Algorithm::MSCGA, n.has_value(), "n");
    check(algorithm == Algorithm::SWCGA, w.has_value(), "w");
    check(algorithm == Algorithm::RMHC, r.has_value(), "r");

    if (k && !(*k > 0.0 && std::isfinite(*k))) throw InvalidParameter("parameter 'k' must be a finite value > 0");
    if (n && *n < 2) throw InvalidParameter("parameter 'n' must be >= 2");
    if (w && *w < 1) throw InvalidParameter("parameter 'w' must be >= 1");
    if (r && *r < 1) throw InvalidParameter("parameter 'r' must be >= 1");
    if (r && budget < 2 * static_cast<std::int64_t>(*r))
      throw InvalidParameter("parameter 'budget' must cover the initial incumbent and one offspring (2r)");
  }

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// FIFO history of scored samples, oldest first, holding at most `capacity`.
class SlidingWindow {
public:
  SlidingWindow() = default;
  explicit SlidingWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidParameter("window width must be >= 1");
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::int64_t evictions() const noexcept { return evictions_; }

  const ScoredSample& operator[](std::size_t i) const noexcept { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Append at the tail, dropping the head only if the window is full.
  void push(ScoredSample s) {
    if (entries_.size() == capacity_) {
      entries_.pop_front();
      ++evictions_;
    }
    entries_.push_back(std::move(s));
  }

private:
  std::size_t capacity_ = 0;
  std::deque<ScoredSample> entries_;
  std::int64_t evictions_ = 0;
};

struct OptimizerState {
  ProbabilityVector model;                // cGA family
  SlidingWindow window;                   // SWcGA only
  std::optional<ScoredSample> incumbent;  // RMHC only; fitness is the r-sample mean
  std::int64_t budget = 0;
  std::int64_t evals_used = 0;
  std::int64_t comparisons_made = 0;
  bool hit_optimum = false;

  std::int64_t remaining() const noexcept { return budget - evals_used; }
};

inline OptimizerState make_state(const OptimizerConfig& cfg) {
  cfg.validate();
  OptimizerState s;
  s.budget = cfg.budget;
  if (cfg.uses_model()) s.model = init_probability_vector(cfg.d);
  if (cfg.algorithm == Algorithm::SWCGA) s.window = SlidingWindow(static_cast<std::size_t>(*cfg.w));
  return s;
}

enum class StepStatus { Ok, BudgetExhausted };

struct NullSink {
  void operator()(std::int64_t, const BitString&) const noexcept {}
};

namespace detail {

template <NoisyProblem P>
ScoredSample evaluate_counted(OptimizerState& s, BitString x, const P& problem, Rng& rng) {
  const double y = problem.evaluate(x, rng);
  ++s.evals_used;
  if (!s.hit_optimum && problem.is_optimum(x)) s.hit_optimum = true;
  return {std::move(x), y};
}

template <NoisyProblem P>
ScoredSample reproduce_and_evaluate(OptimizerState& s, const P& problem, Rng& rng) {
  return evaluate_counted(s, sample(s.model, rng), problem, rng);
}

// One trace entry per evaluation spent by a step. Evaluations happen before
// the step's updates, so all but the last see the recommendation from before
// the step; the last sees the updated one.
template <class Sink>
void emit_step(Sink& sink, std::int64_t first_eval, std::int64_t last_eval, const BitString& before,
               const BitString& after) {
  for (std::int64_t e = first_eval; e < last_eval; ++e) sink(e, before);
  sink(last_eval, after);
}

} // namespace detail

/// Indices sorted so that fitnesses are non-increasing; ties keep sampling order.
inline std::vector<std::size_t> rank_descend(std::span<const double> fitnesses) {
  if (fitnesses.empty()) throw std::invalid_argument("rank_descend: empty input");
  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });
  return order;
}

/// Standard cGA: two samples, one competition, one update.
template <NoisyProblem P, class Sink = NullSink>
StepStatus cga_iteration(OptimizerState& s, double k, const P& problem, Rng& rng, Sink&& sink = {}) {
  if (s.remaining() < 2) return StepStatus::BudgetExhausted;
  const BitString before = recommend(s.model);
  const std::int64_t first = s.evals_used + 1;
  const ScoredSample a = detail::reproduce_and_evaluate(s, problem, rng);
  const ScoredSample b = detail::reproduce_and_evaluate(s, problem, rng);
  const auto [winner, loser] = compete(a, b);
  update_in_place(s.model, winner.bits, loser.bits, k);
  ++s.comparisons_made;
  detail::emit_step(sink, first, s.evals_used, before, recommend(s.model));
  return StepStatus::Ok;
}

/// Multiple-sample cGA: n samples ranked by fitness, then every ordered pair
/// (a < b in rank order) updates the model with j_a as winner, outer loop over a.
template <NoisyProblem P, class Sink = NullSink>
StepStatus mscga_iteration(OptimizerState& s, double k, int n, const P& problem, Rng& rng, Sink&& sink = {}) {
  if (n < 2) throw InvalidParameter("mscga: n must be >= 2");
  if (s.remaining() < n) return StepStatus::BudgetExhausted;
  const BitString before = recommend(s.model);
  const std::int64_t first = s.evals_used + 1;

  std::vector<ScoredSample> samples;
  std::vector<double> fitness;
  samples.reserve(static_cast<std::size_t>(n));
  fitness.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    samples.push_back(detail::reproduce_and_evaluate(s, problem, rng));
    fitness.push_back(samples.back().fitness);
  }
  const auto order = rank_descend(fitness);
  for (std::size_t a = 0; a + 1 < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      update_in_place(s.model, samples[order[a]].bits, samples[order[b]].bits, k);
      ++s.comparisons_made;
    }
  detail::emit_step(sink, first, s.evals_used, before, recommend(s.model));
  return StepStatus::Ok;
}

/// Sliding-window cGA: one new sample competes against every windowed sample
/// (oldest first, new sample as first argument), then joins the window.
template <NoisyProblem P, class Sink = NullSink>
StepStatus swcga_step(OptimizerState& s, double k, const P& problem, Rng& rng, Sink&& sink = {}) {
  if (s.window.capacity() == 0) throw InvalidParameter("swcga: state has no sliding window");
  if (s.remaining() < 1) return StepStatus::BudgetExhausted;
  ScoredSample fresh = detail::reproduce_and_evaluate(s, problem, rng);
  for (const ScoredSample& old : s.window) {
    const auto [winner, loser] = compete(fresh, old);
    update_in_place(s.model, winner.bits, loser.bits, k);
    ++s.comparisons_made;
  }
  s.window.push(std::move(fresh));
  sink(s.evals_used, recommend(s.model));
  return StepStatus::Ok;
}

namespace detail {

template <NoisyProblem P>
ScoredSample evaluate_averaged(OptimizerState& s, BitString x, int r, const P& problem, Rng& rng) {
  double sum = 0.0;
  for (int i = 0; i < r; ++i) sum += evaluate_counted(s, x, problem, rng).fitness;
  return {std::move(x), sum / r};
}

} // namespace detail

/// Random mutation hill climber with resampling. The first call also draws
/// and evaluates a uniformly random incumbent, so it costs 2r evaluations.
/// The incumbent keeps its stored average; it is never re-evaluated.
template <NoisyProblem P, class Sink = NullSink>
StepStatus rmhc_step(OptimizerState& s, int r, const P& problem, Rng& rng, Sink&& sink = {}) {
  if (r < 1) throw InvalidParameter("rmhc: r must be >= 1");
  const std::int64_t cost = s.incumbent ? r : 2 * static_cast<std::int64_t>(r);
  if (s.remaining() < cost) return StepStatus::BudgetExhausted;
  const std::int64_t first = s.evals_used + 1;
  const std::size_t d = problem.dimension();

  if (!s.incumbent) {
    BitString start(d);
    for (std::size_t i = 0; i < d; ++i) start.set(i, rng.below(2) == 1);
    s.incumbent = detail::evaluate_averaged(s, std::move(start), r, problem, rng);
  }
  const BitString before = s.incumbent->bits;

  BitString child = s.incumbent->bits;
  child.flip(static_cast<std::size_t>(rng.below(d)));
  ScoredSample scored = detail::evaluate_averaged(s, std::move(child), r, problem, rng);
  ++s.comparisons_made;
  if (scored.fitness >= s.incumbent->fitness) s.incumbent = std::move(scored);

  detail::emit_step(sink, first, s.evals_used, before, s.incumbent->bits);
  return StepStatus::Ok;
}

/// Outcome of one optimiser run.
struct RunResult {
  BitString recommendation;
  std::optional<ProbabilityVector> model;  // absent for RMHC
  std::int64_t evals_used = 0;
  std::int64_t comparisons_made = 0;
  bool hit_optimum = false;
  bool converged = false;
};

inline BitString current_recommendation(const OptimizerConfig& cfg, const OptimizerState& s) {
  if (cfg.uses_model()) return recommend(s.model);
  return s.incumbent ? s.incumbent->bits : BitString(cfg.d);
}

/// Run the configured optimiser until its model converges or the next
/// iteration no longer fits in the budget. `sink(eval_index, recommendation)`
/// is called once per fitness evaluation with strictly increasing indices.
template <NoisyProblem P, class Sink = NullSink>
RunResult run(const OptimizerConfig& cfg, const P& problem, Rng& rng, Sink&& sink = {}) {
  if (problem.dimension() != cfg.d) throw InvalidDimension("optimizer and problem dimensions differ");
  OptimizerState s = make_state(cfg);
  RunResult out;
  for (;;) {
    if (cfg.uses_model() && is_converged(s.model)) {
      out.converged = true;
      break;
    }
    StepStatus status = StepStatus::Ok;
    switch (cfg.algorithm) {
    case Algorithm::CGA: status = cga_iteration(s, *cfg.k, problem, rng, sink); break;
    case Algorithm::MSCGA: status = mscga_iteration(s, *cfg.k, *cfg.n, problem, rng, sink); break;
    case Algorithm::SWCGA: status = swcga_step(s, *cfg.k, problem, rng, sink); break;
    case Algorithm::RMHC: status = rmhc_step(s, *cfg.r, problem, rng, sink); break;
    }
    if (status == StepStatus::BudgetExhausted) break;
  }
  out.recommendation = current_recommendation(cfg, s);
  if (cfg.uses_model()) out.model = s.model;
  out.evals_used = s.evals_used;
  out.comparisons_made = s.comparisons_made;
  out.hit_optimum = s.hit_optimum;
  return out;
}

/// Population size 7 sigma^2 sqrt(d) (ln d)^2 for noisy OneMax with known variance.
inline double theoretical_k(double d, double sigma2) {
  if (!(d >= 2.0)) throw InvalidDimension("theoretical_k: d must be >= 2");
  if (!(sigma2 > 0.0)) throw InvalidParameter("theoretical_k: sigma2 must be > 0");
  const double ln_d = std::log(d);
  return 7.0 * sigma2 * std::sqrt(d) * ln_d * ln_d;
}

} // namespace noisy_eda
