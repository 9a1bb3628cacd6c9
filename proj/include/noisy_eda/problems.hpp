#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eda_core.hpp"
#include "rng.hpp"

namespace noisy_eda {

enum class ProblemKind { NoisyOneMax, PMax };

inline std::string_view to_string(ProblemKind kind) {
  return kind == ProblemKind::NoisyOneMax ? "onemax" : "pmax";
}

inline ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "onemax" || name == "noisy_onemax") return ProblemKind::NoisyOneMax;
  if (name == "pmax") return ProblemKind::PMax;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::NoisyOneMax;
  std::size_t d = 100;
  // Noise variance for NoisyOneMax. Zero gives the noiseless OneMax.
  double sigma2 = 1.0;

  void validate() const {
    if (d == 0) throw InvalidDimension("problem dimension must be >= 1");
    if (kind == ProblemKind::NoisyOneMax && !(sigma2 >= 0.0 && std::isfinite(sigma2)))
      throw InvalidParameter("sigma2 must be a finite value >= 0");
  }

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Ones count plus a fresh N(0, sigma2) draw.
inline double evaluate_noisy_onemax(const BitString& x, double sigma2, Rng& rng) {
  const double ones = static_cast<double>(x.count_ones());
  if (sigma2 == 0.0) return ones;
  return ones + std::sqrt(sigma2) * rng.gaussian();
}

/// Value(x) / (2^d - 1), reading index 0 as the most significant bit.
inline double pmax_win_probability(const BitString& x) {
  const std::size_t d = x.size();
  if (d <= 53) {
    // Numerator and denominator are exact doubles; one correctly rounded division.
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < d; ++i) value = (value << 1) | (x[i] ? 1u : 0u);
    const std::uint64_t denom = (std::uint64_t{1} << d) - 1;
    return static_cast<double>(value) / static_cast<double>(denom);
  }
  // Value / 2^d accumulated from the most significant bit, then scaled by 2^d / (2^d - 1).
  double frac = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    if (x[i]) frac += std::ldexp(1.0, -static_cast<int>(i + 1));
  const double two_d = std::ldexp(1.0, static_cast<int>(d));
  return std::min(1.0, frac * (two_d / (two_d - 1.0)));
}

/// Bernoulli game outcome: 1 with probability P_win(x), else 0.
inline double evaluate_pmax(const BitString& x, Rng& rng) {
  return rng.uniform01() < pmax_win_probability(x) ? 1.0 : 0.0;
}

inline double true_fitness(const ProblemSpec& spec, const BitString& x) {
  if (spec.kind == ProblemKind::NoisyOneMax) return static_cast<double>(x.count_ones());
  return pmax_win_probability(x);
}

inline BitString optimum(const ProblemSpec& spec) { return BitString(spec.d, 1); }

inline double evaluate(const ProblemSpec& spec, const BitString& x, Rng& rng) {
  if (x.size() != spec.d) throw std::invalid_argument("candidate length does not match problem dimension");
  if (spec.kind == ProblemKind::NoisyOneMax) return evaluate_noisy_onemax(x, spec.sigma2, rng);
  return evaluate_pmax(x, rng);
}

/// A benchmark instance bound to its spec; the problem type the optimisers
/// are normally instantiated with.
class Benchmark {
public:
  explicit Benchmark(ProblemSpec spec) : spec_(spec) { spec_.validate(); }

  const ProblemSpec& spec() const noexcept { return spec_; }
  std::size_t dimension() const noexcept { return spec_.d; }
  double evaluate(const BitString& x, Rng& rng) const { return noisy_eda::evaluate(spec_, x, rng); }
  double true_fitness(const BitString& x) const { return noisy_eda::true_fitness(spec_, x); }
  bool is_optimum(const BitString& x) const { return x.size() == spec_.d && x.all_ones(); }

private:
  ProblemSpec spec_;
};

} // namespace noisy_eda
