#pragma once

// Brute-force reference implementations used only by the tests. They are
// written independently of the library code paths they check.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "noisy_eda/eda_core.hpp"
#include "noisy_eda/rng.hpp"

namespace oracle {

inline std::vector<double> update(const std::vector<double>& p, const std::vector<int>& winner,
                                  const std::vector<int>& loser, double k) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int direction = winner[i] - loser[i]; // +1, 0 or -1
    double v = p[i];
    if (direction > 0) v = v + 1.0 / k;
    if (direction < 0) v = v - 1.0 / k;
    if (v > 1.0) v = 1.0;
    if (v < 0.0) v = 0.0;
    out[i] = v;
  }
  return out;
}

inline std::vector<int> recommend(const std::vector<double>& p) {
  std::vector<int> out;
  for (double v : p) out.push_back(v > 0.5 ? 1 : 0);
  return out;
}

// Selection sort: repeatedly take the largest remaining value, earliest index first.
inline std::vector<std::size_t> rank_descend(const std::vector<double>& y) {
  std::vector<bool> used(y.size(), false);
  std::vector<std::size_t> out;
  for (std::size_t round = 0; round < y.size(); ++round) {
    std::size_t best = y.size();
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (used[i]) continue;
      if (best == y.size() || y[i] > y[best]) best = i;
    }
    used[best] = true;
    out.push_back(best);
  }
  return out;
}

// Bits of `value` as a d-bit string, most significant bit first.
inline noisy_eda::BitString bits_of(std::uint64_t value, std::size_t d) {
  noisy_eda::BitString x(d);
  for (std::size_t i = 0; i < d; ++i) x.set(i, ((value >> (d - 1 - i)) & 1u) != 0);
  return x;
}

inline double pmax_win_probability(std::uint64_t value, std::size_t d) {
  return static_cast<double>(value) / static_cast<double>((std::uint64_t{1} << d) - 1);
}

inline std::vector<int> to_ints(const noisy_eda::BitString& x) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] ? 1 : 0);
  return out;
}

inline std::vector<double> to_vector(const noisy_eda::ProbabilityVector& p) {
  return {p.values().begin(), p.values().end()};
}

// Random probability vector whose entries include the exact values 0, 0.5 and 1
// often enough to exercise the thresholds and clamps.
inline std::vector<double> random_probs(noisy_eda::Rng& rng, std::size_t d) {
  std::vector<double> p(d);
  for (auto& v : p) {
    switch (rng.below(5)) {
    case 0: v = 0.0; break;
    case 1: v = 1.0; break;
    case 2: v = 0.5; break;
    default: v = rng.uniform01(); break;
    }
  }
  return p;
}

inline noisy_eda::BitString random_bits(noisy_eda::Rng& rng, std::size_t d) {
  noisy_eda::BitString x(d);
  for (std::size_t i = 0; i < d; ++i) x.set(i, rng.below(2) == 1);
  return x;
}

} // namespace oracle
