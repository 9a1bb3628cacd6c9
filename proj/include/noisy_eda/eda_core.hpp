#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace noisy_eda {

struct InvalidDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Candidate solution in {0,1}^d. Bits are stored one per byte.
class BitString {
public:
  BitString() = default;
  explicit BitString(std::size_t d, std::uint8_t fill = 0) : bits_(d, fill ? 1 : 0) {}
  BitString(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(b ? 1 : 0);
  }

  /// Parse a string of '0'/'1' characters; index 0 is the leftmost character.
  static BitString from_string(const std::string& s) {
    BitString out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string may contain only '0' and '1'");
      out.bits_[i] = s[i] == '1';
    }
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }
  void flip(std::size_t i) noexcept { bits_[i] ^= 1; }

  std::size_t count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  bool all_ones() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) s[i] = '1';
    return s;
  }

  std::span<const std::uint8_t> raw() const noexcept { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

private:
  std::vector<std::uint8_t> bits_;
};

/// The cGA model: one probability of sampling a 1 per bit position.
/// Every element stays in [0, 1]; update() clamps after each step.
class ProbabilityVector {
public:
  ProbabilityVector() = default;
  explicit ProbabilityVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidDimension("probability vector must have dimension >= 1");
    for (double p : probs_)
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probabilities must lie in [0, 1]");
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const noexcept { return probs_[i]; }
  std::span<const double> values() const noexcept { return probs_; }

  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

private:
  friend void update_in_place(ProbabilityVector&, const BitString&, const BitString&, double);
  std::vector<double> probs_;
};

/// A bit string with the single noisy fitness observed when it was drawn.
struct ScoredSample {
  BitString bits;
  double fitness = 0.0;
};

inline ProbabilityVector init_probability_vector(std::size_t d) {
  if (d == 0) throw InvalidDimension("dimension must be >= 1");
  return ProbabilityVector(std::vector<double>(d, 0.5));
}

/// Bit i is 1 iff a uniform [0,1) draw is strictly below p(i).
inline BitString sample(const ProbabilityVector& p, Rng& rng) {
  BitString x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (rng.uniform01() < p[i]) x.set(i, true);
  return x;
}

/// Returns {winner, loser}. The first argument wins only on strictly greater
/// fitness; ties go to the second argument.
inline std::pair<const ScoredSample&, const ScoredSample&> compete(const ScoredSample& a,
                                                                     const ScoredSample& b) {
  if (a.bits.size() != b.bits.size()) throw std::invalid_argument("compete: bit strings differ in length");
  if (a.fitness > b.fitness) return {a, b};
  return {b, a};
}

/// Shift p by 1/k towards the winner wherever winner and loser disagree,
/// clamping each element into [0, 1].
inline void update_in_place(ProbabilityVector& p, const BitString& winner, const BitString& loser, double k) {
  if (winner.size() != p.size() || loser.size() != p.size())
    throw std::invalid_argument("update: winner, loser and model must share one dimension");
  if (!(k > 0.0)) throw InvalidParameter("update: virtual population size k must be > 0");
  const double step = 1.0 / k;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (winner[i] == loser[i]) continue;
    double& v = p.probs_[i];
    v = winner[i] ? std::min(1.0, v + step) : std::max(0.0, v - step);
  }
}

inline ProbabilityVector update(const ProbabilityVector& p, const BitString& winner, const BitString& loser,
                                double k) {
  ProbabilityVector out = p;
  update_in_place(out, winner, loser, k);
  return out;
}

/// Bit i is 1 iff p(i) > 0.5; exactly 0.5 maps to 0.
inline BitString recommend(const ProbabilityVector& p) {
  BitString x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.5) x.set(i, true);
  return x;
}

inline bool is_converged(const ProbabilityVector& p) {
  return std::all_of(p.values().begin(), p.values().end(), [](double v) { return v == 0.0 || v == 1.0; });
}

} // namespace noisy_eda
