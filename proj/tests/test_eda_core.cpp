#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "noisy_eda/eda_core.hpp"
#include "support/oracles.hpp"

using namespace noisy_eda;

TEST(InitProbabilityVector, AllHalf) {
  const auto p3 = init_probability_vector(3);
  EXPECT_EQ(oracle::to_vector(p3), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(oracle::to_vector(init_probability_vector(1)), std::vector<double>{0.5});
  const auto p100 = init_probability_vector(100);
  ASSERT_EQ(p100.size(), 100u);
  for (double v : p100.values()) EXPECT_EQ(v, 0.5);
}

TEST(InitProbabilityVector, ZeroDimensionRejected) {
  EXPECT_THROW(init_probability_vector(0), InvalidDimension);
}

TEST(Sample, DegenerateProbabilities) {
  Rng rng(1);
  const ProbabilityVector zeros({0.0, 0.0, 0.0});
  const ProbabilityVector ones({1.0, 1.0, 1.0});
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(sample(zeros, rng).to_string(), "000");
    EXPECT_EQ(sample(ones, rng).to_string(), "111");
  }
}

TEST(Sample, HalfProbabilityConcentrates) {
  Rng rng(2024);
  const std::size_t d = 8;
  const int draws = 10000;
  const auto p = init_probability_vector(d);
  std::vector<int> ones(d, 0);
  for (int t = 0; t < draws; ++t) {
    const auto x = sample(p, rng);
    for (std::size_t i = 0; i < d; ++i) ones[i] += x[i];
  }
  const double bound = 3.0 * std::sqrt(0.25 / draws); // 0.015
  for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(ones[i] / double(draws), 0.5, bound) << "bit " << i;
}

TEST(Compete, StrictInequalityAndTies) {
  const ScoredSample a{BitString{1, 0}, 1.0}, b{BitString{0, 1}, 0.0};
  EXPECT_EQ(&compete(a, b).first, &a);
  EXPECT_EQ(&compete(a, b).second, &b);

  const ScoredSample c{BitString{1, 0}, 0.7}, e{BitString{0, 1}, 0.7};
  EXPECT_EQ(&compete(c, e).first, &e);

  const ScoredSample f{BitString{1, 0}, 0.2}, g{BitString{0, 1}, 0.9};
  EXPECT_EQ(&compete(f, g).first, &g);
}

TEST(Compete, LengthMismatchRejected) {
  const ScoredSample a{BitString{1, 0}, 1.0}, b{BitString{0, 1, 1}, 0.0};
  EXPECT_THROW(compete(a, b), std::invalid_argument);
}

TEST(Update, IdenticalStringsLeaveModelUnchanged) {
  const ProbabilityVector p({0.2, 0.5, 0.9});
  const BitString x{1, 0, 1};
  EXPECT_EQ(update(p, x, x, 3.0), p);
}

TEST(Update, MovesTowardsWinnerWhereBitsDiffer) {
  const auto p = init_probability_vector(3);
  const auto q = update(p, BitString::from_string("110"), BitString::from_string("011"), 10.0);
  EXPECT_DOUBLE_EQ(q[0], 0.6);
  EXPECT_DOUBLE_EQ(q[1], 0.5);
  EXPECT_DOUBLE_EQ(q[2], 0.4);
}

TEST(Update, ClampsAtOne) {
  const BitString w{1}, l{0};
  EXPECT_DOUBLE_EQ(update(ProbabilityVector({0.98}), w, l, 100.0)[0], 0.99);
  EXPECT_EQ(update(ProbabilityVector({0.98}), w, l, 50.0)[0], 1.0);
  EXPECT_EQ(update(ProbabilityVector({0.995}), w, l, 50.0)[0], 1.0);
  EXPECT_EQ(update(ProbabilityVector({0.005}), l, w, 50.0)[0], 0.0);
}

TEST(Update, Errors) {
  const auto p = init_probability_vector(2);
  EXPECT_THROW(update(p, BitString{1, 0, 0}, BitString{0, 1}, 2.0), std::invalid_argument);
  EXPECT_THROW(update(p, BitString{1, 0}, BitString{0, 1}, 0.0), InvalidParameter);
  EXPECT_THROW(update(p, BitString{1, 0}, BitString{0, 1}, -1.0), InvalidParameter);
}

TEST(Recommend, StrictThreshold) {
  EXPECT_EQ(recommend(ProbabilityVector({0.5, 0.5})).to_string(), "00");
  EXPECT_EQ(recommend(ProbabilityVector({0.51, 0.49, 1.0})).to_string(), "101");
  EXPECT_EQ(recommend(init_probability_vector(17)), BitString(17));
}

TEST(IsConverged, OnlyAtBounds) {
  EXPECT_TRUE(is_converged(ProbabilityVector({0.0, 1.0, 1.0, 0.0})));
  EXPECT_FALSE(is_converged(ProbabilityVector({0.0, 0.5, 1.0})));
  EXPECT_FALSE(is_converged(ProbabilityVector({1e-9})));
}

// Property checks over random models and pairs.

TEST(UpdateProperties, StaysInUnitIntervalUnderRandomSequences) {
  Rng rng(11);
  for (int run = 0; run < 50; ++run) {
    const std::size_t d = 1 + rng.below(12);
    const double k = 1.0 + 20.0 * rng.uniform01();
    auto p = init_probability_vector(d);
    for (int step = 0; step < 400; ++step) {
      update_in_place(p, oracle::random_bits(rng, d), oracle::random_bits(rng, d), k);
      for (double v : p.values()) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
    }
  }
}

TEST(UpdateProperties, ReversibleAwayFromBounds) {
  Rng rng(12);
  for (int c = 0; c < 500; ++c) {
    const std::size_t d = 1 + rng.below(8);
    std::vector<double> probs(d);
    // k = 8 and multiples of 1/8 strictly inside (0, 1) keep every step exact.
    for (auto& v : probs) v = (1.0 + static_cast<double>(rng.below(7))) / 8.0;
    const ProbabilityVector p(probs);
    const auto w = oracle::random_bits(rng, d), l = oracle::random_bits(rng, d);
    const auto there = update(p, w, l, 8.0);
    EXPECT_EQ(update(there, l, w, 8.0), p);
  }
}

TEST(UpdateProperties, ChangedCountIsHammingMinusSuppressed) {
  Rng rng(13);
  for (int c = 0; c < 500; ++c) {
    const std::size_t d = 1 + rng.below(10);
    const ProbabilityVector p(oracle::random_probs(rng, d));
    const auto w = oracle::random_bits(rng, d), l = oracle::random_bits(rng, d);
    const auto q = update(p, w, l, 4.0);
    std::size_t hamming = 0, suppressed = 0, changed = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (w[i] != l[i]) {
        ++hamming;
        if ((w[i] && p[i] == 1.0) || (!w[i] && p[i] == 0.0)) ++suppressed;
      }
      if (q[i] != p[i]) ++changed;
    }
    EXPECT_EQ(changed, hamming - suppressed);
  }
}

TEST(UpdateProperties, RecommendationFlipsOnlyWhereHalfIsCrossed) {
  Rng rng(14);
  for (int c = 0; c < 500; ++c) {
    const std::size_t d = 1 + rng.below(10);
    const ProbabilityVector p(oracle::random_probs(rng, d));
    const auto q = update(p, oracle::random_bits(rng, d), oracle::random_bits(rng, d), 1.0 + 5 * rng.uniform01());
    const auto before = recommend(p), after = recommend(q);
    for (std::size_t i = 0; i < d; ++i)
      if (before[i] != after[i]) EXPECT_NE(p[i] > 0.5, q[i] > 0.5);
  }
}

TEST(UpdateProperties, MatchesBruteForceOracle) {
  Rng rng(15);
  for (int c = 0; c < 1000; ++c) {
    const std::size_t d = 1 + rng.below(8);
    const auto probs = oracle::random_probs(rng, d);
    const auto w = oracle::random_bits(rng, d), l = oracle::random_bits(rng, d);
    const double k = 0.5 + 10.0 * rng.uniform01();
    const auto q = update(ProbabilityVector(probs), w, l, k);
    EXPECT_EQ(oracle::to_vector(q), oracle::update(probs, oracle::to_ints(w), oracle::to_ints(l), k));
    EXPECT_EQ(oracle::to_ints(recommend(q)), oracle::recommend(oracle::to_vector(q)));
  }
}

TEST(NonMutation, SampleRecommendConvergedLeaveInputs) {
  Rng rng(16);
  const ProbabilityVector p({0.1, 0.6, 1.0, 0.0});
  const ProbabilityVector copy = p;
  (void)sample(p, rng);
  (void)recommend(p);
  (void)is_converged(p);
  (void)update(p, BitString{1, 1, 1, 1}, BitString{0, 0, 0, 0}, 2.0);
  EXPECT_EQ(p, copy);
}
