#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "demi/core.hpp"
#include "demi/parallel.hpp"
#include "demi/rng.hpp"

namespace demi {
namespace {

TEST(Summarize, ConstantSampleHasZeroStderr) {
  const std::vector<double> xs{1, 1, 1};
  const auto s = summarize(xs);
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.std_error, 0.0);
  EXPECT_EQ(s.count, 3u);
}

TEST(Summarize, TwoPoints) {
  const std::vector<double> xs{0, 2};
  const auto s = summarize(xs);
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.std_error, 1.0);
}

TEST(Summarize, SingleSampleHasInfiniteStderr) {
  const std::vector<double> xs{4};
  EXPECT_TRUE(std::isinf(summarize(xs).std_error));
}

TEST(Summarize, EmptyThrows) {
  const std::vector<double> xs;
  EXPECT_THROW(summarize(xs), DomainError);
  try {
    summarize(xs);
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "empty sample");
  }
}

TEST(RunningStats, MergeMatchesConcatenation) {
  Stream rng = derive_stream(5, 0);
  std::vector<double> all;
  RunningStats a, b;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform() * 10 - 3;
    all.push_back(x);
    (i < 377 ? a : b).push(x);
  }
  RunningStats ab = a;
  ab.merge(b);
  RunningStats ba = b;
  ba.merge(a);
  const auto direct = summarize(all);
  EXPECT_NEAR(ab.mean(), direct.mean, 1e-13);
  EXPECT_NEAR(ab.summary().std_error, direct.std_error, 1e-13);
  EXPECT_NEAR(ba.mean(), direct.mean, 1e-13);
  EXPECT_NEAR(ba.summary().std_error, direct.std_error, 1e-13);
}

TEST(DeriveStream, SameSeedAndChunkGiveSameStream) {
  Stream a = derive_stream(42, 0);
  Stream b = derive_stream(42, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(DeriveStream, DistinctChunksDiffer) {
  Stream a = derive_stream(42, 0);
  Stream b = derive_stream(42, 1);
  EXPECT_NE(a(), b());
}

TEST(DeriveStream, ZeroSeedIsUsable) {
  Stream s = derive_stream(0, 0);
  std::uint64_t acc = 0;
  for (int i = 0; i < 8; ++i) acc |= s();
  EXPECT_NE(acc, 0u);
}

TEST(DeriveStream, UniformMeanIsHalf) {
  Stream s = derive_stream(9, 3);
  RunningStats st;
  for (int i = 0; i < 200000; ++i) st.push(s.uniform());
  EXPECT_NEAR(st.mean(), 0.5, 4 * std::sqrt(1.0 / 12 / 200000));
}

TEST(Parallel, OrderedReduceIsThreadCountIndependent) {
  auto run = [] {
    double acc = 0.0;
    ordered_chunk_reduce(
        64, acc,
        [](std::uint64_t c) {
          Stream s = derive_stream(11, c);
          double v = 0;
          for (int i = 0; i < 100; ++i) v += s.uniform() * 1e-3;
          return v;
        },
        [](double& a, double v) { a = a * 0.999 + v; });
    return acc;
  };
  setenv("DEMI_THREADS", "1", 1);
  const double one = run();
  setenv("DEMI_THREADS", "7", 1);
  const double seven = run();
  unsetenv("DEMI_THREADS");
  EXPECT_EQ(one, seven);
}

TEST(Verdict, ExactViolationFails) {
  Tolerance tol;
  const double z = z_margin(1.0, 0.5, Direction::kLessEq, 0.0, tol);
  EXPECT_LT(z, -1.0);
  EXPECT_EQ(judge(z, true, 0.0, 1, tol), Verdict::kFail);
}

TEST(Verdict, ExactRoundingNoiseStillPasses) {
  Tolerance tol;
  const double z = z_margin(1.0 + 1e-15, 1.0, Direction::kLessEq, 0.0, tol);
  EXPECT_EQ(judge(z, true, 0.0, 1, tol), Verdict::kPass);
}

TEST(Verdict, MonteCarloUsesThreeSigma) {
  Tolerance tol;
  EXPECT_EQ(judge(-2.9, false, 0.1, 1, tol), Verdict::kPass);
  EXPECT_EQ(judge(-3.1, false, 0.1, 1, tol), Verdict::kFail);
}

TEST(Verdict, BonferroniWidensTheThreshold) {
  Tolerance tol;
  EXPECT_EQ(judge(-3.5, false, 0.1, 100, tol), Verdict::kPass);
  EXPECT_EQ(judge(-5.0, false, 0.1, 100, tol), Verdict::kFail);
}

TEST(Verdict, InfiniteStderrIsInconclusive) {
  Tolerance tol;
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(judge(z_margin(1, 2, Direction::kLessEq, inf, tol), false, inf, 1, tol),
            Verdict::kInconclusive);
}

TEST(Aggregate, HeadlineIsMostAdverse) {
  Tolerance tol;
  SubCheck pass{"a", 0.0, 0.0, 1.0, 0.0, Direction::kLessEq};
  SubCheck fail{"b", 2.0, 0.0, 1.0, 0.0, Direction::kLessEq};
  const auto r = aggregate("X", {pass, fail}, true, 4, tol);
  EXPECT_EQ(r.verdict, Verdict::kFail);
  EXPECT_DOUBLE_EQ(r.lhs.mean, 2.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  EXPECT_EQ(r.checks.size(), 2u);
}

TEST(Aggregate, UnderpoweredMonteCarloIsInconclusive) {
  Tolerance tol;
  SubCheck c{"tail", 0.0, 0.0, 1e-6, 0.0, Direction::kLessEq};
  c.underpowered = true;
  EXPECT_EQ(aggregate("X", {c}, false, 1000, tol).verdict, Verdict::kInconclusive);
  EXPECT_EQ(aggregate("X", {c}, true, 1000, tol).verdict, Verdict::kPass);
}

TEST(Aggregate, EmptyThrows) {
  EXPECT_THROW(aggregate("X", {}, true, 0, Tolerance{}), DomainError);
}

TEST(ProcessPath, IncrementsUseImplicitZero) {
  const ProcessPath p({1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(p.at(0), 0.0);
  EXPECT_DOUBLE_EQ(p.increment(1), 1.0);
  EXPECT_DOUBLE_EQ(p.increment(3), -1.0);
}

}  // namespace
}  // namespace demi
