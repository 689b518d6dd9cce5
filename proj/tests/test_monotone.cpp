#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "demi/monotone.hpp"
#include "demi/rng.hpp"

namespace demi {
namespace {

TEST(Evaluate, KindSemantics) {
  const std::vector<double> s{2, 3};
  EXPECT_DOUBLE_EQ(evaluate(MonotoneTestFunction::constant_one(), s), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(MonotoneTestFunction::linear({1, 1}), s), 5.0);
  EXPECT_DOUBLE_EQ(evaluate(MonotoneTestFunction::last_coordinate(), s), 3.0);
  const std::vector<double> t{1, 2.5, 0};
  EXPECT_DOUBLE_EQ(evaluate(MonotoneTestFunction::max_threshold(2), t), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(MonotoneTestFunction::max_threshold(3), t), 0.0);
  const auto clip = MonotoneTestFunction::clipped({1, 1}, {0, 1}, -1, 3);
  EXPECT_DOUBLE_EQ(evaluate(clip, s), 3.0);
  EXPECT_DOUBLE_EQ(evaluate(clip, std::vector<double>{-5, 0}), -1.0);
}

TEST(Evaluate, MissingWeightsReadAsZero) {
  const auto f = MonotoneTestFunction::linear({2});
  EXPECT_DOUBLE_EQ(evaluate(f, std::vector<double>{1, 100, 100}), 2.0);
}

TEST(Evaluate, RejectsEmptyAndNaN) {
  EXPECT_THROW(evaluate(MonotoneTestFunction::constant_one(), std::vector<double>{}), DomainError);
  EXPECT_THROW(evaluate(MonotoneTestFunction::linear({1}), std::vector<double>{std::nan("")}),
               DomainError);
}

TEST(Factories, RejectInvalidShapes) {
  EXPECT_THROW(MonotoneTestFunction::linear({1, -0.5}), DomainError);
  EXPECT_THROW(MonotoneTestFunction::clipped({1}, {0}, 2, 1), DomainError);
}

TEST(Battery, FixedMembersAndDeterminism) {
  const auto a = sample_battery(3, 2, false);
  const auto has = [](const auto& b, MonotoneTestFunction::Kind k) {
    return std::any_of(b.begin(), b.end(), [&](const auto& f) { return f.kind == k; });
  };
  EXPECT_TRUE(has(a, MonotoneTestFunction::Kind::kConstantOne));
  EXPECT_TRUE(has(a, MonotoneTestFunction::Kind::kLastCoordinate));
  const auto x = sample_battery(77, 32, false);
  const auto y = sample_battery(77, 32, false);
  ASSERT_EQ(x.size(), 32u);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].describe(), y[i].describe());
}

TEST(Battery, NonnegativeBatteryExcludesSignedKinds) {
  const auto b = sample_battery(5, 32, true);
  for (const auto& f : b) {
    EXPECT_TRUE(f.nonnegative()) << f.describe();
    EXPECT_NE(f.kind, MonotoneTestFunction::Kind::kLastCoordinate);
  }
}

// Raising S_i (and every later value) never lowers any battery member.
TEST(Battery, MonotonicitySelfTest) {
  const auto battery = sample_battery(123, 32, false);
  Stream rng = derive_stream(99, 0);
  for (int probe = 0; probe < 100000; ++probe) {
    const auto& f = battery[probe % battery.size()];
    const std::size_t j = 1 + rng() % 12;
    std::vector<double> s(j);
    for (auto& v : s) v = rng.uniform() * 8 - 4;
    const std::size_t i = rng() % j;
    const double delta = std::pow(10.0, -6 + 6 * rng.uniform());
    std::vector<double> raised = s;
    for (std::size_t k = i; k < j; ++k) raised[k] += delta;
    ASSERT_GE(evaluate(f, raised), evaluate(f, s)) << f.describe();
  }
}

TEST(Battery, NonnegativitySelfTest) {
  const auto battery = sample_battery(321, 32, true);
  Stream rng = derive_stream(98, 0);
  double worst = 1.0;
  for (int probe = 0; probe < 100000; ++probe) {
    const auto& f = battery[probe % battery.size()];
    std::vector<double> s(1 + rng() % 12);
    for (auto& v : s) v = rng.uniform() * 20 - 10;
    worst = std::min(worst, evaluate(f, s));
  }
  EXPECT_GE(worst, 0.0);
}

ProcessEnsemble ensemble_of(std::vector<std::vector<double>> paths) {
  std::vector<double> flat;
  for (const auto& p : paths) flat.insert(flat.end(), p.begin(), p.end());
  return ProcessEnsemble(paths.front().size(), flat, 0, "hand");
}

TEST(Certify, FirstPassageUpIsCertified) {
  const auto cert = certify_indicator_monotonicity(StoppingRule::first_passage_up(1),
                                                   Monotonicity::kNondecreasing,
                                                   ensemble_of({{0, 1, 2}}), 4, 1);
  EXPECT_EQ(cert.kind, Certificate::Kind::kCertifiedByConstruction);
}

TEST(Certify, DeterministicIsCertifiedBothWays) {
  for (auto dir : {Monotonicity::kNondecreasing, Monotonicity::kNonincreasing}) {
    const auto cert = certify_indicator_monotonicity(StoppingRule::deterministic(2), dir,
                                                     ensemble_of({{0, 1, 2}}), 4, 1);
    EXPECT_EQ(cert.kind, Certificate::Kind::kCertifiedByConstruction);
  }
}

TEST(Certify, DownRuleDeclaredNondecreasingHasCounterexample) {
  const auto rule =
      StoppingRule::first_passage_down(-1).with_direction(Monotonicity::kNondecreasing);
  const auto cert = certify_indicator_monotonicity(rule, Monotonicity::kNondecreasing,
                                                   ensemble_of({{-2, 0}}), 64, 7);
  ASSERT_EQ(cert.kind, Certificate::Kind::kCounterexample);
  EXPECT_EQ(cert.coordinate, 1u);
  EXPECT_EQ(cert.path, (std::vector<double>{-2, 0}));
  EXPECT_GT(cert.delta, 1.0);
}

TEST(Certify, MonotoneUserRuleIsSampledOk) {
  const auto rule = StoppingRule::user(
      [](std::span<const double> s) { return s.back() + s.front() >= 1.0; },
      Monotonicity::kNondecreasing, "sum-of-ends");
  Stream rng = derive_stream(4, 0);
  std::vector<std::vector<double>> paths(40, std::vector<double>(5));
  for (auto& p : paths) {
    for (auto& v : p) v = rng.uniform() * 3 - 1.5;
  }
  const auto cert =
      certify_indicator_monotonicity(rule, Monotonicity::kNondecreasing, ensemble_of(paths), 16, 3);
  EXPECT_EQ(cert.kind, Certificate::Kind::kSampledOk);
  EXPECT_GT(cert.probes, 0u);
}

}  // namespace
}  // namespace demi
