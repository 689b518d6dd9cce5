#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "demi/oracle.hpp"

namespace demi {
namespace {

DiscreteChainSpec chain_of(const std::string& law, std::size_t n) {
  GeneratorSpec s;
  s.law = ScalarLaw::parse(law);
  s.horizon = n;
  return to_chain(s);
}

DiscreteChainSpec shared_shock_chain(std::size_t n) {
  GeneratorSpec s;
  s.family = Family::kSharedShock;
  s.law = ScalarLaw::rademacher();
  s.shock = ScalarLaw::rademacher();
  s.horizon = n;
  return to_chain(s);
}

DiscreteChainSpec sign_flip_chain(std::size_t n) {
  GeneratorSpec s;
  s.family = Family::kAdversarialSignFlip;
  s.law = ScalarLaw::rademacher();
  s.horizon = n;
  return to_chain(s);
}

TEST(Enumerate, RademacherOneStep) {
  const auto t = enumerate(chain_of("rademacher", 1));
  ASSERT_EQ(t.outcomes.size(), 2u);
  for (const auto& o : t.outcomes) EXPECT_DOUBLE_EQ(o.probability, 0.5);
}

TEST(Enumerate, RademacherThreeStepsSumToOne) {
  const auto t = enumerate(chain_of("rademacher", 3));
  EXPECT_EQ(t.outcomes.size(), 8u);
  EXPECT_NEAR(t.total_probability, 1.0, 1e-12);
}

TEST(Enumerate, BernoulliTwoSteps) {
  const auto t = enumerate(chain_of("bernoulli(0.5)", 2));
  const double p = exact_expectation(t, [](const ProcessPath& p) { return p[1] == 1.0; });
  EXPECT_DOUBLE_EQ(p, 0.5);
}

TEST(Enumerate, CapExceededNamesTheCount) {
  try {
    enumerate(chain_of("rademacher", 25));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("33554432"), std::string::npos) << e.what();
  }
}

TEST(Enumerate, ProbabilityConservationAcrossFamilies) {
  for (const auto& chain : {chain_of("bernoulli(0.3)", 12), chain_of("discrete(-1:0.2,0:0.3,2:0.5)", 8),
                            shared_shock_chain(9), sign_flip_chain(7)}) {
    const auto t = enumerate(chain);
    EXPECT_EQ(t.outcomes.size(), chain.outcome_count());
    EXPECT_NEAR(t.total_probability, 1.0, 1e-12);
  }
}

TEST(ExactExpectation, Examples) {
  const auto t1 = enumerate(chain_of("rademacher", 1));
  EXPECT_DOUBLE_EQ(exact_expectation(t1, [](const ProcessPath& p) { return p[0]; }), 0.0);
  const auto t3 = enumerate(chain_of("rademacher", 3));
  EXPECT_DOUBLE_EQ(exact_expectation(t3, [](const ProcessPath& p) { return p[2] * p[2]; }), 3.0);
  const double hit = exact_expectation(t3, [](const ProcessPath& p) {
    return std::max({p[0], p[1], p[2]}) >= 1.0 ? 1.0 : 0.0;
  });
  EXPECT_DOUBLE_EQ(hit, 0.625);
}

TEST(ExactExpectation, IsLinear) {
  const auto t = enumerate(shared_shock_chain(6));
  auto f = [](const ProcessPath& p) { return p[5] * p[5]; };
  auto g = [](const ProcessPath& p) { return std::exp(0.3 * p[2]); };
  const double combined = exact_expectation(t, [&](const ProcessPath& p) { return 2.5 * f(p) - 0.7 * g(p); });
  EXPECT_NEAR(combined, 2.5 * exact_expectation(t, f) - 0.7 * exact_expectation(t, g), 1e-13);
}

TEST(ExactDemiCheck, Examples) {
  const auto iid = enumerate(chain_of("rademacher", 4));
  EXPECT_NEAR(exact_demi_check(iid, 2, MonotoneTestFunction::constant_one()), 0.0, 1e-15);
  const auto flip = enumerate(sign_flip_chain(2));
  EXPECT_DOUBLE_EQ(exact_demi_check(flip, 1, MonotoneTestFunction::last_coordinate()), -1.0);
  const auto shock = enumerate(shared_shock_chain(2));
  EXPECT_DOUBLE_EQ(exact_demi_check(shock, 1, MonotoneTestFunction::last_coordinate()), 1.0);
}

TEST(ExactDemiCheck, RejectsOutOfRangeIndex) {
  const auto t = enumerate(chain_of("rademacher", 3));
  EXPECT_THROW(exact_demi_check(t, 0, MonotoneTestFunction::constant_one()), DomainError);
  EXPECT_THROW(exact_demi_check(t, 3, MonotoneTestFunction::constant_one()), DomainError);
}

TEST(FoldOutcomes, MatchesMaterializedTable) {
  const auto chain = shared_shock_chain(7);
  double folded = 0.0;
  fold_outcomes(chain, [&](std::span<const double> p, double prob) { folded += prob * p[6] * p[3]; });
  const auto t = enumerate(chain);
  EXPECT_NEAR(folded, exact_expectation(t, [](const ProcessPath& p) { return p[6] * p[3]; }), 1e-13);
}

TEST(TerminalLaw, MatchesEnumeration) {
  for (const auto& chain : {chain_of("bernoulli(0.3)", 10), shared_shock_chain(8), sign_flip_chain(7),
                            chain_of("discrete(-1:0.2,0:0.3,2:0.5)", 6)}) {
    std::map<double, double> expected;
    for (const auto& o : enumerate(chain).outcomes) expected[o.path[chain.horizon - 1]] += o.probability;
    const auto law = terminal_law(chain);
    ASSERT_EQ(law.size(), expected.size());
    std::size_t i = 0;
    for (const auto& [value, prob] : expected) {
      EXPECT_NEAR(law[i].value, value, 1e-12);
      EXPECT_NEAR(law[i].prob, prob, 1e-14);
      ++i;
    }
  }
}

// Exact binomial tails of a 100-step rademacher walk, evaluated independently
// in rational arithmetic.
TEST(TerminalLaw, RademacherHundredStepTails) {
  const auto law = terminal_law(chain_of("rademacher", 100));
  EXPECT_EQ(law.size(), 101u);
  EXPECT_NEAR(tail_probability(law, 5, false), 0.308649706794626, 1e-13);
  EXPECT_NEAR(tail_probability(law, 10, false), 0.18410080866334813, 1e-13);
  EXPECT_NEAR(tail_probability(law, 15, false), 0.06660530960360667, 1e-13);
  EXPECT_NEAR(tail_probability(law, 10, true), 0.36820161732669626, 1e-13);
  EXPECT_NEAR(tail_probability(law, 50, true), 5.636282034205402e-07, 1e-19);
}

}  // namespace
}  // namespace demi
