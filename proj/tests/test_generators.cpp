#include <gtest/gtest.h>

#include <cmath>

#include "demi/generators.hpp"
#include "demi/harness.hpp"

namespace demi {
namespace {

GeneratorSpec iid(const std::string& law, std::size_t n) {
  GeneratorSpec s;
  s.family = Family::kIid;
  s.law = ScalarLaw::parse(law);
  s.horizon = n;
  return s;
}

GeneratorSpec shared_shock(std::size_t n) {
  GeneratorSpec s;
  s.family = Family::kSharedShock;
  s.law = ScalarLaw::rademacher();
  s.shock = ScalarLaw::rademacher();
  s.horizon = n;
  return s;
}

TEST(ScalarLaw, ParsesNamedLaws) {
  EXPECT_DOUBLE_EQ(ScalarLaw::parse("rademacher").mean(), 0.0);
  EXPECT_DOUBLE_EQ(ScalarLaw::parse("bernoulli(0.3)").mean(), 0.3);
  EXPECT_DOUBLE_EQ(ScalarLaw::parse("uniform(-1,3)").mean(), 1.0);
  EXPECT_DOUBLE_EQ(ScalarLaw::parse("discrete(-1:0.25,2:0.75)").mean(), 1.25);
  EXPECT_THROW(ScalarLaw::parse("cauchy"), DomainError);
  EXPECT_THROW(ScalarLaw::parse("bernoulli(1.5)"), DomainError);
}

TEST(ScalarLaw, LogMgfOfRademacherIsLogCosh) {
  EXPECT_NEAR(ScalarLaw::rademacher().log_mgf(1.0), 0.4337808304830271, 1e-15);
}

TEST(Generate, RademacherPathsHaveParity) {
  const auto e = generate(iid("rademacher", 3), 50, 17);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double s3 = e.path(i)[2];
    EXPECT_LE(std::abs(s3), 3.0);
    EXPECT_EQ(std::lround(std::abs(s3)) % 2, 1);
  }
}

TEST(Generate, SameSeedIsBitIdentical) {
  const auto a = generate(shared_shock(5), 9000, 3);
  const auto b = generate(shared_shock(5), 9000, 3);
  ASSERT_EQ(a.flat().size(), b.flat().size());
  for (std::size_t i = 0; i < a.flat().size(); ++i) EXPECT_EQ(a.flat()[i], b.flat()[i]);
}

TEST(Generate, CenteredBernoulliHasZeroMean) {
  GeneratorSpec s = iid("bernoulli(0.5)", 6);
  s.family = Family::kCenteredPartialSum;
  s.inner = Family::kIid;
  const auto est = estimate(
      s, 1, [](std::span<const double> p, std::span<double> out) { out[0] = p.back(); },
      MonteCarlo{100000, 8});
  EXPECT_LE(std::abs(est.mean[0]), 3 * est.std_error[0]);
}

TEST(Generate, DiagonalGaussianIsUncorrelated) {
  GeneratorSpec s;
  s.family = Family::kGaussianAssoc;
  s.horizon = 3;
  const auto est = estimate(
      s, 1,
      [](std::span<const double> p, std::span<double> out) { out[0] = p[0] * (p[2] - p[1]); },
      MonteCarlo{100000, 21});
  EXPECT_LE(std::abs(est.mean[0]), 3 * est.std_error[0]);
}

TEST(Generate, EquicorrelatedGaussianCovariance) {
  GeneratorSpec s;
  s.family = Family::kGaussianAssoc;
  s.covariance.kind = CovarianceModel::Kind::kEquicorrelated;
  s.covariance.rho = 0.4;
  s.horizon = 2;
  const auto est = estimate(
      s, 1,
      [](std::span<const double> p, std::span<double> out) { out[0] = p[0] * (p[1] - p[0]); },
      MonteCarlo{200000, 4});
  EXPECT_NEAR(est.mean[0], 0.4, 4 * est.std_error[0]);
}

TEST(GeneratorSpec, RejectsNegativeCovariance) {
  GeneratorSpec s;
  s.family = Family::kGaussianAssoc;
  s.covariance.kind = CovarianceModel::Kind::kExplicit;
  s.covariance.matrix = {1, -0.2, -0.2, 1};
  s.horizon = 2;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(GeneratorSpec, RejectsIndefiniteCovariance) {
  GeneratorSpec s;
  s.family = Family::kGaussianAssoc;
  s.covariance.kind = CovarianceModel::Kind::kExplicit;
  s.covariance.matrix = {1, 2, 2, 1};
  s.horizon = 2;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(GeneratorSpec, UnknownFamilyThrows) { EXPECT_THROW(parse_family("garch"), DomainError); }

TEST(ToChain, RademacherHasEightOutcomes) {
  const auto c = to_chain(iid("rademacher", 3));
  EXPECT_EQ(c.increment_support.size(), 2u);
  EXPECT_EQ(c.outcome_count(), 8u);
}

TEST(ToChain, SharedShockCountsTheShock) {
  EXPECT_EQ(to_chain(shared_shock(2)).outcome_count(), 8u);
}

TEST(ToChain, GaussianIsNotEnumerable) {
  GeneratorSpec s;
  s.family = Family::kGaussianAssoc;
  s.horizon = 2;
  try {
    to_chain(s);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("not enumerable"), std::string::npos);
  }
}

TEST(ProcessModel, SharedShockMoments) {
  for (std::size_t n : {1u, 4u, 16u}) {
    const ProcessModel m(shared_shock(n));
    const double nd = static_cast<double>(n);
    EXPECT_DOUBLE_EQ(m.v_n(n), 2 * nd);
    EXPECT_DOUBLE_EQ(m.second_moment_of_sum(n), nd + nd * nd);
    EXPECT_DOUBLE_EQ(m.increment_bound(), 2.0);
    EXPECT_TRUE(m.associated());
    EXPECT_TRUE(m.is_demimartingale());
  }
}

TEST(ProcessModel, IidRademacherMoments) {
  const ProcessModel m(iid("rademacher", 10));
  EXPECT_DOUBLE_EQ(m.v_n(10), 10.0);
  EXPECT_DOUBLE_EQ(m.second_moment_of_sum(10), 10.0);
  EXPECT_TRUE(m.mean_zero());
  EXPECT_TRUE(m.identically_distributed());
}

TEST(ProcessModel, SignFlipIsNotAssociated) {
  GeneratorSpec s = iid("rademacher", 4);
  s.family = Family::kAdversarialSignFlip;
  const ProcessModel m(s);
  EXPECT_FALSE(m.associated());
  EXPECT_FALSE(m.is_demimartingale());
}

TEST(ProcessModel, BernoulliIsDemisubmartingaleOnly) {
  const ProcessModel m(iid("bernoulli(0.5)", 4));
  EXPECT_TRUE(m.is_demisubmartingale());
  EXPECT_FALSE(m.is_demimartingale());
  EXPECT_DOUBLE_EQ(m.path_lower_bound(), 0.0);
}

TEST(ProcessModel, MovingSumSecondMoment) {
  GeneratorSpec s = iid("rademacher", 5);
  s.family = Family::kMovingSum;
  s.coefficients = {1.0, 0.5};
  const ProcessModel m(s);
  EXPECT_DOUBLE_EQ(m.increment_second_moment(3), 1.25);
  EXPECT_DOUBLE_EQ(m.increment_bound(), 1.5);
  EXPECT_TRUE(m.associated());
}

}  // namespace
}  // namespace demi
