#include <gtest/gtest.h>

#include <cmath>

#include "demi/asymptotics.hpp"
#include "demi/bounds.hpp"
#include "demi/instance.hpp"
#include "demi/registry.hpp"

namespace demi {
namespace {

GeneratorSpec rademacher(std::size_t n) {
  GeneratorSpec s;
  s.horizon = n;
  return s;
}

GeneratorSpec shared_shock(std::size_t n) {
  GeneratorSpec s = rademacher(n);
  s.family = Family::kSharedShock;
  s.shock = ScalarLaw::rademacher();
  return s;
}

TEST(Ks, DistanceOfKnownSample) {
  // Sample {0}: the empirical CDF jumps from 0 to 1 at the median.
  EXPECT_DOUBLE_EQ(ks_distance_normal(std::vector<double>{0.0}), 0.5);
  EXPECT_THROW(ks_distance_normal(std::vector<double>{}), DomainError);
}

TEST(Ks, CriticalValue) {
  EXPECT_NEAR(ks_critical_value(10000), 0.01628, 1e-12);
}

// Rejections of true normal samples at the 1% gate: Binomial(500, 0.01) has
// mean 5 and P(X > 14) < 1e-3.
TEST(Ks, GateIsCalibratedOnNormalSamples) {
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto z = normal_samples(seed, 10000);
    rejections += ks_distance_normal(z) >= ks_critical_value(z.size());
  }
  EXPECT_LE(rejections, 14);
}

TEST(Ks, ShiftedSamplesFail) {
  auto z = normal_samples(1, 10000);
  for (auto& v : z) v += 0.1;
  EXPECT_GT(ks_distance_normal(z), ks_critical_value(z.size()));
}

TEST(Ecf, SmallForNormalSamples) {
  EXPECT_LT(ecf_distance_normal(normal_samples(3, 100000)), 0.01);
}

TEST(Clt, RademacherRatioIsOne) {
  const std::vector<std::size_t> grid{4, 16, 64};
  const auto r = clt_diagnose(rademacher(64), grid, 20000, 5);
  for (const auto& row : r.rows) EXPECT_NEAR(row.ratio_cubed, 1.0, 1e-12);
  EXPECT_FALSE(r.ratio_decreasing);
  // S_64 / 8 is a lattice law with a central atom of mass ~0.099, so the KS
  // distance cannot drop much below half of it; the ECF sees past the atoms.
  EXPECT_LT(r.rows.back().ks_distance, 0.06);
  EXPECT_LT(r.rows.back().ecf_distance, 0.02);
}

TEST(Clt, SharedShockRatioMatchesClosedForm) {
  const std::vector<std::size_t> grid{16, 64, 256};
  const auto r = clt_diagnose(shared_shock(256), grid, 4000, 5);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    const double n = static_cast<double>(row.n);
    const double expected = std::pow(2 * n / (n * n + n), 1.5);
    EXPECT_NEAR(row.ratio_cubed / expected, 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(row.v_n, 2 * n);
    EXPECT_NEAR(row.sigma_n, std::sqrt(n + n * n), 1e-12);
  }
  EXPECT_TRUE(r.ratio_decreasing);
  // The normalized limit is the shock itself, a two-point law: far from normal.
  EXPECT_GT(r.rows.back().ks_distance, 0.2);
}

TEST(Clt, RejectsUnboundedAndUnsortedInputs) {
  GeneratorSpec g;
  g.family = Family::kGaussianAssoc;
  g.horizon = 4;
  const std::vector<std::size_t> grid{2, 4};
  EXPECT_THROW(clt_diagnose(g, grid, 100, 1), DomainError);
  const std::vector<std::size_t> bad{4, 2};
  EXPECT_THROW(clt_diagnose(rademacher(4), bad, 100, 1), DomainError);
}

TEST(CompleteConvergence, RademacherTailsAndEnvelope) {
  const std::vector<std::size_t> grid{25, 50, 100};
  const auto d = complete_convergence_diagnose(rademacher(100), 1.0, 0.5, grid, 0, 1);
  ASSERT_EQ(d.rows.size(), 3u);
  EXPECT_NEAR(d.rows[0].tail, 0.01463329792022705, 1e-15);
  EXPECT_NEAR(d.rows[1].tail, 0.00030586400160359517, 1e-17);
  EXPECT_NEAR(d.rows[2].tail, 5.636282034205402e-07, 1e-19);
  EXPECT_NEAR(d.rows[2].envelope, 4.445031391939192e-05, 1e-18);
  for (const auto& row : d.rows) {
    EXPECT_TRUE(row.exact);
    EXPECT_LE(row.tail, row.envelope);
    const double nd = static_cast<double>(row.n);
    EXPECT_EQ(row.envelope, bernstein_tail_two_sided({0.5 * nd, nd, 1.0, row.n}));
    EXPECT_DOUBLE_EQ(row.vn_over_nr, 1.0);
  }
  EXPECT_LE(d.rows[0].partial_sum, d.rows[1].partial_sum);
  EXPECT_LE(d.rows[1].partial_sum, d.rows[2].partial_sum);
  EXPECT_TRUE(d.summable_decay);
  EXPECT_FALSE(d.hypothesis_trend);
  EXPECT_LT(d.geometric_fit, 0.0);
}

TEST(CompleteConvergence, TailVanishesBeyondSupport) {
  const std::vector<std::size_t> grid{4, 8};
  const auto d = complete_convergence_diagnose(rademacher(8), 1.5, 1.0, grid, 0, 1);
  for (const auto& row : d.rows) EXPECT_EQ(row.tail, 0.0);
}

TEST(CompleteConvergence, MonteCarloForContinuousLaws) {
  GeneratorSpec g = rademacher(32);
  g.law = ScalarLaw::uniform(-1, 1);
  const std::vector<std::size_t> grid{8, 16, 32};
  const auto d = complete_convergence_diagnose(g, 1.0, 0.25, grid, 50000, 3);
  for (const auto& row : d.rows) {
    EXPECT_FALSE(row.exact);
    EXPECT_GT(row.std_error, 0.0);
    EXPECT_LE(row.tail, row.envelope + 3 * row.std_error);
  }
}

TEST(CompleteConvergence, RejectsBadParameters) {
  const std::vector<std::size_t> grid{4};
  EXPECT_THROW(complete_convergence_diagnose(rademacher(4), 0.0, 0.5, grid, 0, 1), DomainError);
  EXPECT_THROW(complete_convergence_diagnose(rademacher(4), 1.0, -1, grid, 0, 1), DomainError);
}

TEST(CompleteConvergence, RegistryEntry) {
  Instance inst;
  inst.generator = rademacher(100);
  Params p;
  p.set("r", "1");
  p.set("epsilon", "0.5");
  p.set("n_grid", "25,50,100");
  const auto r = verify("T4.9", inst, p, Exact{}, Tolerance{});
  EXPECT_EQ(r.verdict, Verdict::kPass);
  EXPECT_EQ(r.checks.size(), 3u);
  EXPECT_EQ(verify("C5.7", inst, p, Exact{}, Tolerance{}).theorem_id, "C5.7-complete-conv-assoc");
}

}  // namespace
}  // namespace demi
