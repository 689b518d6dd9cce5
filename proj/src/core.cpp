#include "demi/core.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>

namespace demi {

ProcessPath::ProcessPath(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("path horizon must be positive");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("path values must be finite");
  }
}

ProcessEnsemble::ProcessEnsemble(std::size_t horizon, std::vector<double> values,
                                 std::uint64_t seed, std::string generator_id)
    : horizon_(horizon),
      values_(std::move(values)),
      seed_(seed),
      generator_id_(std::move(generator_id)) {
  if (horizon_ == 0) throw DomainError("ensemble horizon must be positive");
  if (values_.empty() || values_.size() % horizon_ != 0) {
    throw DomainError("ensemble must hold a positive number of full paths");
  }
}

ProcessPath ProcessEnsemble::to_path(std::size_t i) const {
  auto p = path(i);
  return ProcessPath(std::vector<double>(p.begin(), p.end()));
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

SummaryStats RunningStats::summary() const {
  if (count_ == 0) throw DomainError("empty sample");
  SummaryStats s;
  s.mean = mean_;
  s.count = count_;
  s.std_error = count_ == 1 ? std::numeric_limits<double>::infinity()
                            : std::sqrt(variance() / static_cast<double>(count_));
  return s;
}

SummaryStats summarize(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empty sample");
  RunningStats acc;
  for (double x : samples) {
    if (!std::isfinite(x)) throw DomainError("sample values must be finite");
    acc.push(x);
  }
  return acc.summary();
}

std::string to_string(Direction d) { return d == Direction::kLessEq ? "<=" : ">="; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "PASS";
    case Verdict::kFail:
      return "FAIL";
    case Verdict::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

double z_margin(double lhs, double rhs, Direction dir, double std_error,
                const Tolerance& tol) {
  const double slack = dir == Direction::kLessEq ? rhs - lhs : lhs - rhs;
  if (std::isinf(std_error)) return 0.0;
  const double eps =
      tol.exact_rel_eps * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return slack / std::max(std_error, eps);
}

namespace {

double bonferroni_threshold(double z, std::size_t family_size) {
  if (family_size <= 1) return z;
  const boost::math::normal_distribution<double> normal;
  const double alpha = boost::math::cdf(boost::math::complement(normal, z));
  return boost::math::quantile(
      boost::math::complement(normal, alpha / static_cast<double>(family_size)));
}

}  // namespace

Verdict judge(double z, bool exact, double std_error, std::size_t family_size,
              const Tolerance& tol) {
  if (!exact && std::isinf(std_error)) return Verdict::kInconclusive;
  // A zero standard error means the compared quantity is deterministic, so
  // it is judged like an exact value.
  if (exact || std_error == 0.0) return z < -1.0 ? Verdict::kFail : Verdict::kPass;
  return z < -bonferroni_threshold(tol.z, family_size) ? Verdict::kFail
                                                        : Verdict::kPass;
}

VerificationReport aggregate(std::string theorem_id, std::vector<SubCheck> checks,
                             bool exact, std::uint64_t count,
                             const Tolerance& tol) {
  if (checks.empty()) throw DomainError("verification produced no checks");
  const std::size_t k = checks.size();
  for (auto& c : checks) {
    c.z_margin = z_margin(c.lhs, c.rhs, c.direction, c.margin_stderr, tol);
    c.verdict = c.underpowered && !exact
                    ? Verdict::kInconclusive
                    : judge(c.z_margin, exact, c.margin_stderr, k, tol);
  }

  auto rank = [](Verdict v) {
    return v == Verdict::kFail ? 0 : v == Verdict::kInconclusive ? 1 : 2;
  };
  const auto headline = std::min_element(
      checks.begin(), checks.end(), [&](const SubCheck& a, const SubCheck& b) {
        if (rank(a.verdict) != rank(b.verdict)) return rank(a.verdict) < rank(b.verdict);
        return a.z_margin < b.z_margin;
      });

  VerificationReport r;
  r.theorem_id = std::move(theorem_id);
  r.lhs = SummaryStats{headline->lhs, exact ? 0.0 : headline->margin_stderr, count};
  r.rhs = headline->rhs;
  r.direction = headline->direction;
  r.z_margin = headline->z_margin;
  r.verdict = headline->verdict;
  r.exact = exact;
  r.checks = std::move(checks);
  return r;
}

}  // namespace demi
