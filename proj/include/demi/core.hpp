#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace demi {

/// Raised when an input violates a documented domain (bad argument, empty
/// sample, out-of-range parameter).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an instance does not meet the structural hypotheses of the
/// statement being verified. Distinct from a FAIL verdict.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string precondition, const std::string& detail)
      : std::runtime_error(precondition + ": " + detail),
        precondition_(std::move(precondition)) {}

  const std::string& precondition() const { return precondition_; }

 private:
  std::string precondition_;
};

/// Invalid or missing configuration field.
class ConfigError : public DomainError {
 public:
  ConfigError(std::string field, const std::string& detail)
      : DomainError(field + ": " + detail), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// One sampled trajectory S_1..S_n. S_0 = 0 is implicit and never stored.
class ProcessPath {
 public:
  explicit ProcessPath(std::vector<double> values);

  std::size_t horizon() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  /// S_k for k in 0..n, with S_0 = 0.
  double at(std::size_t k) const { return k == 0 ? 0.0 : values_[k - 1]; }
  /// X_k = S_k - S_{k-1}, k in 1..n.
  double increment(std::size_t k) const { return at(k) - at(k - 1); }

 private:
  std::vector<double> values_;
};

/// Paths stored row-major with a shared horizon.
class ProcessEnsemble {
 public:
  ProcessEnsemble(std::size_t horizon, std::vector<double> values,
                  std::uint64_t seed, std::string generator_id);

  std::size_t horizon() const { return horizon_; }
  std::size_t size() const { return values_.size() / horizon_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& generator_id() const { return generator_id_; }

  std::span<const double> path(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * horizon_, horizon_);
  }
  ProcessPath to_path(std::size_t i) const;
  std::span<const double> flat() const { return values_; }

 private:
  std::size_t horizon_;
  std::vector<double> values_;
  std::uint64_t seed_;
  std::string generator_id_;
};

struct SummaryStats {
  double mean = 0.0;
  /// Sample standard deviation over sqrt(count); +inf when count == 1.
  double std_error = 0.0;
  std::uint64_t count = 0;
};

/// Streaming mean/variance with an associative merge (Chan et al.).
class RunningStats {
 public:
  void push(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  SummaryStats summary() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Throws DomainError("empty sample") on empty input.
SummaryStats summarize(std::span<const double> samples);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

enum class Direction { kLessEq, kGreaterEq };
enum class Verdict { kPass, kFail, kInconclusive };

std::string to_string(Direction d);
std::string to_string(Verdict v);

struct Tolerance {
  double z = 3.0;
  double exact_rel_eps = 1e-12;
  /// Monte-Carlo tail checks need paths * bound >= this many expected hits.
  double min_expected_hits = 100.0;
};

/// One inequality evaluated inside a verification.
struct SubCheck {
  std::string label;
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  /// Standard error of the compared quantity (lhs - rhs when rhs is also
  /// estimated path by path).
  double margin_stderr = 0.0;
  Direction direction = Direction::kLessEq;
  /// Set for Monte-Carlo tail checks with too few expected hits.
  bool underpowered = false;
  double z_margin = 0.0;
  Verdict verdict = Verdict::kPass;
};

struct VerificationReport {
  std::string theorem_id;
  SummaryStats lhs;
  double rhs = 0.0;
  Direction direction = Direction::kLessEq;
  double z_margin = 0.0;
  Verdict verdict = Verdict::kPass;
  bool exact = false;
  std::vector<SubCheck> checks;
  std::vector<std::string> notes;
};

/// Signed slack of `lhs dir rhs` in units of max(stderr, eps*scale).
double z_margin(double lhs, double rhs, Direction dir, double std_error,
                const Tolerance& tol);

/// Verdict for a single check. `family_size` applies a Bonferroni correction
/// to the Monte-Carlo threshold so that a battery of K checks keeps the
/// single-check false-FAIL rate.
Verdict judge(double z, bool exact, double std_error, std::size_t family_size,
              const Tolerance& tol);

/// Scores every sub-check and builds a report whose headline is the most
/// adverse one. Throws DomainError when `checks` is empty.
VerificationReport aggregate(std::string theorem_id, std::vector<SubCheck> checks,
                             bool exact, std::uint64_t count,
                             const Tolerance& tol);

}  // namespace demi
