#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "demi/core.hpp"
#include "demi/rng.hpp"

namespace demi {

struct Atom {
  double value;
  double prob;
};

/// A one-dimensional law used for innovations: rademacher, bernoulli(p),
/// uniform(a,b), normal, or an explicit finite discrete law.
class ScalarLaw {
 public:
  enum class Kind { kDiscrete, kUniform, kNormal };

  static ScalarLaw rademacher();
  static ScalarLaw bernoulli(double p);
  static ScalarLaw uniform(double a, double b);
  static ScalarLaw normal();
  static ScalarLaw discrete(std::vector<Atom> atoms, std::string name = {});

  /// Parses "rademacher", "bernoulli(0.3)", "uniform(-1,1)", "normal",
  /// "discrete(-1:0.25,2:0.75)".
  static ScalarLaw parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_discrete() const { return kind_ == Kind::kDiscrete; }
  std::span<const Atom> atoms() const { return atoms_; }

  double mean() const;
  double second_moment() const;
  double variance() const { return second_moment() - mean() * mean(); }
  double lower() const;
  double upper() const;
  /// log E exp(t X).
  double log_mgf(double t) const;
  double sample(Stream& rng) const;

 private:
  ScalarLaw() = default;

  Kind kind_ = Kind::kDiscrete;
  std::string name_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double a_ = 0.0;
  double b_ = 0.0;
};

enum class Family {
  kIid,
  kMovingSum,
  kGaussianAssoc,
  kSharedShock,
  kCenteredPartialSum,
  kAdversarialSignFlip,
};

std::string to_string(Family f);
Family parse_family(std::string_view name);

/// Covariance of the increments of the gaussian_assoc family.
struct CovarianceModel {
  enum class Kind { kExplicit, kEquicorrelated, kAr1, kDiagonal };
  Kind kind = Kind::kDiagonal;
  double variance = 1.0;
  double rho = 0.0;
  /// Row-major horizon x horizon matrix for kExplicit.
  std::vector<double> matrix;

  std::vector<double> materialize(std::size_t n) const;
};

struct GeneratorSpec {
  Family family = Family::kIid;
  std::size_t horizon = 1;
  /// Law of the i.i.d. innovations (B_i, Y_i or X_i depending on family).
  ScalarLaw law = ScalarLaw::rademacher();
  /// Shared component W for shared_shock.
  std::optional<ScalarLaw> shock;
  /// c_0..c_q for moving_sum, all >= 0.
  std::vector<double> coefficients;
  CovarianceModel covariance;
  /// Family wrapped by centered_partial_sum.
  Family inner = Family::kIid;
  /// Constant added to S_1 (and therefore to every S_k).
  double start = 0.0;

  /// Effective family after unwrapping centered_partial_sum.
  Family base_family() const {
    return family == Family::kCenteredPartialSum ? inner : family;
  }
  bool centered() const { return family == Family::kCenteredPartialSum; }

  GeneratorSpec with_horizon(std::size_t n) const;
  /// Stable textual identity, e.g. "iid(rademacher)/n=3".
  std::string id() const;
  /// Throws DomainError on invalid parameters.
  void validate() const;
};

/// Finite-support chain that can be enumerated exactly.
struct DiscreteChainSpec {
  std::vector<Atom> increment_support;
  std::optional<std::vector<Atom>> shared_component;
  std::size_t horizon = 1;
  /// Subtracted from every increment.
  double drift = 0.0;
  double start = 0.0;
  /// Even steps copy the negated previous increment (X_2 = -X_1, ...).
  bool sign_flip_pairs = false;

  static constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 24;

  std::size_t free_steps() const {
    return sign_flip_pairs ? (horizon + 1) / 2 : horizon;
  }
  /// |support|^free_steps * |shared|, saturating at UINT64_MAX.
  std::uint64_t outcome_count() const;
  void validate() const;
};

/// Increments X_i = offset_i + sum_k coef_ik * xi_k over independent
/// innovations xi_k. Every family is an instance, which gives exact moments
/// and per-step log-MGFs without simulation.
class ProcessModel {
 public:
  explicit ProcessModel(const GeneratorSpec& spec);

  const GeneratorSpec& spec() const { return spec_; }
  std::size_t horizon() const { return spec_.horizon; }
  std::size_t innovation_count() const { return innovation_law_.size(); }

  /// Fills `out` (size horizon) with S_1..S_n. `scratch` must have
  /// innovation_count() entries.
  void sample_path(Stream& rng, std::span<double> scratch, std::span<double> out) const;

  /// Increment statistics, step index i in 1..n.
  double increment_mean(std::size_t i) const;
  double increment_second_moment(std::size_t i) const;
  double increment_lower(std::size_t i) const;
  double increment_upper(std::size_t i) const;
  double increment_covariance(std::size_t i, std::size_t j) const;
  /// psi_i(theta) = log E exp(theta X_i).
  double log_mgf(std::size_t i, double theta) const;

  /// Almost-sure bound C on |X_i| over all steps; +inf when unbounded.
  double increment_bound() const;
  /// V_n = sum_{i<=n} E X_i^2.
  double v_n(std::size_t n) const;
  double mean_of_sum(std::size_t n) const;
  double variance_of_sum(std::size_t n) const;
  /// sigma_n^2 = E S_n^2.
  double second_moment_of_sum(std::size_t n) const;
  /// Almost-sure lower bound of min_k S_k.
  double path_lower_bound() const;

  /// Increments are nondecreasing functions of independent innovations or
  /// jointly normal with nonnegative covariance.
  bool associated() const;
  /// Associated with E X_i = 0 for i >= 2.
  bool is_demimartingale() const;
  /// Associated with E X_i >= 0 for i >= 2.
  bool is_demisubmartingale() const;
  /// E X_i = 0 for every i, including the first step.
  bool mean_zero() const;
  /// Identically distributed increments (checked through law identity of the
  /// innovation rows).
  bool identically_distributed() const;

 private:
  struct Term {
    std::size_t innovation;
    double coef;
  };

  void add_row(std::vector<Term> terms, double offset);

  GeneratorSpec spec_;
  std::vector<ScalarLaw> laws_;
  std::vector<std::size_t> innovation_law_;
  std::vector<std::size_t> row_begin_;
  std::vector<Term> terms_;
  std::vector<double> offsets_;
};

/// Ensembles are generated in fixed-size chunks; chunk c draws from
/// derive_stream(seed, c), so path i is the same for any thread count.
inline constexpr std::size_t kChunkPaths = 4096;

ProcessEnsemble generate(const GeneratorSpec& spec, std::size_t paths, std::uint64_t seed);

/// Throws DomainError("not enumerable") for continuous or non-chain families.
DiscreteChainSpec to_chain(const GeneratorSpec& spec);

}  // namespace demi
