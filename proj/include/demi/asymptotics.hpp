#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "demi/core.hpp"
#include "demi/generators.hpp"
#include "demi/harness.hpp"

namespace demi {

struct Instance;

/// Frequencies of the empirical characteristic-function distance.
inline constexpr double kCfGrid[] = {0.5, 1.0, 2.0, 4.0};

/// Two-sided Kolmogorov-Smirnov distance of `samples` to the standard normal.
/// Sorts a copy; throws DomainError on empty input.
double ks_distance_normal(std::span<const double> samples);
/// Asymptotic 1%-level critical value 1.628 / sqrt(N).
double ks_critical_value(std::size_t sample_size);
/// max over kCfGrid of |mean exp(i t Z) - exp(-t^2/2)|.
double ecf_distance_normal(std::span<const double> samples);
/// N exact standard-normal draws from derive_stream(seed, c), c = 0, 1, ...
std::vector<double> normal_samples(std::uint64_t seed, std::size_t count);

struct CltDiagnostics {
  std::size_t n = 0;
  /// sqrt(E S_n^2), computed from the increment law.
  double sigma_n = 0.0;
  double v_n = 0.0;
  /// (sqrt(V_n) / sigma_n)^3.
  double ratio_cubed = 0.0;
  double ks_distance = 0.0;
  double ks_critical = 0.0;
  double ecf_distance = 0.0;
};

struct CltReport {
  std::vector<CltDiagnostics> rows;
  /// ratio_cubed strictly decreasing along the grid.
  bool ratio_decreasing = false;
};

/// One ensemble at max(n_grid); Z = S_n / sigma_n for every grid horizon.
/// Throws DomainError for unbounded increments or a non-increasing grid.
CltReport clt_diagnose(const GeneratorSpec& spec, std::span<const std::size_t> n_grid,
                       std::size_t paths, std::uint64_t seed);

struct TailRow {
  std::size_t n = 0;
  /// n^r epsilon.
  double threshold = 0.0;
  /// P(|S_n| >= n^r epsilon).
  double tail = 0.0;
  double std_error = 0.0;
  bool exact = false;
  /// 2 bernstein_tail(t = n^r epsilon).
  double envelope = 0.0;
  double partial_sum = 0.0;
  /// V_n / n^r.
  double vn_over_nr = 0.0;
};

struct CompleteConvergenceDiagnostics {
  double r = 0.0;
  double epsilon = 0.0;
  double c = 0.0;
  std::vector<TailRow> rows;
  /// Least-squares slope of log tail against n^r over the nonzero tails;
  /// NaN with fewer than two of them.
  double geometric_fit = 0.0;
  /// V_n / n^r strictly decreasing along the grid.
  bool hypothesis_trend = false;
  /// Consecutive tails shrink by at least 10x per doubling of n.
  bool summable_decay = false;
};

/// Tails are exact (terminal-law convolution) when the generator has a
/// finite-support chain, else estimated from `paths` paths. Throws
/// DomainError for r <= 0, epsilon <= 0, unbounded increments or a
/// non-increasing grid.
CompleteConvergenceDiagnostics complete_convergence_diagnose(const GeneratorSpec& spec, double r,
                                                             double epsilon,
                                                             std::span<const std::size_t> n_grid,
                                                             std::size_t paths,
                                                             std::uint64_t seed);

/// Registry entries: T4.9-complete-conv (demimartingales, alias C5.7 for
/// associated sequences). Checks every tail against its envelope.
VerificationReport verify_asymptotics_entry(const std::string& theorem_id,
                                            const Instance& instance, const Params& params,
                                            const Mode& mode, const Tolerance& tol);

}  // namespace demi
