#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "demi/core.hpp"
#include "demi/stopping.hpp"

namespace demi {

/// A componentwise nondecreasing functional of a prefix (s_1..s_j).
/// Weights and shifts beyond their stored length read as 0; stored entries
/// beyond the prefix length are ignored.
struct MonotoneTestFunction {
  enum class Kind {
    kLinearNonneg,            // sum w_i s_i
    kClippedLinear,           // clamp(sum w_i (s_i - c_i), floor, ceiling)
    kCoordinateMaxThreshold,  // 1{max_i s_i >= c_1}
    kLastCoordinate,          // s_j
    kConstantOne,             // 1
  };

  Kind kind = Kind::kConstantOne;
  std::vector<double> weights;
  std::vector<double> shifts;
  double floor = 0.0;
  double ceiling = 0.0;

  static MonotoneTestFunction constant_one();
  static MonotoneTestFunction last_coordinate();
  static MonotoneTestFunction linear(std::vector<double> weights);
  static MonotoneTestFunction clipped(std::vector<double> weights, std::vector<double> shifts,
                                      double floor, double ceiling);
  static MonotoneTestFunction max_threshold(double threshold);

  /// Nonnegative for every input.
  bool nonnegative() const;
  std::string describe() const;
};

std::string to_string(MonotoneTestFunction::Kind kind);

/// Throws DomainError on an empty prefix or NaN input.
double evaluate(const MonotoneTestFunction& f, std::span<const double> prefix);

/// Stored length of random battery weight vectors.
inline constexpr std::size_t kBatteryDimension = 64;

/// Deterministic battery. Always contains constant_one; contains
/// last_coordinate unless require_nonnegative (it takes negative values).
std::vector<MonotoneTestFunction> sample_battery(std::uint64_t seed, std::size_t count,
                                                 bool require_nonnegative);

struct Certificate {
  enum class Kind { kCertifiedByConstruction, kSampledOk, kCounterexample };
  Kind kind = Kind::kCertifiedByConstruction;
  /// Counterexample data: the unperturbed path, the perturbed coordinate i,
  /// the indicator index j and the perturbation delta.
  std::vector<double> path;
  std::size_t coordinate = 0;
  std::size_t index = 0;
  double delta = 0.0;
  std::size_t probes = 0;
};

std::string to_string(Certificate::Kind kind);

/// Checks that the indicator I{tau <= j} (or I{tau = j}) only moves in
/// `direction` when S_i is raised by delta > 0, with the raise propagated to
/// S_i..S_n. Built-in rules with an analytic certificate return
/// kCertifiedByConstruction; everything else is probed on `probe_paths`.
/// Probe deltas are log-uniform in [1e-6, 1] plus powers of two up to the
/// path's range, so coarse threshold crossings are also reached.
Certificate certify_indicator_monotonicity(
    const StoppingRule& rule, Monotonicity direction, const ProcessEnsemble& probe_paths,
    std::size_t probes_per_path, std::uint64_t seed,
    IndicatorTarget target = IndicatorTarget::kStoppedBy,
    std::size_t max_index = std::numeric_limits<std::size_t>::max());

}  // namespace demi
