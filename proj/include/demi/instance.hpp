#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "demi/generators.hpp"
#include "demi/harness.hpp"
#include "demi/monotone.hpp"
#include "demi/stopping.hpp"

namespace demi {

/// What a registry entry is evaluated on.
struct Instance {
  GeneratorSpec generator;
  std::optional<StoppingRule> stopping;
  /// Second rule for two-stop statements (tau_2).
  std::optional<StoppingRule> stopping2;
  /// Seeds batteries and monotonicity probes, also in exact mode.
  std::uint64_t seed = 0;
};

/// Throws ConfigError("stopping" or "stopping2", "required") when absent.
const StoppingRule& require_stopping(const Instance& instance, bool second = false);

/// Certifies the rule's indicator in `dir`; a counterexample raises
/// PreconditionError. Returns a note describing how it was certified.
std::string require_monotone_indicator(const Instance& instance, const StoppingRule& rule,
                                       Monotonicity dir, IndicatorTarget target,
                                       std::size_t max_index);

/// Refuses rules that may not stop by index `by` (default: the horizon):
/// accepted when the rule is structurally bounded by `by`, or when the
/// oracle confirms P(tau <= by) = 1. Returns a note naming the reason.
std::string require_finite_tau(const Instance& instance, const StoppingRule& rule,
                               std::size_t by = 0);

/// Test-function battery sized by params.battery_size (default 32).
std::vector<MonotoneTestFunction> instance_battery(const Instance& instance,
                                                   const Params& params, bool nonnegative);

/// Row helpers shared by the registry entries.
inline std::size_t stop_or(const StoppingRule& rule, std::span<const double> path,
                           std::size_t fallback) {
  return rule.stop_time(path).value_or(fallback);
}

}  // namespace demi
