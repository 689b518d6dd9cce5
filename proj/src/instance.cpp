#include "demi/instance.hpp"

#include <cmath>

#include "detail/text.hpp"

namespace demi {

namespace {

constexpr std::size_t kProbePaths = 256;
constexpr std::size_t kProbesPerPath = 16;

}  // namespace

const StoppingRule& require_stopping(const Instance& instance, bool second) {
  const auto& rule = second ? instance.stopping2 : instance.stopping;
  if (!rule) throw ConfigError(second ? "stopping2" : "stopping", "required");
  return *rule;
}

std::string require_monotone_indicator(const Instance& instance, const StoppingRule& rule,
                                       Monotonicity dir, IndicatorTarget target,
                                       std::size_t max_index) {
  const std::string what =
      std::string(target == IndicatorTarget::kStoppedBy ? "I{tau<=j}" : "I{tau=j}") + " " +
      to_string(dir);
  if (dir == Monotonicity::kNone) {
    throw PreconditionError("stopping indicator monotonicity",
                            rule.describe() + " declares no direction");
  }
  if (rule.analytic_certificate(dir, target, max_index)) {
    return what + ": CERTIFIED_BY_CONSTRUCTION";
  }
  const auto probes =
      generate(instance.generator, kProbePaths, instance.seed ^ 0x9E3779B97F4A7C15ULL);
  const Certificate cert = certify_indicator_monotonicity(rule, dir, probes, kProbesPerPath,
                                                          instance.seed, target, max_index);
  if (cert.kind == Certificate::Kind::kCounterexample) {
    throw PreconditionError(
        "stopping indicator monotonicity",
        rule.describe() + " is not " + what + ": raising S_" + std::to_string(cert.coordinate) +
            " by " + detail::format_number(cert.delta) + " moves the indicator at j=" +
            std::to_string(cert.index) + " the wrong way");
  }
  return what + ": SAMPLED_OK (" + std::to_string(cert.probes) + " probes)";
}

std::string require_finite_tau(const Instance& instance, const StoppingRule& rule,
                               std::size_t by) {
  const std::size_t n = by == 0 ? instance.generator.horizon : by;
  if (const auto b = rule.bound(); b && *b <= n) {
    return "tau bounded by " + std::to_string(*b);
  }
  double stopped = 0.0;
  try {
    const auto est = estimate(
        instance.generator, 1,
        [&](std::span<const double> path, std::span<double> out) {
          out[0] = rule.stop_time(path.first(n)) ? 1.0 : 0.0;
        },
        Exact{});
    stopped = est.mean[0];
  } catch (const PreconditionError&) {
    throw PreconditionError("stopping time not a.s. finite at this horizon",
                            rule.describe() +
                                " is not capped and the generator cannot be enumerated to "
                                "confirm P(tau <= n) = 1");
  }
  if (1.0 - stopped > 1e-12) {
    throw PreconditionError("stopping time not a.s. finite at this horizon",
                            "P(tau <= " + std::to_string(n) + ") = " +
                                detail::format_number(stopped) + " for " + rule.describe());
  }
  return "oracle confirms P(tau <= " + std::to_string(n) + ") = 1";
}

std::vector<MonotoneTestFunction> instance_battery(const Instance& instance,
                                                   const Params& params, bool nonnegative) {
  const std::size_t size = params.integer_or("battery_size", 32);
  if (size == 0) throw ConfigError("params.battery_size", "must be positive");
  return sample_battery(instance.seed, size, nonnegative);
}

}  // namespace demi
