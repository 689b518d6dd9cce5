#include "demi/registry.hpp"

#include <algorithm>

#include "demi/asymptotics.hpp"
#include "demi/bounds.hpp"
#include "demi/monotone.hpp"
#include "demi/stopping.hpp"

namespace demi {

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"D1.2-definition", {"D1.2"}, Owner::kDefinition, {}, {"variant", "battery_size"}, false,
       false, "E[(S_{j+1}-S_j) f(S_1..S_j)] >= 0 over the test-function battery"},
      {"T1.4-order", {"T1.4"}, Owner::kStopping, {}, {}, true, false,
       "E S_{tau^k} monotone in k and ordered against E S_1"},
      {"T2.1-stopped-pair", {"T2.1"}, Owner::kStopping, {}, {"M", "battery_size"}, true, false,
       "E S_tau <= E S_M and E[(S_M - S_tau) g(S_tau)] >= 0"},
      {"C2.2-stop-vs-fixed", {"C2.2"}, Owner::kStopping, {}, {}, true, false,
       "E S_{tau^j} <= E S_j"},
      {"T2.3-two-stops", {"T2.3"}, Owner::kStopping, {}, {"battery_size"}, true, true,
       "E[(S_tau2 - S_tau1) g(S_tau1)] >= 0 for tau1 <= tau2"},
      {"T3.1-OST-upper", {"T3.1"}, Owner::kStopping, {}, {"condition", "M"}, true, false,
       "E S_tau <= E S_1 for nondecreasing I{tau<=j}"},
      {"T3.2-OST-nonneg", {"T3.2"}, Owner::kStopping, {}, {"condition", "M"}, true, false,
       "E S_tau <= E S_1 for nonnegative processes"},
      {"T3.3-OST-lower", {"T3.3"}, Owner::kStopping, {}, {"condition", "M"}, true, false,
       "E S_tau >= E S_1 for nonincreasing I{tau<=j}"},
      {"L5.1-ui-proxy", {"L5.1"}, Owner::kStopping, {}, {"M"}, true, false,
       "E|S_{tau^k}| <= M E(tau^k) <= M E tau"},
      {"T4.1-doob-max", {"T4.1"}, Owner::kBounds, {"lambda"}, {"j"}, false, false,
       "P(max_{i<=j} S_i >= lambda) <= E S_1 / lambda"},
      {"C4.3-lp-max", {"C4.3"}, Owner::kBounds, {"p", "M"}, {"j"}, false, false,
       "E (max_{i<=j} S_i)^p <= p E S_1 / ((1-p) M^(1-p))"},
      {"L4.4/L4.6-lemma-grid",
       {"L4.4", "L4.6", "L4.4-lemma-grid", "L4.6-lemma-grid"},
       Owner::kBounds, {}, {}, false, false,
       "phi <= phi_bound, h1 >= h1_lower, psi_sup >= t^2/(2(V+tC/3)) on grids"},
      {"L4.5-mgf", {"L4.5"}, Owner::kBounds, {}, {"C"}, false, false,
       "log E exp(lambda X_i) <= lambda^2 E X_i^2 / (2(1 - lambda C/3))"},
      {"T4.7-bernstein", {"T4.7"}, Owner::kBounds, {"t"}, {"sided", "C"}, false, false,
       "P(S_n >= t) <= exp(-t^2/(2(V_n + tC/3))) and the two-sided version"},
      {"C4.10-exp-stopped", {"C4.10"}, Owner::kBounds, {"theta"}, {"h", "battery_size"}, true,
       false, "E exp(theta S_tau - H(tau)) against 1"},
      {"C5.2/C5.3-wald-first", {"C5.2", "C5.3"}, Owner::kBounds, {}, {}, true, false,
       "E S_tau against E X_1 E tau"},
      {"C5.4-wald-second", {"C5.4"}, Owner::kBounds, {}, {}, true, false,
       "E S_tau^2 against E X_1^2 E tau"},
      {"C5.5-wald-exp", {"C5.5"}, Owner::kBounds, {"theta"}, {}, true, false,
       "E exp(theta S_tau - sum_{i<=tau} psi_i(theta)) against 1"},
      {"T5.6-bernstein-assoc", {"T5.6"}, Owner::kBounds, {"t"}, {"sided", "C"}, false, false,
       "Bernstein tail for mean-zero associated increments"},
      {"T4.9-complete-conv", {"T4.9"}, Owner::kAsymptotics, {"r", "epsilon"}, {"n_grid"}, false,
       false, "P(|S_n| >= n^r eps) below the two-sided Bernstein envelope"},
      {"C5.7-complete-conv-assoc", {"C5.7"}, Owner::kAsymptotics, {"r", "epsilon"}, {"n_grid"},
       false, false, "complete convergence for mean-zero associated increments"},
  };
  return entries;
}

const RegistryEntry& resolve_entry(std::string_view theorem_id) {
  for (const auto& e : registry()) {
    if (e.id == theorem_id) return e;
    if (std::find(e.aliases.begin(), e.aliases.end(), theorem_id) != e.aliases.end()) return e;
  }
  throw ConfigError("theorem_id", "unknown id '" + std::string(theorem_id) + "'");
}

void validate_against_schema(const RegistryEntry& entry, const Instance& instance,
                             const Params& params) {
  for (const auto& key : entry.required) {
    if (!params.has(key)) throw ConfigError("params." + key, "required by " + entry.id);
  }
  for (const auto& [key, value] : params.values()) {
    const bool known =
        std::find(entry.required.begin(), entry.required.end(), key) != entry.required.end() ||
        std::find(entry.optional.begin(), entry.optional.end(), key) != entry.optional.end();
    if (!known) throw ConfigError("params." + key, "not accepted by " + entry.id);
  }
  if (entry.needs_stopping) require_stopping(instance);
  if (entry.needs_stopping2) require_stopping(instance, true);
}

VerificationReport verify(std::string_view theorem_id, const Instance& instance,
                          const Params& params, const Mode& mode, const Tolerance& tol) {
  const RegistryEntry& entry = resolve_entry(theorem_id);
  validate_against_schema(entry, instance, params);
  switch (entry.owner) {
    case Owner::kDefinition:
      return verify_definition(instance, params, mode, tol);
    case Owner::kStopping:
      return verify_stopping_entry(entry.id, instance, params, mode, tol);
    case Owner::kBounds:
      return verify_bounds_entry(entry.id, instance, params, mode, tol);
    case Owner::kAsymptotics:
      return verify_asymptotics_entry(entry.id, instance, params, mode, tol);
  }
  throw ConfigError("theorem_id", "no owner for '" + entry.id + "'");
}

VerificationReport verify_definition(const Instance& instance, const Params& params,
                                     const Mode& mode, const Tolerance& tol) {
  const std::string variant = params.text_or("variant", "demimartingale");
  if (variant != "demimartingale" && variant != "demisubmartingale") {
    throw ConfigError("params.variant", "expected demimartingale or demisubmartingale");
  }
  const std::size_t n = instance.generator.horizon;
  if (n < 2) throw ConfigError("generator.horizon", "must be at least 2");
  const auto battery = instance_battery(instance, params, variant == "demisubmartingale");
  const std::size_t k = battery.size();
  const auto est = estimate(
      instance.generator, (n - 1) * k,
      [&](std::span<const double> path, std::span<double> out) {
        for (std::size_t j = 1; j < n; ++j) {
          const double step = path[j] - path[j - 1];
          const auto prefix = path.first(j);
          for (std::size_t b = 0; b < k; ++b) {
            out[(j - 1) * k + b] = step * evaluate(battery[b], prefix);
          }
        }
      },
      mode);
  CheckSet checks;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t b = 0; b < k; ++b) {
      checks.against_constant("j=" + std::to_string(j) + " f=" + battery[b].describe(),
                              Direction::kGreaterEq, (j - 1) * k + b, 0.0);
    }
  }
  VerificationReport r =
      aggregate("D1.2-definition", checks.build(est, tol), est.exact, est.count, tol);
  r.notes.push_back(variant + " battery of " + std::to_string(k) + " functions over " +
                    std::to_string(n - 1) + " steps");
  return r;
}

}  // namespace demi
