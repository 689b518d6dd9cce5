#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "demi/core.hpp"
#include "demi/harness.hpp"
#include "demi/instance.hpp"

namespace demi {

enum class Owner { kDefinition, kStopping, kBounds, kAsymptotics };

/// Parameter schema and routing of one verifiable statement.
struct RegistryEntry {
  std::string id;
  std::vector<std::string> aliases;
  Owner owner;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  bool needs_stopping = false;
  bool needs_stopping2 = false;
  std::string summary;
};

const std::vector<RegistryEntry>& registry();

/// Canonical entry for an id or alias; unknown ids raise
/// ConfigError("theorem_id", ...).
const RegistryEntry& resolve_entry(std::string_view theorem_id);

/// Rejects missing required and unknown parameters, and missing rules.
void validate_against_schema(const RegistryEntry& entry, const Instance& instance,
                             const Params& params);

/// Resolves, validates and dispatches to the owning module. The report
/// carries the canonical id.
VerificationReport verify(std::string_view theorem_id, const Instance& instance,
                          const Params& params, const Mode& mode, const Tolerance& tol);

/// D1.2-definition: E[(S_{j+1} - S_j) f(S_1..S_j)] >= 0 for every j < n
/// and every battery member f. params.variant selects the full battery
/// (demimartingale, default) or its nonnegative part (demisubmartingale).
VerificationReport verify_definition(const Instance& instance, const Params& params,
                                     const Mode& mode, const Tolerance& tol);

}  // namespace demi
