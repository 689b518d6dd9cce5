#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "demi/core.hpp"
#include "demi/generators.hpp"
#include "demi/monotone.hpp"

namespace demi {

struct Outcome {
  ProcessPath path;
  double probability;
};

struct OutcomeTable {
  std::vector<Outcome> outcomes;
  double total_probability = 0.0;
};

/// Tables above this size are never materialized; use fold_outcomes.
inline constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 20;

/// Every increment/shared-component combination exactly once, with its
/// product probability. Throws DomainError with the required outcome count
/// when the chain exceeds the enumeration cap or the materialization limit.
OutcomeTable enumerate(const DiscreteChainSpec& chain);

using OutcomeVisitor = std::function<void(std::span<const double> path, double probability)>;

/// Number of independent enumeration subtrees (shared atom x first increment).
std::size_t branch_count(const DiscreteChainSpec& chain);

/// Depth-first walk of one subtree. Branches partition the outcome space.
void fold_branch(const DiscreteChainSpec& chain, std::size_t branch, const OutcomeVisitor& visit);

/// Streaming walk over all outcomes; allowed up to the enumeration cap.
void fold_outcomes(const DiscreteChainSpec& chain, const OutcomeVisitor& visit);

double exact_expectation(const OutcomeTable& table,
                         const std::function<double(const ProcessPath&)>& functional);

/// E[(S_{j+1} - S_j) f(S_1..S_j)], 1 <= j < horizon.
double exact_demi_check(const OutcomeTable& table, std::size_t j,
                        const MonotoneTestFunction& f);

/// Exact law of S_n by convolution; handles horizons far beyond the
/// enumeration cap. Atoms are sorted by value.
std::vector<Atom> terminal_law(const DiscreteChainSpec& chain);

/// terminal_law(to_chain(spec)); raises PreconditionError when the generator
/// has no finite-support chain.
std::vector<Atom> terminal_law(const GeneratorSpec& spec);

/// P(S_n >= t), or P(|S_n| >= t) when two_sided, from a terminal law.
double tail_probability(std::span<const Atom> law, double t, bool two_sided);

}  // namespace demi
