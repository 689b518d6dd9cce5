#include "demi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace demi {

namespace {

void check_cap(const DiscreteChainSpec& chain, std::uint64_t limit, const char* what) {
  chain.validate();
  const std::uint64_t required = chain.outcome_count();
  if (required > limit) {
    throw DomainError(std::string(what) + ": chain needs " + std::to_string(required) +
                      " outcomes, limit is " + std::to_string(limit));
  }
}

struct Walker {
  const DiscreteChainSpec& chain;
  const OutcomeVisitor& visit;
  std::vector<double> path;
  double shared = 0.0;

  // Fills step k (0-based) and recurses. The running sum is recomputed from
  // path[k-1], so no state needs to be unwound.
  void step(std::size_t k, double prob) {
    if (k == chain.horizon) {
      visit(path, prob);
      return;
    }
    const double prev = k == 0 ? chain.start : path[k - 1];
    if (chain.sign_flip_pairs && k % 2 == 1) {
      const double prev_increment = k == 1 ? path[0] - chain.start : path[k - 1] - path[k - 2];
      path[k] = prev - prev_increment;
      step(k + 1, prob);
      return;
    }
    for (const Atom& a : chain.increment_support) {
      path[k] = prev + (a.value + shared - chain.drift);
      step(k + 1, prob * a.prob);
    }
  }
};

}  // namespace

std::size_t branch_count(const DiscreteChainSpec& chain) {
  const std::size_t shared = chain.shared_component ? chain.shared_component->size() : 1;
  return shared * chain.increment_support.size();
}

void fold_branch(const DiscreteChainSpec& chain, std::size_t branch, const OutcomeVisitor& visit) {
  const std::size_t width = chain.increment_support.size();
  const std::size_t shared_index = branch / width;
  const Atom& first = chain.increment_support[branch % width];
  Walker w{chain, visit, std::vector<double>(chain.horizon), 0.0};
  double prob = first.prob;
  if (chain.shared_component) {
    const Atom& s = (*chain.shared_component)[shared_index];
    w.shared = s.value;
    prob *= s.prob;
  }
  w.path[0] = chain.start + first.value + w.shared - chain.drift;
  w.step(1, prob);
}

void fold_outcomes(const DiscreteChainSpec& chain, const OutcomeVisitor& visit) {
  check_cap(chain, DiscreteChainSpec::kEnumerationCap, "enumeration cap exceeded");
  for (std::size_t b = 0; b < branch_count(chain); ++b) fold_branch(chain, b, visit);
}

OutcomeTable enumerate(const DiscreteChainSpec& chain) {
  check_cap(chain, DiscreteChainSpec::kEnumerationCap, "enumeration cap exceeded");
  check_cap(chain, kMaterializeLimit, "too many outcomes to materialize");
  OutcomeTable table;
  table.outcomes.reserve(chain.outcome_count());
  CompensatedSum total;
  fold_outcomes(chain, [&](std::span<const double> path, double p) {
    table.outcomes.push_back({ProcessPath({path.begin(), path.end()}), p});
    total.add(p);
  });
  table.total_probability = total.value();
  return table;
}

double exact_expectation(const OutcomeTable& table,
                         const std::function<double(const ProcessPath&)>& functional) {
  CompensatedSum acc;
  for (const auto& o : table.outcomes) acc.add(o.probability * functional(o.path));
  return acc.value();
}

double exact_demi_check(const OutcomeTable& table, std::size_t j, const MonotoneTestFunction& f) {
  if (table.outcomes.empty()) throw DomainError("empty outcome table");
  const std::size_t n = table.outcomes.front().path.horizon();
  if (j < 1 || j >= n) throw DomainError("demi check index must satisfy 1 <= j < horizon");
  return exact_expectation(table, [&](const ProcessPath& p) {
    return p.increment(j + 1) * evaluate(f, p.values().first(j));
  });
}

namespace {

// Sorts atoms and merges values that agree to within rounding, so repeated
// convolution of non-dyadic supports does not multiply near-duplicate keys.
std::vector<Atom> normalize(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() &&
        std::abs(a.value - out.back().value) <= 1e-12 * std::max(1.0, std::abs(a.value))) {
      out.back().prob += a.prob;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

std::vector<Atom> convolve(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::vector<Atom> out;
  out.reserve(a.size() * b.size());
  for (const Atom& x : a) {
    for (const Atom& y : b) out.push_back({x.value + y.value, x.prob * y.prob});
  }
  return normalize(std::move(out));
}

}  // namespace

std::vector<Atom> terminal_law(const DiscreteChainSpec& chain) {
  chain.validate();
  std::vector<Atom> shared = chain.shared_component ? *chain.shared_component
                                                    : std::vector<Atom>{{0.0, 1.0}};
  std::vector<Atom> mixture;
  for (const Atom& w : shared) {
    std::vector<Atom> step;
    for (const Atom& a : chain.increment_support) step.push_back({a.value + w.value - chain.drift, a.prob});
    step = normalize(std::move(step));
    // Sign-flip pairs cancel, leaving only an unpaired last step.
    const std::size_t terms =
        chain.sign_flip_pairs ? chain.horizon % 2 : chain.horizon;
    std::vector<Atom> law{{chain.start, 1.0}};
    // Square-and-multiply keeps the number of convolutions logarithmic.
    std::vector<Atom> power = step;
    for (std::size_t e = terms; e > 0; e >>= 1) {
      if (e & 1) law = convolve(law, power);
      if (e > 1) power = convolve(power, power);
    }
    for (const Atom& x : law) mixture.push_back({x.value, x.prob * w.prob});
  }
  return normalize(std::move(mixture));
}

std::vector<Atom> terminal_law(const GeneratorSpec& spec) {
  DiscreteChainSpec chain;
  try {
    chain = to_chain(spec);
  } catch (const DomainError& e) {
    throw PreconditionError("exact mode needs an enumerable generator", e.what());
  }
  return terminal_law(chain);
}

double tail_probability(std::span<const Atom> law, double t, bool two_sided) {
  CompensatedSum acc;
  for (const Atom& a : law) {
    if (a.value >= t || (two_sided && -a.value >= t)) acc.add(a.prob);
  }
  return acc.value();
}

}  // namespace demi
