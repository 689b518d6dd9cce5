#include "demi/harness.hpp"

#include <cmath>

#include "demi/oracle.hpp"
#include "demi/parallel.hpp"
#include "detail/text.hpp"

namespace demi {

double Params::number(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("params." + key, "required");
  try {
    return detail::parse_double(it->second, "params." + key);
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError("params." + key, "'" + it->second + "' is not a number");
  }
}

double Params::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t Params::integer(const std::string& key) const {
  const double v = number(key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) {
    throw ConfigError("params." + key, "expected a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::size_t Params::integer_or(const std::string& key, std::size_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Params::text_or(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::vector<double> Params::numbers(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("params." + key, "required");
  std::vector<double> out;
  for (const auto& part : detail::split(it->second, ',')) {
    try {
      out.push_back(detail::parse_double(part, "params." + key));
    } catch (const DomainError&) {
      throw ConfigError("params." + key, "'" + part + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError("params." + key, "empty list");
  return out;
}

namespace {

Estimates estimate_monte_carlo(const GeneratorSpec& spec, std::size_t width, const RowFn& row,
                               const MonteCarlo& mc) {
  if (mc.paths == 0) throw DomainError("paths must be positive");
  const ProcessModel model(spec);
  const std::size_t n = spec.horizon;
  const std::uint64_t chunks = (mc.paths + kChunkPaths - 1) / kChunkPaths;
  std::vector<RunningStats> acc(width);
  ordered_chunk_reduce(
      chunks, acc,
      [&](std::uint64_t c) {
        Stream rng = derive_stream(mc.seed, c);
        std::vector<double> scratch(model.innovation_count());
        std::vector<double> path(n);
        std::vector<double> out(width);
        std::vector<RunningStats> local(width);
        const std::size_t begin = c * kChunkPaths;
        const std::size_t end = std::min<std::size_t>(mc.paths, begin + kChunkPaths);
        for (std::size_t p = begin; p < end; ++p) {
          model.sample_path(rng, scratch, path);
          row(path, out);
          for (std::size_t k = 0; k < width; ++k) local[k].push(out[k]);
        }
        return local;
      },
      [](std::vector<RunningStats>& total, const std::vector<RunningStats>& part) {
        for (std::size_t k = 0; k < total.size(); ++k) total[k].merge(part[k]);
      });

  Estimates est;
  est.count = mc.paths;
  for (const auto& s : acc) {
    const SummaryStats sum = s.summary();
    est.mean.push_back(sum.mean);
    est.std_error.push_back(sum.std_error);
  }
  return est;
}

Estimates estimate_exact(const GeneratorSpec& spec, std::size_t width, const RowFn& row) {
  DiscreteChainSpec chain;
  try {
    chain = to_chain(spec);
    chain.validate();
  } catch (const DomainError& e) {
    throw PreconditionError("exact mode needs an enumerable generator", e.what());
  }
  const std::uint64_t required = chain.outcome_count();
  if (required > DiscreteChainSpec::kEnumerationCap) {
    throw PreconditionError("exact mode needs an enumerable generator",
                            "chain needs " + std::to_string(required) +
                                " outcomes, enumeration cap is " +
                                std::to_string(DiscreteChainSpec::kEnumerationCap));
  }

  std::vector<CompensatedSum> acc(width);
  ordered_chunk_reduce(
      branch_count(chain), acc,
      [&](std::uint64_t b) {
        std::vector<CompensatedSum> local(width);
        std::vector<double> out(width);
        fold_branch(chain, b, [&](std::span<const double> path, double p) {
          row(path, out);
          for (std::size_t k = 0; k < width; ++k) local[k].add(p * out[k]);
        });
        return local;
      },
      [](std::vector<CompensatedSum>& total, const std::vector<CompensatedSum>& part) {
        for (std::size_t k = 0; k < total.size(); ++k) total[k].add(part[k].value());
      });

  Estimates est;
  est.exact = true;
  est.count = required;
  for (const auto& s : acc) est.mean.push_back(s.value());
  est.std_error.assign(width, 0.0);
  return est;
}

}  // namespace

Estimates estimate(const GeneratorSpec& spec, std::size_t width, const RowFn& row,
                   const Mode& mode) {
  if (width == 0) throw DomainError("estimate needs at least one column");
  if (const auto* mc = std::get_if<MonteCarlo>(&mode)) {
    return estimate_monte_carlo(spec, width, row, *mc);
  }
  return estimate_exact(spec, width, row);
}

void CheckSet::against_constant(std::string label, Direction dir, std::size_t lhs_col,
                                double rhs) {
  entries_.push_back({std::move(label), dir, lhs_col, 0, lhs_col, rhs, Entry::Kind::kConstant});
}

void CheckSet::against_paired(std::string label, Direction dir, std::size_t lhs_col,
                              std::size_t rhs_col, std::size_t diff_col) {
  entries_.push_back({std::move(label), dir, lhs_col, rhs_col, diff_col, 0.0, Entry::Kind::kPaired});
}

void CheckSet::tail(std::string label, std::size_t lhs_col, double bound) {
  entries_.push_back(
      {std::move(label), Direction::kLessEq, lhs_col, 0, lhs_col, bound, Entry::Kind::kTail});
}

std::vector<SubCheck> CheckSet::build(const Estimates& est, const Tolerance& tol) const {
  std::vector<SubCheck> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    SubCheck c;
    c.label = e.label;
    c.direction = e.dir;
    c.lhs = est.mean.at(e.lhs);
    c.lhs_stderr = est.std_error.at(e.lhs);
    c.rhs = e.kind == Entry::Kind::kPaired ? est.mean.at(e.rhs_col) : e.rhs_value;
    c.margin_stderr = est.std_error.at(e.diff);
    if (e.kind == Entry::Kind::kTail && !est.exact) {
      c.underpowered = static_cast<double>(est.count) * e.rhs_value < tol.min_expected_hits;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace demi
