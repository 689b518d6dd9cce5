#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "demi/core.hpp"
#include "demi/generators.hpp"

namespace demi {

struct MonteCarlo {
  std::size_t paths = 0;
  std::uint64_t seed = 0;
};
struct Exact {};
using Mode = std::variant<MonteCarlo, Exact>;

inline bool is_exact(const Mode& mode) { return std::holds_alternative<Exact>(mode); }

/// Theorem parameters (lambda, t, theta, p, r, epsilon, m, ...) as text,
/// converted on access. Missing required keys raise ConfigError naming
/// "params.<key>".
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::size_t integer(const std::string& key) const;
  std::size_t integer_or(const std::string& key, std::size_t fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Fills `out` with the per-path values of every tracked quantity.
using RowFn = std::function<void(std::span<const double> path, std::span<double> out)>;

struct Estimates {
  std::vector<double> mean;
  std::vector<double> std_error;
  /// Paths (Monte Carlo) or enumerated outcomes (exact).
  std::uint64_t count = 0;
  bool exact = false;
};

/// E[row(path)] for every column: chunked sampling in Monte-Carlo mode,
/// compensated enumeration in exact mode. Exact mode raises
/// PreconditionError when the generator cannot be enumerated.
Estimates estimate(const GeneratorSpec& spec, std::size_t width, const RowFn& row,
                   const Mode& mode);

/// Collects the inequalities of one verification and scores them against
/// the estimates.
class CheckSet {
 public:
  /// E[lhs] dir constant.
  void against_constant(std::string label, Direction dir, std::size_t lhs_col, double rhs);
  /// E[lhs] dir E[rhs] where diff_col holds lhs - rhs path by path.
  void against_paired(std::string label, Direction dir, std::size_t lhs_col,
                      std::size_t rhs_col, std::size_t diff_col);
  /// P(event) <= bound for an indicator column. Monte-Carlo checks whose
  /// expected hit count paths * bound is below the tolerance are
  /// INCONCLUSIVE.
  void tail(std::string label, std::size_t lhs_col, double bound);

  bool empty() const { return entries_.empty(); }
  std::vector<SubCheck> build(const Estimates& est, const Tolerance& tol) const;

 private:
  struct Entry {
    std::string label;
    Direction dir;
    std::size_t lhs;
    std::size_t rhs_col;
    std::size_t diff;
    double rhs_value;
    enum class Kind { kConstant, kPaired, kTail } kind;
  };
  std::vector<Entry> entries_;
};

/// Column allocator for RowFn layouts.
class Columns {
 public:
  std::size_t add() { return width_++; }
  std::size_t width() const { return width_; }

 private:
  std::size_t width_ = 0;
};

}  // namespace demi
