#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "demi/core.hpp"
#include "demi/harness.hpp"

namespace demi {

enum class Monotonicity { kNondecreasing, kNonincreasing, kNone };

/// Which indicator a monotonicity statement is about: I{tau <= j} or
/// I{tau = j}.
enum class IndicatorTarget { kStoppedBy, kStoppedAt };

std::string to_string(Monotonicity m);
Monotonicity parse_monotonicity(const std::string& s);

/// A path functional tau with values in {1..n} or NOT_STOPPED. Rules only
/// read the prefix S_1..S_k when deciding whether to stop at k.
class StoppingRule {
 public:
  enum class Kind {
    kFirstPassageUp,    // min{k : S_k >= lambda}
    kFirstPassageDown,  // min{k : S_k <= lambda}
    kDeterministic,     // tau = m
    kSingleLook,        // tau = k if S_k >= lambda, else never
    kCapped,            // min(inner, cap)
    kUser,              // first k with predicate(S_1..S_k)
  };
  using Predicate = std::function<bool(std::span<const double>)>;

  static StoppingRule first_passage_up(double lambda);
  static StoppingRule first_passage_down(double lambda);
  static StoppingRule deterministic(std::size_t m);
  static StoppingRule single_look(std::size_t k, double lambda);
  static StoppingRule capped(const StoppingRule& inner, std::size_t cap);
  static StoppingRule user(Predicate predicate, Monotonicity declared, std::string name);

  /// Same rule with a different declared indicator direction.
  StoppingRule with_direction(Monotonicity declared) const;

  Kind kind() const { return kind_; }
  Monotonicity declared_direction() const { return declared_; }
  double lambda() const { return lambda_; }
  std::size_t index() const { return index_; }
  const StoppingRule* inner() const { return inner_.get(); }

  /// True when the indicator is provably monotone in `dir` for all indices
  /// j <= max_index.
  bool analytic_certificate(Monotonicity dir,
                            IndicatorTarget target = IndicatorTarget::kStoppedBy,
                            std::size_t max_index = std::numeric_limits<std::size_t>::max()) const;
  /// Convenience: certificate for the declared direction on I{tau <= j}.
  bool analytic_certificate() const { return analytic_certificate(declared_); }

  /// 1-based stopping index, or nullopt when the path never stops.
  std::optional<std::size_t> stop_time(std::span<const double> path) const;

  /// Almost-sure bound on tau, when the rule guarantees one.
  std::optional<std::size_t> bound() const;

  std::string describe() const;

 private:
  StoppingRule() = default;
  bool stops_at(std::span<const double> path, std::size_t k) const;

  Kind kind_ = Kind::kDeterministic;
  Monotonicity declared_ = Monotonicity::kNondecreasing;
  double lambda_ = 0.0;
  std::size_t index_ = 1;
  std::shared_ptr<const StoppingRule> inner_;
  Predicate predicate_;
  std::string name_;
};

/// Parses "first_passage_up(1)", "first_passage_down(-1)", "deterministic(3)",
/// "single_look(2,0.5)" and "capped(<rule>,5)". The declared direction is
/// the one carried by the analytic certificate (capped inherits it).
StoppingRule parse_stopping_rule(std::string_view text);

struct StoppedView {
  std::optional<std::size_t> tau;
  std::optional<double> s_tau;
  /// S_{tau ^ 1} .. S_{tau ^ n}.
  std::vector<double> stopped_sequence;
};

StoppedView apply_stop(const ProcessPath& path, const StoppingRule& rule);

struct Instance;

/// Registry entries owned by the stopping module: T1.4-order,
/// T2.1-stopped-pair, C2.2-stop-vs-fixed, T2.3-two-stops, T3.1-OST-upper,
/// T3.2-OST-nonneg, T3.3-OST-lower, L5.1-ui-proxy.
VerificationReport verify_stopping_entry(const std::string& theorem_id,
                                         const Instance& instance, const Params& params,
                                         const Mode& mode, const Tolerance& tol);

}  // namespace demi
