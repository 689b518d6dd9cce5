#include "demi/stopping.hpp"

#include <algorithm>
#include <cmath>

#include "demi/instance.hpp"
#include "detail/text.hpp"

namespace demi {

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::kNondecreasing:
      return "nondecreasing";
    case Monotonicity::kNonincreasing:
      return "nonincreasing";
    case Monotonicity::kNone:
      return "none";
  }
  return "?";
}

Monotonicity parse_monotonicity(const std::string& s) {
  const std::string t = detail::trim(s);
  if (t == "nondecreasing") return Monotonicity::kNondecreasing;
  if (t == "nonincreasing") return Monotonicity::kNonincreasing;
  if (t == "none") return Monotonicity::kNone;
  throw DomainError("unknown monotonicity '" + t + "'");
}

StoppingRule StoppingRule::first_passage_up(double lambda) {
  StoppingRule r;
  r.kind_ = Kind::kFirstPassageUp;
  r.lambda_ = lambda;
  r.declared_ = Monotonicity::kNondecreasing;
  return r;
}

StoppingRule StoppingRule::first_passage_down(double lambda) {
  StoppingRule r;
  r.kind_ = Kind::kFirstPassageDown;
  r.lambda_ = lambda;
  r.declared_ = Monotonicity::kNonincreasing;
  return r;
}

StoppingRule StoppingRule::deterministic(std::size_t m) {
  if (m == 0) throw DomainError("deterministic stopping index must be positive");
  StoppingRule r;
  r.kind_ = Kind::kDeterministic;
  r.index_ = m;
  return r;
}

StoppingRule StoppingRule::single_look(std::size_t k, double lambda) {
  if (k == 0) throw DomainError("single_look index must be positive");
  StoppingRule r;
  r.kind_ = Kind::kSingleLook;
  r.index_ = k;
  r.lambda_ = lambda;
  return r;
}

StoppingRule StoppingRule::capped(const StoppingRule& inner, std::size_t cap) {
  if (cap == 0) throw DomainError("cap must be positive");
  StoppingRule r;
  r.kind_ = Kind::kCapped;
  r.index_ = cap;
  r.declared_ = inner.declared_;
  r.inner_ = std::make_shared<const StoppingRule>(inner);
  return r;
}

StoppingRule StoppingRule::user(Predicate predicate, Monotonicity declared, std::string name) {
  if (!predicate) throw DomainError("user stopping rule needs a predicate");
  StoppingRule r;
  r.kind_ = Kind::kUser;
  r.predicate_ = std::move(predicate);
  r.declared_ = declared;
  r.name_ = std::move(name);
  return r;
}

StoppingRule StoppingRule::with_direction(Monotonicity declared) const {
  StoppingRule r = *this;
  r.declared_ = declared;
  return r;
}

namespace {

Monotonicity opposite(Monotonicity m) {
  switch (m) {
    case Monotonicity::kNondecreasing:
      return Monotonicity::kNonincreasing;
    case Monotonicity::kNonincreasing:
      return Monotonicity::kNondecreasing;
    case Monotonicity::kNone:
      return Monotonicity::kNone;
  }
  return Monotonicity::kNone;
}

}  // namespace

bool StoppingRule::analytic_certificate(Monotonicity dir, IndicatorTarget target,
                                        std::size_t max_index) const {
  if (dir == Monotonicity::kNone) return false;
  const bool by = target == IndicatorTarget::kStoppedBy;
  switch (kind_) {
    case Kind::kDeterministic:
      return true;
    case Kind::kFirstPassageUp:
      // I{tau <= j} = max_{i<=j} 1{S_i >= lambda}. I{tau = j} for j >= 2 also
      // needs S_1 < lambda, so it is monotone only when j = 1.
      return dir == Monotonicity::kNondecreasing && (by || max_index <= 1);
    case Kind::kFirstPassageDown:
      return dir == Monotonicity::kNonincreasing && (by || max_index <= 1);
    case Kind::kSingleLook:
      // Both indicators are 1{j >= k} * 1{S_k >= lambda} or 1{j = k} * 1{S_k >= lambda}.
      return dir == Monotonicity::kNondecreasing;
    case Kind::kCapped: {
      // I{tau <= j} is 1 from the cap on. I{tau = cap} = 1 - I{inner <= cap - 1}
      // flips direction, so it needs the opposite certificate on the inner rule.
      const std::size_t below = std::min(max_index, index_ - 1);
      if (below > 0 && !inner_->analytic_certificate(dir, target, below)) return false;
      if (by || max_index < index_ || index_ == 1) return true;
      return inner_->analytic_certificate(opposite(dir), IndicatorTarget::kStoppedBy,
                                          index_ - 1);
    }
    case Kind::kUser:
      return false;
  }
  return false;
}

bool StoppingRule::stops_at(std::span<const double> path, std::size_t k) const {
  const double s = path[k - 1];
  switch (kind_) {
    case Kind::kFirstPassageUp:
      return s >= lambda_;
    case Kind::kFirstPassageDown:
      return s <= lambda_;
    case Kind::kDeterministic:
      return k == index_;
    case Kind::kSingleLook:
      return k == index_ && s >= lambda_;
    case Kind::kCapped:
      return k == index_ || inner_->stops_at(path, k);
    case Kind::kUser:
      return predicate_(path.first(k));
  }
  return false;
}

std::optional<std::size_t> StoppingRule::stop_time(std::span<const double> path) const {
  switch (kind_) {
    case Kind::kDeterministic:
    case Kind::kSingleLook:
      if (path.size() < index_ || !stops_at(path, index_)) return std::nullopt;
      return index_;
    case Kind::kCapped: {
      const auto inner = inner_->stop_time(path.first(std::min(path.size(), index_)));
      if (inner) return inner;
      if (index_ <= path.size()) return index_;
      return std::nullopt;
    }
    default:
      break;
  }
  for (std::size_t k = 1; k <= path.size(); ++k) {
    if (stops_at(path, k)) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> StoppingRule::bound() const {
  switch (kind_) {
    case Kind::kDeterministic:
      return index_;
    case Kind::kCapped: {
      const auto inner = inner_->bound();
      return inner ? std::min(*inner, index_) : index_;
    }
    default:
      return std::nullopt;
  }
}

std::string StoppingRule::describe() const {
  using detail::format_number;
  switch (kind_) {
    case Kind::kFirstPassageUp:
      return "first_passage_up(" + format_number(lambda_) + ")";
    case Kind::kFirstPassageDown:
      return "first_passage_down(" + format_number(lambda_) + ")";
    case Kind::kDeterministic:
      return "deterministic(" + std::to_string(index_) + ")";
    case Kind::kSingleLook:
      return "single_look(" + std::to_string(index_) + "," + format_number(lambda_) + ")";
    case Kind::kCapped:
      return "capped(" + inner_->describe() + "," + std::to_string(index_) + ")";
    case Kind::kUser:
      return "user(" + name_ + ")";
  }
  return "?";
}

namespace {

std::vector<std::string> top_level_args(std::string_view body) {
  std::vector<std::string> args;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (body[i] == ',' && depth == 0) {
      args.push_back(detail::trim(body.substr(start, i - start)));
      start = i + 1;
    }
  }
  args.push_back(detail::trim(body.substr(start)));
  return args;
}

std::size_t parse_index(const std::string& s) {
  const double v = detail::parse_double(s, "stopping index");
  if (!(v >= 1.0) || v != std::floor(v)) throw DomainError("stopping index must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

StoppingRule parse_stopping_rule(std::string_view text) {
  const std::string t = detail::trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw DomainError("stopping rule must look like name(args): '" + t + "'");
  }
  const std::string name = detail::trim(std::string_view(t).substr(0, open));
  const auto args = top_level_args(std::string_view(t).substr(open + 1, t.size() - open - 2));
  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw DomainError(name + " takes " + std::to_string(count) + " argument(s)");
    }
  };
  if (name == "first_passage_up") {
    expect(1);
    return StoppingRule::first_passage_up(detail::parse_double(args[0], "lambda"));
  }
  if (name == "first_passage_down") {
    expect(1);
    return StoppingRule::first_passage_down(detail::parse_double(args[0], "lambda"));
  }
  if (name == "deterministic") {
    expect(1);
    return StoppingRule::deterministic(parse_index(args[0]));
  }
  if (name == "single_look") {
    expect(2);
    return StoppingRule::single_look(parse_index(args[0]), detail::parse_double(args[1], "lambda"));
  }
  if (name == "capped") {
    expect(2);
    return StoppingRule::capped(parse_stopping_rule(args[0]), parse_index(args[1]));
  }
  throw DomainError("unknown stopping rule '" + name + "'");
}

StoppedView apply_stop(const ProcessPath& path, const StoppingRule& rule) {
  StoppedView view;
  view.tau = rule.stop_time(path.values());
  const std::size_t n = path.horizon();
  if (view.tau) view.s_tau = path.at(*view.tau);
  view.stopped_sequence.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    view.stopped_sequence.push_back(path.at(view.tau ? std::min(*view.tau, j) : j));
  }
  return view;
}

namespace {

void require(bool ok, const std::string& precondition, const std::string& detail) {
  if (!ok) throw PreconditionError(precondition, detail);
}

VerificationReport finish(const std::string& id, const CheckSet& checks, const Estimates& est,
                          const Tolerance& tol, std::vector<std::string> notes) {
  VerificationReport r = aggregate(id, checks.build(est, tol), est.exact, est.count, tol);
  r.notes = std::move(notes);
  return r;
}

std::size_t tau_or_never(const StoppingRule& rule, std::span<const double> path) {
  return stop_or(rule, path, path.size() + 1);
}

// S_{min(tau, j)}, with tau = never meaning S_j.
double stopped_at(std::span<const double> path, std::size_t tau, std::size_t j) {
  return path[std::min(tau, j) - 1];
}

VerificationReport verify_order(const std::string& id, const Instance& inst, const Mode& mode,
                                const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const Monotonicity dir = rule.declared_direction();
  std::vector<std::string> notes;
  if (dir == Monotonicity::kNonincreasing) {
    require(model.is_demisubmartingale(), "demisubmartingale", inst.generator.id());
  } else if (dir == Monotonicity::kNondecreasing) {
    require(model.is_demimartingale(), "demimartingale", inst.generator.id());
  } else {
    throw PreconditionError("stopping indicator monotonicity",
                            rule.describe() + " declares no direction");
  }
  notes.push_back(require_monotone_indicator(inst, rule, dir, IndicatorTarget::kStoppedBy, n));
  const Direction cmp =
      dir == Monotonicity::kNonincreasing ? Direction::kGreaterEq : Direction::kLessEq;

  Columns cols;
  std::vector<std::size_t> stopped(n), step(n), base(n);
  for (std::size_t k = 0; k < n; ++k) stopped[k] = cols.add();
  for (std::size_t k = 0; k < n; ++k) step[k] = cols.add();
  for (std::size_t k = 0; k < n; ++k) base[k] = cols.add();
  const auto est = estimate(
      inst.generator, cols.width(),
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = tau_or_never(rule, path);
        for (std::size_t k = 0; k < n; ++k) {
          out[stopped[k]] = stopped_at(path, tau, k + 1);
          out[step[k]] = k == 0 ? 0.0 : out[stopped[k]] - out[stopped[k - 1]];
          out[base[k]] = out[stopped[k]] - out[stopped[0]];
        }
      },
      mode);

  CheckSet checks;
  const std::string op = to_string(cmp);
  for (std::size_t k = 0; k < n; ++k) {
    const std::string sk = "E S_{tau^" + std::to_string(k + 1) + "}";
    if (k > 0) {
      checks.against_paired(sk + " " + op + " E S_{tau^" + std::to_string(k) + "}", cmp,
                            stopped[k], stopped[k - 1], step[k]);
    }
    checks.against_paired(sk + " " + op + " E S_1", cmp, stopped[k], stopped[0], base[k]);
  }
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_stopped_pair(const std::string& id, const Instance& inst,
                                       const Params& params, const Mode& mode,
                                       const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const std::size_t big_m = params.integer_or("M", n);
  if (big_m < 1 || big_m > n) throw ConfigError("params.M", "must lie in 1..horizon");
  require(model.is_demisubmartingale(), "demisubmartingale", inst.generator.id());
  std::vector<std::string> notes;
  notes.push_back(require_finite_tau(inst, rule, big_m));
  if (big_m >= 2) {
    notes.push_back(require_monotone_indicator(inst, rule, Monotonicity::kNondecreasing,
                                               IndicatorTarget::kStoppedAt, big_m - 1));
  }
  const auto battery = instance_battery(inst, params, true);

  Columns cols;
  const std::size_t s_tau = cols.add();
  const std::size_t s_m = cols.add();
  const std::size_t diff = cols.add();
  std::vector<std::size_t> weighted;
  for (std::size_t b = 0; b < battery.size(); ++b) weighted.push_back(cols.add());
  const auto est = estimate(
      inst.generator, cols.width(),
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = stop_or(rule, path.first(big_m), big_m);
        const double st = path[tau - 1];
        out[s_tau] = st;
        out[s_m] = path[big_m - 1];
        out[diff] = out[s_m] - st;
        for (std::size_t b = 0; b < battery.size(); ++b) {
          out[weighted[b]] = out[diff] * evaluate(battery[b], std::span<const double>(&st, 1));
        }
      },
      mode);

  CheckSet checks;
  checks.against_paired("E S_tau <= E S_M", Direction::kLessEq, s_tau, s_m, diff);
  for (std::size_t b = 0; b < battery.size(); ++b) {
    checks.against_constant("E[(S_M - S_tau) f(S_tau)] >= 0, f=" + battery[b].describe(),
                            Direction::kGreaterEq, weighted[b], 0.0);
  }
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_stop_vs_fixed(const std::string& id, const Instance& inst,
                                        const Mode& mode, const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  require(model.is_demisubmartingale(), "demisubmartingale", inst.generator.id());
  std::vector<std::string> notes;
  if (n >= 2) {
    notes.push_back(require_monotone_indicator(inst, rule, Monotonicity::kNondecreasing,
                                               IndicatorTarget::kStoppedAt, n - 1));
  }
  Columns cols;
  std::vector<std::size_t> stopped(n), fixed(n), diff(n);
  for (std::size_t j = 0; j < n; ++j) {
    stopped[j] = cols.add();
    fixed[j] = cols.add();
    diff[j] = cols.add();
  }
  const auto est = estimate(
      inst.generator, cols.width(),
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = tau_or_never(rule, path);
        for (std::size_t j = 0; j < n; ++j) {
          out[stopped[j]] = stopped_at(path, tau, j + 1);
          out[fixed[j]] = path[j];
          out[diff[j]] = out[stopped[j]] - path[j];
        }
      },
      mode);
  CheckSet checks;
  for (std::size_t j = 0; j < n; ++j) {
    const std::string js = std::to_string(j + 1);
    checks.against_paired("E S_{tau^" + js + "} <= E S_" + js, Direction::kLessEq, stopped[j],
                          fixed[j], diff[j]);
  }
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_two_stops(const std::string& id, const Instance& inst,
                                    const Params& params, const Mode& mode,
                                    const Tolerance& tol) {
  const auto& first = require_stopping(inst);
  const auto& second = require_stopping(inst, true);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  require(model.is_demisubmartingale(), "demisubmartingale", inst.generator.id());
  require(std::isfinite(model.increment_bound()), "bounded increments", inst.generator.id());
  std::vector<std::string> notes;
  notes.push_back("tau2: " + require_finite_tau(inst, second));
  notes.push_back("tau1: " + require_monotone_indicator(inst, first, Monotonicity::kNondecreasing,
                                                        IndicatorTarget::kStoppedAt, n));
  const auto battery = instance_battery(inst, params, true);

  Columns cols;
  const std::size_t misordered = cols.add();
  std::vector<std::size_t> weighted;
  for (std::size_t b = 0; b < battery.size(); ++b) weighted.push_back(cols.add());
  const auto est = estimate(
      inst.generator, cols.width(),
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t t2 = stop_or(second, path, n);
        const std::size_t t1 = std::min(tau_or_never(first, path), n);
        out[misordered] = t1 > t2 ? 1.0 : 0.0;
        const double s1 = path[t1 - 1];
        const double gap = path[t2 - 1] - s1;
        for (std::size_t b = 0; b < battery.size(); ++b) {
          out[weighted[b]] = gap * evaluate(battery[b], std::span<const double>(&s1, 1));
        }
      },
      mode);
  require(est.mean[misordered] == 0.0, "tau1 <= tau2 a.s.",
          first.describe() + " exceeds " + second.describe() + " on some paths");

  CheckSet checks;
  for (std::size_t b = 0; b < battery.size(); ++b) {
    checks.against_constant(
        "E[(S_tau2 - S_tau1) g(S_tau1)] >= 0, g=" + battery[b].describe(),
        Direction::kGreaterEq, weighted[b], 0.0);
  }
  return finish(id, checks, est, tol, std::move(notes));
}

struct OstSetup {
  Direction cmp;
  Monotonicity dir;
  bool nonnegative_variant;
};

VerificationReport verify_ost(const std::string& id, const Instance& inst, const Params& params,
                              const Mode& mode, const Tolerance& tol, const OstSetup& setup) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  if (setup.dir == Monotonicity::kNondecreasing) {
    require(model.is_demimartingale(), "demimartingale", inst.generator.id());
  } else {
    require(model.is_demisubmartingale(), "demisubmartingale", inst.generator.id());
  }
  std::vector<std::string> notes;
  if (setup.nonnegative_variant) {
    require(model.path_lower_bound() >= 0.0, "nonnegative demimartingale",
            inst.generator.id() + " can go below 0");
  }
  notes.push_back(
      require_monotone_indicator(inst, rule, setup.dir, IndicatorTarget::kStoppedBy, n));
  notes.push_back(require_finite_tau(inst, rule));

  double increment_cap = 0.0;
  bool moment_check = false;
  if (!setup.nonnegative_variant) {
    const auto bounded = rule.bound();
    const std::string condition =
        params.text_or("condition", bounded && *bounded <= n ? "A1" : "A3");
    const double c = model.increment_bound();
    if (condition == "A1") {
      require(bounded && *bounded <= n, "condition A1", rule.describe() + " is not bounded");
      notes.push_back("condition A1: tau bounded");
    } else if (condition == "A2") {
      require(std::isfinite(c), "condition A2", "unbounded increments");
      notes.push_back("condition A2: |S_k| <= n*C = " +
                      detail::format_number(static_cast<double>(n) * c) + " on this horizon");
    } else if (condition == "A3" || condition == "A4") {
      increment_cap = params.number_or("M", c);
      require(std::isfinite(increment_cap), "condition " + condition,
              "increments must be bounded");
      double worst = 0.0;
      for (std::size_t k = 2; k <= n; ++k) {
        worst = std::max({worst, std::abs(model.increment_lower(k)),
                          std::abs(model.increment_upper(k))});
      }
      require(worst <= increment_cap * (1.0 + 1e-12), "condition " + condition,
              "increments reach " + detail::format_number(worst) + " > M = " +
                  detail::format_number(increment_cap));
      moment_check = true;
      notes.push_back(condition == "A4"
                          ? "condition A4 replaced by its sufficient condition: bounded "
                            "increments (M = " +
                                detail::format_number(increment_cap) + ") and finite E tau"
                          : "condition A3: M = " + detail::format_number(increment_cap));
    } else {
      throw ConfigError("params.condition", "expected A1, A2, A3 or A4");
    }
  }

  Columns cols;
  const std::size_t s_tau = cols.add();
  const std::size_t s_1 = cols.add();
  const std::size_t diff = cols.add();
  const std::size_t abs_gap = cols.add();
  const std::size_t cap_tau = cols.add();
  const std::size_t gap_diff = cols.add();
  const auto est = estimate(
      inst.generator, cols.width(),
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = stop_or(rule, path, n);
        out[s_tau] = path[tau - 1];
        out[s_1] = path[0];
        out[diff] = out[s_tau] - out[s_1];
        out[abs_gap] = std::abs(out[diff]);
        out[cap_tau] = increment_cap * static_cast<double>(tau - 1);
        out[gap_diff] = out[abs_gap] - out[cap_tau];
      },
      mode);

  CheckSet checks;
  checks.against_paired(std::string("E S_tau ") + to_string(setup.cmp) + " E S_1", setup.cmp,
                        s_tau, s_1, diff);
  if (moment_check) {
    checks.against_paired("E|S_tau - S_1| <= M (E tau - 1)", Direction::kLessEq, abs_gap,
                          cap_tau, gap_diff);
  }
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_ui_proxy(const std::string& id, const Instance& inst,
                                   const Params& params, const Mode& mode,
                                   const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  require(model.is_demimartingale(), "demimartingale", inst.generator.id());
  const double c = model.increment_bound();
  const double m = params.number_or("M", c);
  require(std::isfinite(m) && c <= m * (1.0 + 1e-12), "bounded increments",
          "increments reach " + detail::format_number(c) + ", M = " + detail::format_number(m));
  std::vector<std::string> notes;
  bool finite_tau = true;
  try {
    notes.push_back(require_finite_tau(inst, rule));
  } catch (const PreconditionError& e) {
    finite_tau = false;
    notes.push_back(std::string("E tau unavailable (") + e.what() +
                    "); only E|S_{tau^k}| <= M E(tau^k) is checked");
  }

  Columns cols;
  std::vector<std::size_t> abs_s(n), cap(n), diff(n), tail_diff(n);
  for (std::size_t k = 0; k < n; ++k) {
    abs_s[k] = cols.add();
    cap[k] = cols.add();
    diff[k] = cols.add();
    tail_diff[k] = cols.add();
  }
  const std::size_t cap_tau = cols.add();
  const auto est = estimate(
      inst.generator, cols.width(),
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = tau_or_never(rule, path);
        out[cap_tau] = m * static_cast<double>(std::min(tau, n));
        for (std::size_t k = 0; k < n; ++k) {
          out[abs_s[k]] = std::abs(stopped_at(path, tau, k + 1));
          out[cap[k]] = m * static_cast<double>(std::min(tau, k + 1));
          out[diff[k]] = out[abs_s[k]] - out[cap[k]];
          out[tail_diff[k]] = out[cap[k]] - out[cap_tau];
        }
      },
      mode);

  CheckSet checks;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string ks = std::to_string(k + 1);
    checks.against_paired("E|S_{tau^" + ks + "}| <= M E(tau^" + ks + ")", Direction::kLessEq,
                          abs_s[k], cap[k], diff[k]);
    if (finite_tau) {
      checks.against_paired("M E(tau^" + ks + ") <= M E tau", Direction::kLessEq, cap[k],
                            cap_tau, tail_diff[k]);
    }
  }
  return finish(id, checks, est, tol, std::move(notes));
}

}  // namespace

VerificationReport verify_stopping_entry(const std::string& theorem_id, const Instance& instance,
                                         const Params& params, const Mode& mode,
                                         const Tolerance& tol) {
  const std::string key = theorem_id.substr(0, theorem_id.find('-'));
  if (key == "T1.4") return verify_order(theorem_id, instance, mode, tol);
  if (key == "T2.1") return verify_stopped_pair(theorem_id, instance, params, mode, tol);
  if (key == "C2.2") return verify_stop_vs_fixed(theorem_id, instance, mode, tol);
  if (key == "T2.3") return verify_two_stops(theorem_id, instance, params, mode, tol);
  if (key == "T3.1") {
    return verify_ost(theorem_id, instance, params, mode, tol,
                      {Direction::kLessEq, Monotonicity::kNondecreasing, false});
  }
  if (key == "T3.2") {
    return verify_ost(theorem_id, instance, params, mode, tol,
                      {Direction::kLessEq, Monotonicity::kNondecreasing, true});
  }
  if (key == "T3.3") {
    return verify_ost(theorem_id, instance, params, mode, tol,
                      {Direction::kGreaterEq, Monotonicity::kNonincreasing, false});
  }
  if (key == "L5.1") return verify_ui_proxy(theorem_id, instance, params, mode, tol);
  throw ConfigError("theorem_id", "'" + theorem_id + "' is not a stopping entry");
}

}  // namespace demi
