#include "demi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "demi/instance.hpp"
#include "demi/oracle.hpp"
#include "demi/rng.hpp"
#include "detail/text.hpp"

namespace demi {

double phi(double u) {
  if (std::isnan(u)) throw DomainError("phi: NaN input");
  if (std::abs(u) < 1e-2) {
    // Taylor series; expm1(u) - u cancels badly this close to 0.
    double term = u * u / 2.0;
    double sum = 0.0;
    for (int k = 3; std::abs(term) > 1e-18 * std::abs(sum) || sum == 0.0; ++k) {
      sum += term;
      term *= u / k;
      if (term == 0.0) break;
    }
    return sum;
  }
  return std::expm1(u) - u;
}

double phi_bound(double u) {
  if (!(u > 0.0 && u < 3.0)) throw DomainError("phi_bound: u must lie in (0, 3)");
  return u * u / (2.0 * (1.0 - u / 3.0));
}

double mgf_log_bound(double lambda, double c, double ex2) {
  if (!(c > 0.0)) throw DomainError("mgf_log_bound: C must be positive");
  if (!(ex2 >= 0.0)) throw DomainError("mgf_log_bound: EX^2 must be nonnegative");
  if (!(lambda > 0.0 && lambda < 3.0 / c)) {
    throw DomainError("mgf_log_bound: lambda must lie in (0, 3/C)");
  }
  return lambda * lambda * ex2 / (2.0 * (1.0 - lambda * c / 3.0));
}

double h1(double u) {
  if (!(u >= 0.0)) throw DomainError("h1: u must be nonnegative");
  return u * u / (1.0 + u + std::sqrt(1.0 + 2.0 * u));
}

double h1_lower(double u) {
  if (!(u >= 0.0)) throw DomainError("h1_lower: u must be nonnegative");
  return u * u / (2.0 * (1.0 + u));
}

double psi_sup(double t, double v, double c) {
  if (!(t > 0.0 && v > 0.0 && c > 0.0)) throw DomainError("psi_sup: inputs must be positive");
  return 9.0 * v / (c * c) * h1(c * t / (3.0 * v));
}

void BernsteinInput::validate() const {
  if (!(t > 0.0 && v_n > 0.0 && c > 0.0)) {
    throw DomainError("bernstein input: t, V_n and C must be positive");
  }
  if (n == 0) throw DomainError("bernstein input: n must be positive");
}

double bernstein_tail(const BernsteinInput& in) {
  in.validate();
  return std::exp(-in.t * in.t / (2.0 * (in.v_n + in.t * in.c / 3.0)));
}

double bernstein_tail_two_sided(const BernsteinInput& in) { return 2.0 * bernstein_tail(in); }

double doob_max_bound(double es1, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("doob_max_bound: lambda must be positive");
  return es1 / lambda;
}

double lp_max_bound(double p, double m, double es1) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("lp_max_bound: p must lie in (0, 1)");
  if (!(m > 0.0)) throw DomainError("lp_max_bound: M must be positive");
  return p * es1 / ((1.0 - p) * std::pow(m, 1.0 - p));
}

double moment_bound(double p, double v_n) {
  if (!(p > 0.0 && v_n > 0.0)) throw DomainError("moment_bound: p and V_n must be positive");
  return std::pow(2.0, p) * p * std::pow(v_n, p / 2.0) * std::tgamma(p / 2.0);
}

void WaldInput::validate() const {
  if (!(m2 >= mu1 * mu1 * (1.0 - 1e-12))) throw DomainError("wald input: m2 < mu1^2");
  if (!(e_tau > 0.0)) throw DomainError("wald input: E tau must be positive");
  if (theta < 0.0) throw DomainError("wald input: theta must be nonnegative");
  if (mu1 >= 0.0) {
    for (double v : psi) {
      if (v < -1e-12) throw DomainError("wald input: psi_i < 0 with nonnegative mean");
    }
  }
}

namespace {

void require(bool ok, const std::string& precondition, const std::string& detail) {
  if (!ok) throw PreconditionError(precondition, detail);
}

VerificationReport finish(const std::string& id, std::vector<SubCheck> checks, bool exact,
                          std::uint64_t count, const Tolerance& tol,
                          std::vector<std::string> notes) {
  VerificationReport r = aggregate(id, std::move(checks), exact, count, tol);
  r.notes = std::move(notes);
  return r;
}

VerificationReport finish(const std::string& id, const CheckSet& checks, const Estimates& est,
                          const Tolerance& tol, std::vector<std::string> notes) {
  return finish(id, checks.build(est, tol), est.exact, est.count, tol, std::move(notes));
}

double positive_param(const Params& params, const std::string& key) {
  const double v = params.number(key);
  if (!(v > 0.0)) throw ConfigError("params." + key, "must be positive");
  return v;
}

std::string num(double v) { return detail::format_number(v); }

// An exact comparison point kept as a sub-check; only the tightest point of a
// grid is reported.
struct Worst {
  SubCheck check;
  double slack = std::numeric_limits<double>::infinity();
  std::size_t points = 0;

  void offer(const std::string& label, double lhs, double rhs, Direction dir) {
    ++points;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    const double s = (dir == Direction::kLessEq ? rhs - lhs : lhs - rhs) / scale;
    if (s < slack) {
      slack = s;
      check.label = label;
      check.lhs = lhs;
      check.rhs = rhs;
      check.direction = dir;
    }
  }
};

VerificationReport verify_lemma_grid(const std::string& id, const Instance& inst,
                                     const Tolerance& tol) {
  constexpr std::size_t kGrid = 10000;
  constexpr std::size_t kTriples = 1000;
  Worst phi_worst, h1_worst, psi_worst;
  for (std::size_t k = 1; k <= kGrid; ++k) {
    const double u = 3.0 * static_cast<double>(k) / static_cast<double>(kGrid + 1);
    phi_worst.offer("phi(u) <= phi_bound(u), u=" + num(u), phi(u), phi_bound(u),
                    Direction::kLessEq);
  }
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double u = 1000.0 * static_cast<double>(k) / static_cast<double>(kGrid - 1);
    h1_worst.offer("h1(u) >= h1_lower(u), u=" + num(u), h1(u), h1_lower(u),
                   Direction::kGreaterEq);
  }
  Stream rng = derive_stream(inst.seed, 0x1E44);
  auto log_uniform = [&] { return std::pow(10.0, -3.0 + 6.0 * rng.uniform()); };
  for (std::size_t k = 0; k < kTriples; ++k) {
    const double t = log_uniform();
    const double v = log_uniform();
    const double c = log_uniform();
    psi_worst.offer("psi_sup >= t^2/(2(V+tC/3)), t=" + num(t) + " V=" + num(v) + " C=" + num(c),
                    psi_sup(t, v, c), t * t / (2.0 * (v + t * c / 3.0)), Direction::kGreaterEq);
  }
  std::vector<std::string> notes{
      "phi grid: " + std::to_string(phi_worst.points) + " points of (0,3)",
      "h1 grid: " + std::to_string(h1_worst.points) + " points of [0,1000]",
      "psi_sup: " + std::to_string(psi_worst.points) + " log-uniform triples in [1e-3,1e3]^3"};
  return finish(id, {phi_worst.check, h1_worst.check, psi_worst.check}, true,
                phi_worst.points + h1_worst.points + psi_worst.points, tol, std::move(notes));
}

VerificationReport verify_mgf(const std::string& id, const Instance& inst, const Params& params,
                              const Tolerance& tol) {
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const double bound = model.increment_bound();
  require(std::isfinite(bound), "bounded increments", inst.generator.id());
  const double c = params.number_or("C", bound);
  require(c >= bound * (1.0 - 1e-12) && c > 0.0, "bounded increments",
          "increments reach " + num(bound) + " > C = " + num(c));
  constexpr std::size_t kLambdas = 200;
  std::vector<SubCheck> checks;
  std::size_t points = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double mean = model.increment_mean(i);
    require(std::abs(mean) <= 1e-12 * std::max(1.0, c), "mean-zero increments",
            "E X_" + std::to_string(i) + " = " + num(mean));
    Worst worst;
    const double ex2 = model.increment_second_moment(i);
    for (std::size_t k = 1; k <= kLambdas; ++k) {
      const double lambda = 3.0 / c * static_cast<double>(k) / static_cast<double>(kLambdas + 1);
      worst.offer("log E exp(lambda X_" + std::to_string(i) + ") <= bound, lambda=" + num(lambda),
                  model.log_mgf(i, lambda), mgf_log_bound(lambda, c, ex2), Direction::kLessEq);
    }
    points += worst.points;
    checks.push_back(worst.check);
  }
  return finish(id, std::move(checks), true, points, tol,
                {"lambda grid: " + std::to_string(kLambdas) + " points of (0, 3/C), C = " + num(c)});
}

VerificationReport verify_doob(const std::string& id, const Instance& inst, const Params& params,
                               const Mode& mode, const Tolerance& tol) {
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const double lambda = positive_param(params, "lambda");
  const std::size_t j = params.integer_or("j", n);
  if (j < 1 || j > n) throw ConfigError("params.j", "must lie in 1..horizon");
  require(model.is_demimartingale() && model.path_lower_bound() >= 0.0,
          "outside verified preconditions",
          "the maximal inequality is verified for nonnegative demimartingales only; " +
              inst.generator.id() + " is not one");
  const double bound = doob_max_bound(model.increment_mean(1), lambda);
  std::vector<std::string> notes{"bound E S_1 / lambda = " + num(bound)};
  if (bound >= 1.0) notes.push_back("bound >= 1 is vacuous");
  const auto est = estimate(
      inst.generator, 1,
      [&](std::span<const double> path, std::span<double> out) {
        out[0] = *std::max_element(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(j)) >= lambda;
      },
      mode);
  CheckSet checks;
  checks.tail("P(max_{i<=" + std::to_string(j) + "} S_i >= lambda) <= E S_1 / lambda", 0, bound);
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_lp_max(const std::string& id, const Instance& inst,
                                 const Params& params, const Mode& mode, const Tolerance& tol) {
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const double p = params.number("p");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("params.p", "must lie in (0, 1)");
  const double m = positive_param(params, "M");
  const std::size_t j = params.integer_or("j", n);
  if (j < 1 || j > n) throw ConfigError("params.j", "must lie in 1..horizon");
  require(model.is_demimartingale(), "demimartingale", inst.generator.id());
  require(model.path_lower_bound() >= m, "S_n >= M > 0 a.s.",
          inst.generator.id() + " reaches " + num(model.path_lower_bound()) + " < M = " + num(m));
  const double bound = lp_max_bound(p, m, model.increment_mean(1));
  const auto est = estimate(
      inst.generator, 1,
      [&](std::span<const double> path, std::span<double> out) {
        out[0] = std::pow(
            *std::max_element(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(j)), p);
      },
      mode);
  CheckSet checks;
  checks.against_constant("E (max_{i<=" + std::to_string(j) + "} S_i)^p <= p E S_1/((1-p) M^(1-p))",
                          Direction::kLessEq, 0, bound);
  std::vector<std::string> notes{"bound = " + num(bound)};
  if (std::pow(m, p) > bound) {
    notes.push_back("bound is below M^p, the smallest possible value of the left side");
  }
  return finish(id, checks, est, tol, std::move(notes));
}

// Tails of S_n against the concentration bound; exact mode convolves the
// terminal law, so horizons far beyond the enumeration cap stay exact.
VerificationReport verify_bernstein(const std::string& id, const Instance& inst,
                                    const Params& params, const Mode& mode, const Tolerance& tol,
                                    bool associated_variant) {
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const double t = positive_param(params, "t");
  const std::string sided = params.text_or("sided", "both");
  if (sided != "one" && sided != "two" && sided != "both") {
    throw ConfigError("params.sided", "expected one, two or both");
  }
  if (associated_variant) {
    require(model.associated() && model.mean_zero(), "mean-zero associated increments",
            inst.generator.id());
  } else {
    require(model.is_demimartingale() && model.mean_zero(), "mean-zero demimartingale",
            inst.generator.id());
  }
  const double c_model = model.increment_bound();
  require(std::isfinite(c_model) && c_model > 0.0, "bounded increments", inst.generator.id());
  const double c = params.number_or("C", c_model);
  require(c >= c_model * (1.0 - 1e-12), "bounded increments",
          "increments reach " + num(c_model) + " > C = " + num(c));
  const BernsteinInput in{t, model.v_n(n), c, n};
  const double one = bernstein_tail(in);
  std::vector<std::string> notes{"V_n = " + num(in.v_n) + " (exact), C = " + num(c)};

  Estimates est;
  if (is_exact(mode)) {
    const auto law = terminal_law(inst.generator);
    est.exact = true;
    est.count = law.size();
    est.mean = {tail_probability(law, t, false), tail_probability(law, t, true)};
    est.std_error = {0.0, 0.0};
    notes.push_back("exact terminal law with " + std::to_string(law.size()) + " atoms");
  } else {
    est = estimate(
        inst.generator, 2,
        [&](std::span<const double> path, std::span<double> out) {
          const double s = path.back();
          out[0] = s >= t;
          out[1] = std::abs(s) >= t;
        },
        mode);
  }
  CheckSet checks;
  if (sided != "two") checks.tail("P(S_n >= t) <= exp(-t^2/(2(V_n+tC/3)))", 0, one);
  if (sided != "one") checks.tail("P(|S_n| >= t) <= 2 exp(-t^2/(2(V_n+tC/3)))", 1, 2.0 * one);
  return finish(id, checks, est, tol, std::move(notes));
}

Direction direction_for(const StoppingRule& rule) {
  switch (rule.declared_direction()) {
    case Monotonicity::kNondecreasing:
      return Direction::kLessEq;
    case Monotonicity::kNonincreasing:
      return Direction::kGreaterEq;
    case Monotonicity::kNone:
      break;
  }
  throw PreconditionError("stopping indicator monotonicity",
                          rule.describe() + " declares no direction");
}

VerificationReport verify_exp_stopped(const std::string& id, const Instance& inst,
                                      const Params& params, const Mode& mode,
                                      const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const double theta = positive_param(params, "theta");
  const double h = params.number_or("h", 0.0);
  const Direction cmp = direction_for(rule);
  require(model.is_demisubmartingale(), "demisubmartingale", inst.generator.id());
  std::vector<std::string> notes;
  notes.push_back(require_monotone_indicator(inst, rule, rule.declared_direction(),
                                             IndicatorTarget::kStoppedBy, n));
  notes.push_back(require_finite_tau(inst, rule));
  notes.push_back("H(k) = " + num(h) + " k");

  const auto est = estimate(
      inst.generator, 1,
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = stop_or(rule, path, n);
        out[0] = std::exp(theta * path[tau - 1] - h * static_cast<double>(tau));
      },
      mode);
  CheckSet checks;
  checks.against_constant("E exp(theta S_tau - H(tau)) " + to_string(cmp) + " 1", cmp, 0, 1.0);

  // Independent check that M_n = exp(theta S_n - H(n)) is a demisubmartingale.
  if (n >= 2) {
    const auto battery = instance_battery(inst, params, true);
    const std::size_t steps = std::min<std::size_t>(n - 1, 16);
    Columns cols;
    std::vector<std::size_t> col(steps * battery.size());
    for (auto& c : col) c = cols.add();
    const auto battery_est = estimate(
        inst.generator, cols.width(),
        [&](std::span<const double> path, std::span<double> out) {
          std::vector<double> m(steps + 1);
          for (std::size_t k = 0; k <= steps; ++k) {
            m[k] = std::exp(theta * path[k] - h * static_cast<double>(k + 1));
          }
          for (std::size_t j = 0; j < steps; ++j) {
            for (std::size_t b = 0; b < battery.size(); ++b) {
              out[col[j * battery.size() + b]] =
                  (m[j + 1] - m[j]) * evaluate(battery[b], std::span<const double>(m).first(j + 1));
            }
          }
        },
        mode);
    CheckSet battery_checks;
    for (std::size_t j = 0; j < steps; ++j) {
      for (std::size_t b = 0; b < battery.size(); ++b) {
        battery_checks.against_constant(
            "j=" + std::to_string(j + 1) + " f=" + battery[b].describe(), Direction::kGreaterEq,
            col[j * battery.size() + b], 0.0);
      }
    }
    const auto r = aggregate("M_n", battery_checks.build(battery_est, tol), battery_est.exact,
                             battery_est.count, tol);
    std::string note = "M_n demisubmartingale battery (" + std::to_string(r.checks.size()) +
                       " checks): " + to_string(r.verdict) + ", min z=" + num(r.z_margin);
    for (const auto& c : r.checks) {
      if (c.verdict != Verdict::kPass) {
        note += "; first non-PASS: " + c.label;
        break;
      }
    }
    notes.push_back(std::move(note));
  }
  return finish(id, checks, est, tol, std::move(notes));
}

std::string require_bounded_tau(const Instance& inst, const StoppingRule& rule) {
  const auto b = rule.bound();
  require(b && *b <= inst.generator.horizon, "bounded stopping time",
          rule.describe() + " has no bound within the horizon");
  return "tau bounded by " + std::to_string(*b);
}

VerificationReport verify_wald_first(const std::string& id, const Instance& inst,
                                     const Mode& mode, const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const Direction cmp = direction_for(rule);
  require(model.associated() && model.identically_distributed(),
          "identically distributed associated increments", inst.generator.id());
  std::vector<std::string> notes;
  notes.push_back(require_monotone_indicator(inst, rule, rule.declared_direction(),
                                             IndicatorTarget::kStoppedBy, n));
  const auto b = rule.bound();
  if (cmp == Direction::kGreaterEq && !(b && *b <= n)) {
    // Finite expected stopping time with bounded increments.
    require(std::isfinite(model.increment_bound()), "bounded increments", inst.generator.id());
    notes.push_back(require_finite_tau(inst, rule));
  } else {
    notes.push_back(require_bounded_tau(inst, rule));
  }
  const double mu = model.increment_mean(1);
  const auto est = estimate(
      inst.generator, 3,
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = stop_or(rule, path, n);
        out[0] = path[tau - 1];
        out[1] = mu * static_cast<double>(tau);
        out[2] = out[0] - out[1];
      },
      mode);
  CheckSet checks;
  checks.against_paired("E S_tau " + to_string(cmp) + " E X_1 E tau", cmp, 0, 1, 2);
  notes.push_back("E X_1 = " + num(mu));
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_wald_second(const std::string& id, const Instance& inst,
                                      const Mode& mode, const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const Direction cmp = direction_for(rule);
  require(model.associated() && model.identically_distributed(),
          "identically distributed associated increments", inst.generator.id());
  for (std::size_t i = 1; i <= n; ++i) {
    require(model.increment_lower(i) >= 0.0, "nonnegative increments",
            "X_" + std::to_string(i) + " can be negative");
  }
  std::vector<std::string> notes;
  notes.push_back(require_monotone_indicator(inst, rule, rule.declared_direction(),
                                             IndicatorTarget::kStoppedBy, n));
  notes.push_back(require_bounded_tau(inst, rule));
  const double m2 = model.increment_second_moment(1);
  const auto est = estimate(
      inst.generator, 3,
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = stop_or(rule, path, n);
        const double s = path[tau - 1];
        out[0] = s * s;
        out[1] = m2 * static_cast<double>(tau);
        out[2] = out[0] - out[1];
      },
      mode);
  CheckSet checks;
  checks.against_paired("E S_tau^2 " + to_string(cmp) + " E X_1^2 E tau", cmp, 0, 1, 2);
  notes.push_back("E X_1^2 = " + num(m2));
  return finish(id, checks, est, tol, std::move(notes));
}

VerificationReport verify_wald_exp(const std::string& id, const Instance& inst,
                                   const Params& params, const Mode& mode, const Tolerance& tol) {
  const auto& rule = require_stopping(inst);
  const ProcessModel model(inst.generator);
  const std::size_t n = inst.generator.horizon;
  const double theta = positive_param(params, "theta");
  const Direction cmp = direction_for(rule);
  require(model.associated(), "associated increments", inst.generator.id());
  for (std::size_t i = 1; i <= n; ++i) {
    require(model.increment_mean(i) >= -1e-12, "E X_i >= 0",
            "E X_" + std::to_string(i) + " = " + num(model.increment_mean(i)));
  }
  std::vector<std::string> notes;
  notes.push_back(require_monotone_indicator(inst, rule, rule.declared_direction(),
                                             IndicatorTarget::kStoppedBy, n));
  notes.push_back(require_bounded_tau(inst, rule));
  std::vector<double> cumulative_psi(n);
  double acc = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    acc += model.log_mgf(i, theta);
    require(std::isfinite(acc), "finite psi_i(theta)", "psi_" + std::to_string(i) + " is infinite");
    cumulative_psi[i - 1] = acc;
  }
  const auto est = estimate(
      inst.generator, 1,
      [&](std::span<const double> path, std::span<double> out) {
        const std::size_t tau = stop_or(rule, path, n);
        out[0] = std::exp(theta * path[tau - 1] - cumulative_psi[tau - 1]);
      },
      mode);
  CheckSet checks;
  checks.against_constant("E exp(theta S_tau - sum_{i<=tau} psi_i(theta)) " + to_string(cmp) + " 1",
                          cmp, 0, 1.0);
  return finish(id, checks, est, tol, std::move(notes));
}

}  // namespace

VerificationReport verify_bounds_entry(const std::string& theorem_id, const Instance& instance,
                                       const Params& params, const Mode& mode,
                                       const Tolerance& tol) {
  const std::string key = theorem_id.substr(0, theorem_id.find('-'));
  if (key == "T4.1") return verify_doob(theorem_id, instance, params, mode, tol);
  if (key == "C4.3") return verify_lp_max(theorem_id, instance, params, mode, tol);
  if (key == "L4.4/L4.6") return verify_lemma_grid(theorem_id, instance, tol);
  if (key == "L4.5") return verify_mgf(theorem_id, instance, params, tol);
  if (key == "T4.7") return verify_bernstein(theorem_id, instance, params, mode, tol, false);
  if (key == "T5.6") return verify_bernstein(theorem_id, instance, params, mode, tol, true);
  if (key == "C4.10") return verify_exp_stopped(theorem_id, instance, params, mode, tol);
  if (key == "C5.2/C5.3") return verify_wald_first(theorem_id, instance, mode, tol);
  if (key == "C5.4") return verify_wald_second(theorem_id, instance, mode, tol);
  if (key == "C5.5") return verify_wald_exp(theorem_id, instance, params, mode, tol);
  throw ConfigError("theorem_id", "'" + theorem_id + "' is not a bounds entry");
}

}  // namespace demi
