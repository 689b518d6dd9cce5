#include "demi/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "demi/bounds.hpp"
#include "demi/instance.hpp"
#include "demi/oracle.hpp"
#include "demi/rng.hpp"
#include "detail/text.hpp"

namespace demi {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

void require_increasing(std::span<const std::size_t> grid) {
  if (grid.empty()) throw DomainError("n_grid is empty");
  if (grid.front() == 0) throw DomainError("n_grid entries must be positive");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) throw DomainError("n_grid must be strictly increasing");
  }
}

double require_bounded(const ProcessModel& model) {
  const double c = model.increment_bound();
  if (!std::isfinite(c)) {
    throw DomainError("unbounded increments: " + model.spec().id() + " has no a.s. bound C");
  }
  return c;
}

std::uint64_t horizon_seed(std::uint64_t seed, std::size_t n) {
  std::uint64_t state = seed ^ (static_cast<std::uint64_t>(n) * 0xD1B54A32D192ED03ULL);
  return splitmix64(state);
}

CompleteConvergenceDiagnostics diagnose(const GeneratorSpec& spec, double r, double epsilon,
                                        std::span<const std::size_t> n_grid,
                                        std::size_t paths, std::uint64_t seed,
                                        bool allow_exact, bool require_exact) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  require_increasing(n_grid);

  CompleteConvergenceDiagnostics d;
  d.r = r;
  d.epsilon = epsilon;
  double partial = 0.0;
  for (const std::size_t n : n_grid) {
    const GeneratorSpec spec_n = spec.with_horizon(n);
    const ProcessModel model(spec_n);
    d.c = std::max(d.c, require_bounded(model));
    TailRow row;
    row.n = n;
    const double nr = std::pow(static_cast<double>(n), r);
    row.threshold = nr * epsilon;
    const double v_n = model.v_n(n);
    row.vn_over_nr = v_n / nr;
    row.envelope = v_n > 0.0 ? bernstein_tail_two_sided({row.threshold, v_n, model.increment_bound(), n})
                             : 0.0;

    bool done = false;
    if (allow_exact) {
      try {
        const auto law = terminal_law(spec_n);
        row.tail = tail_probability(law, row.threshold, true);
        row.exact = true;
        done = true;
      } catch (const PreconditionError&) {
        if (require_exact) throw;
      }
    }
    if (!done) {
      if (paths < 2) throw DomainError("paths must be at least 2");
      const double t = row.threshold;
      const auto est = estimate(
          spec_n, 1,
          [t](std::span<const double> path, std::span<double> out) {
            out[0] = std::abs(path.back()) >= t;
          },
          MonteCarlo{paths, horizon_seed(seed, n)});
      row.tail = est.mean[0];
      row.std_error = est.std_error[0];
    }
    partial += row.tail;
    row.partial_sum = partial;
    d.rows.push_back(row);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& row : d.rows) {
    if (row.tail <= 0.0) continue;
    const double x = std::pow(static_cast<double>(row.n), r);
    const double y = std::log(row.tail);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  d.geometric_fit = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                           : std::numeric_limits<double>::quiet_NaN();

  d.hypothesis_trend = d.rows.size() >= 2;
  d.summable_decay = true;
  for (std::size_t k = 1; k < d.rows.size(); ++k) {
    const auto& prev = d.rows[k - 1];
    const auto& cur = d.rows[k];
    if (!(cur.vn_over_nr < prev.vn_over_nr)) d.hypothesis_trend = false;
    const double doublings = std::log2(static_cast<double>(cur.n) / static_cast<double>(prev.n));
    if (cur.tail > 0.0 && cur.tail * std::pow(10.0, doublings) > prev.tail) {
      d.summable_decay = false;
    }
  }
  return d;
}

}  // namespace

double ks_distance_normal(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empty sample");
  std::vector<double> z(samples.begin(), samples.end());
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t sample_size) {
  if (sample_size == 0) throw DomainError("empty sample");
  return 1.628 / std::sqrt(static_cast<double>(sample_size));
}

double ecf_distance_normal(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empty sample");
  double worst = 0.0;
  for (const double t : kCfGrid) {
    CompensatedSum re, im;
    for (const double z : samples) {
      re.add(std::cos(t * z));
      im.add(std::sin(t * z));
    }
    const double n = static_cast<double>(samples.size());
    const std::complex<double> ecf(re.value() / n, im.value() / n);
    worst = std::max(worst, std::abs(ecf - std::exp(-t * t / 2.0)));
  }
  return worst;
}

std::vector<double> normal_samples(std::uint64_t seed, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t begin = 0, chunk = 0; begin < count; begin += kChunkPaths, ++chunk) {
    Stream rng = derive_stream(seed, chunk);
    const std::size_t end = std::min(count, begin + kChunkPaths);
    for (std::size_t i = begin; i < end; ++i) out[i] = rng.normal();
  }
  return out;
}

CltReport clt_diagnose(const GeneratorSpec& spec, std::span<const std::size_t> n_grid,
                       std::size_t paths, std::uint64_t seed) {
  require_increasing(n_grid);
  if (paths < 2) throw DomainError("paths must be at least 2");
  const GeneratorSpec full = spec.with_horizon(n_grid.back());
  const ProcessModel model(full);
  require_bounded(model);
  const ProcessEnsemble ensemble = generate(full, paths, seed);

  CltReport report;
  std::vector<double> z(paths);
  for (const std::size_t n : n_grid) {
    CltDiagnostics row;
    row.n = n;
    row.sigma_n = std::sqrt(model.second_moment_of_sum(n));
    if (!(row.sigma_n > 0.0)) throw DomainError("sigma_n = 0 at n = " + std::to_string(n));
    row.v_n = model.v_n(n);
    row.ratio_cubed = std::pow(std::sqrt(row.v_n) / row.sigma_n, 3.0);
    for (std::size_t i = 0; i < paths; ++i) z[i] = ensemble.path(i)[n - 1] / row.sigma_n;
    row.ks_distance = ks_distance_normal(z);
    row.ks_critical = ks_critical_value(paths);
    row.ecf_distance = ecf_distance_normal(z);
    report.rows.push_back(row);
  }
  report.ratio_decreasing = report.rows.size() >= 2;
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    if (!(report.rows[k].ratio_cubed < report.rows[k - 1].ratio_cubed)) {
      report.ratio_decreasing = false;
    }
  }
  return report;
}

CompleteConvergenceDiagnostics complete_convergence_diagnose(const GeneratorSpec& spec, double r,
                                                             double epsilon,
                                                             std::span<const std::size_t> n_grid,
                                                             std::size_t paths,
                                                             std::uint64_t seed) {
  return diagnose(spec, r, epsilon, n_grid, paths, seed, true, false);
}

VerificationReport verify_asymptotics_entry(const std::string& theorem_id,
                                            const Instance& instance, const Params& params,
                                            const Mode& mode, const Tolerance& tol) {
  const std::string key = theorem_id.substr(0, theorem_id.find('-'));
  const ProcessModel model(instance.generator);
  if (key == "T4.9") {
    if (!(model.is_demimartingale() && model.mean_zero())) {
      throw PreconditionError("mean-zero demimartingale", instance.generator.id());
    }
  } else if (key == "C5.7") {
    if (!(model.associated() && model.mean_zero())) {
      throw PreconditionError("mean-zero associated increments", instance.generator.id());
    }
  } else {
    throw ConfigError("theorem_id", "'" + theorem_id + "' is not an asymptotics entry");
  }
  if (!std::isfinite(model.increment_bound())) {
    throw PreconditionError("bounded increments", instance.generator.id());
  }
  const double r = params.number("r");
  if (!(r > 0.0)) throw ConfigError("params.r", "must be positive");
  const double epsilon = params.number("epsilon");
  if (!(epsilon > 0.0)) throw ConfigError("params.epsilon", "must be positive");
  std::vector<std::size_t> grid;
  if (params.has("n_grid")) {
    for (const double v : params.numbers("n_grid")) {
      if (!(v >= 1.0) || v != std::floor(v)) {
        throw ConfigError("params.n_grid", "entries must be positive integers");
      }
      grid.push_back(static_cast<std::size_t>(v));
    }
  } else {
    grid.push_back(instance.generator.horizon);
  }
  try {
    require_increasing(grid);
  } catch (const DomainError& e) {
    throw ConfigError("params.n_grid", e.what());
  }

  const bool exact = is_exact(mode);
  const auto* mc = std::get_if<MonteCarlo>(&mode);
  CompleteConvergenceDiagnostics d;
  try {
    d = diagnose(instance.generator, r, epsilon, grid, mc ? mc->paths : 0,
                 mc ? mc->seed : instance.seed, exact, exact);
  } catch (const PreconditionError& e) {
    throw PreconditionError("exact mode needs an enumerable generator", e.what());
  }

  std::vector<SubCheck> checks;
  std::uint64_t count = mc ? mc->paths : 0;
  for (const auto& row : d.rows) {
    SubCheck c;
    c.label = "P(|S_" + std::to_string(row.n) + "| >= n^r eps) <= 2 exp(-t^2/(2(V_n+tC/3)))";
    c.lhs = row.tail;
    c.lhs_stderr = row.std_error;
    c.margin_stderr = row.std_error;
    c.rhs = row.envelope;
    c.direction = Direction::kLessEq;
    c.underpowered = !exact && static_cast<double>(count) * row.envelope < tol.min_expected_hits;
    checks.push_back(c);
  }
  VerificationReport report = aggregate(theorem_id, std::move(checks), exact, count, tol);
  using detail::format_number;
  report.notes.push_back("partial sum of tails = " + format_number(d.rows.back().partial_sum));
  report.notes.push_back(std::string("V_n/n^r decreasing along the grid: ") +
                         (d.hypothesis_trend ? "yes" : "no, condition not satisfied"));
  report.notes.push_back(std::string("tails shrink >= 10x per doubling: ") +
                         (d.summable_decay ? "yes" : "no"));
  report.notes.push_back("geometric fit of log tail vs n^r: " + format_number(d.geometric_fit));
  return report;
}

}  // namespace demi
