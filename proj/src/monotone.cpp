#include "demi/monotone.hpp"

#include <algorithm>
#include <cmath>

#include "demi/rng.hpp"
#include "detail/text.hpp"

namespace demi {

MonotoneTestFunction MonotoneTestFunction::constant_one() { return {}; }

MonotoneTestFunction MonotoneTestFunction::last_coordinate() {
  MonotoneTestFunction f;
  f.kind = Kind::kLastCoordinate;
  return f;
}

MonotoneTestFunction MonotoneTestFunction::linear(std::vector<double> weights) {
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("linear_nonneg weights must be nonnegative");
  }
  MonotoneTestFunction f;
  f.kind = Kind::kLinearNonneg;
  f.weights = std::move(weights);
  return f;
}

MonotoneTestFunction MonotoneTestFunction::clipped(std::vector<double> weights,
                                                   std::vector<double> shifts, double floor,
                                                   double ceiling) {
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("clipped_linear weights must be nonnegative");
  }
  if (!(floor <= ceiling)) throw DomainError("clip floor must not exceed ceiling");
  MonotoneTestFunction f;
  f.kind = Kind::kClippedLinear;
  f.weights = std::move(weights);
  f.shifts = std::move(shifts);
  f.floor = floor;
  f.ceiling = ceiling;
  return f;
}

MonotoneTestFunction MonotoneTestFunction::max_threshold(double threshold) {
  MonotoneTestFunction f;
  f.kind = Kind::kCoordinateMaxThreshold;
  f.shifts = {threshold};
  return f;
}

bool MonotoneTestFunction::nonnegative() const {
  switch (kind) {
    case Kind::kClippedLinear:
      return floor >= 0.0;
    case Kind::kCoordinateMaxThreshold:
    case Kind::kConstantOne:
      return true;
    case Kind::kLinearNonneg:
    case Kind::kLastCoordinate:
      return false;
  }
  return false;
}

std::string to_string(MonotoneTestFunction::Kind kind) {
  using K = MonotoneTestFunction::Kind;
  switch (kind) {
    case K::kLinearNonneg:
      return "linear_nonneg";
    case K::kClippedLinear:
      return "clipped_linear";
    case K::kCoordinateMaxThreshold:
      return "coordinate_max_threshold";
    case K::kLastCoordinate:
      return "last_coordinate";
    case K::kConstantOne:
      return "constant_one";
  }
  return "?";
}

std::string MonotoneTestFunction::describe() const {
  std::string s = to_string(kind);
  switch (kind) {
    case Kind::kCoordinateMaxThreshold:
      s += "(c=" + detail::format_number(shifts.empty() ? 0.0 : shifts[0]) + ")";
      break;
    case Kind::kClippedLinear:
      s += "[" + detail::format_number(floor) + "," + detail::format_number(ceiling) + "]";
      break;
    default:
      break;
  }
  return s;
}

namespace {

double weight(const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; }

}  // namespace

double evaluate(const MonotoneTestFunction& f, std::span<const double> prefix) {
  using K = MonotoneTestFunction::Kind;
  if (prefix.empty()) throw DomainError("test function needs a nonempty prefix");
  for (double s : prefix) {
    if (std::isnan(s)) throw DomainError("test function input is NaN");
  }
  switch (f.kind) {
    case K::kConstantOne:
      return 1.0;
    case K::kLastCoordinate:
      return prefix.back();
    case K::kLinearNonneg: {
      double acc = 0.0;
      const std::size_t m = std::min(prefix.size(), f.weights.size());
      for (std::size_t i = 0; i < m; ++i) acc += f.weights[i] * prefix[i];
      return acc;
    }
    case K::kClippedLinear: {
      double acc = 0.0;
      const std::size_t m = std::min(prefix.size(), f.weights.size());
      for (std::size_t i = 0; i < m; ++i) acc += f.weights[i] * (prefix[i] - weight(f.shifts, i));
      return std::clamp(acc, f.floor, f.ceiling);
    }
    case K::kCoordinateMaxThreshold: {
      const double peak = *std::max_element(prefix.begin(), prefix.end());
      return peak >= weight(f.shifts, 0) ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

std::vector<MonotoneTestFunction> sample_battery(std::uint64_t seed, std::size_t count,
                                                 bool require_nonnegative) {
  if (count == 0) throw DomainError("battery size must be positive");
  using K = MonotoneTestFunction::Kind;
  std::vector<MonotoneTestFunction> battery;
  battery.push_back(MonotoneTestFunction::constant_one());
  if (!require_nonnegative && battery.size() < count) {
    battery.push_back(MonotoneTestFunction::last_coordinate());
  }

  Stream rng = derive_stream(seed, 0xBA77E2);
  auto uniform = [&](double a, double b) { return a + (b - a) * rng.uniform(); };
  auto random_weights = [&] {
    std::vector<double> w(kBatteryDimension, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      // Dense near the start, sparse further out, so short prefixes still
      // see nontrivial functions.
      const double keep = i < 8 ? 0.7 : 0.3;
      if (rng.uniform() < keep) w[i] = uniform(0.05, 1.0);
    }
    w[static_cast<std::size_t>(rng.uniform() * 4.0)] += uniform(0.1, 1.0);
    return w;
  };
  auto random_shifts = [&] {
    std::vector<double> c(kBatteryDimension);
    for (auto& x : c) x = uniform(-2.0, 2.0);
    return c;
  };

  const std::vector<K> kinds =
      require_nonnegative
          ? std::vector<K>{K::kClippedLinear, K::kCoordinateMaxThreshold}
          : std::vector<K>{K::kLinearNonneg, K::kClippedLinear, K::kCoordinateMaxThreshold};
  for (std::size_t i = 0; battery.size() < count; ++i) {
    switch (kinds[i % kinds.size()]) {
      case K::kLinearNonneg:
        battery.push_back(MonotoneTestFunction::linear(random_weights()));
        break;
      case K::kClippedLinear: {
        const double lo = require_nonnegative ? uniform(0.0, 1.0) : uniform(-2.0, 0.5);
        battery.push_back(MonotoneTestFunction::clipped(random_weights(), random_shifts(), lo,
                                                        lo + uniform(0.5, 3.0)));
        break;
      }
      case K::kCoordinateMaxThreshold:
        battery.push_back(MonotoneTestFunction::max_threshold(uniform(-2.0, 3.0)));
        break;
      default:
        break;
    }
  }
  return battery;
}

std::string to_string(Certificate::Kind kind) {
  switch (kind) {
    case Certificate::Kind::kCertifiedByConstruction:
      return "CERTIFIED_BY_CONSTRUCTION";
    case Certificate::Kind::kSampledOk:
      return "SAMPLED_OK";
    case Certificate::Kind::kCounterexample:
      return "COUNTEREXAMPLE";
  }
  return "?";
}

namespace {

int indicator(const StoppingRule& rule, std::span<const double> path, std::size_t j,
              IndicatorTarget target) {
  const auto tau = rule.stop_time(path.first(j));
  if (!tau) return 0;
  return target == IndicatorTarget::kStoppedBy ? (*tau <= j) : (*tau == j);
}

}  // namespace

Certificate certify_indicator_monotonicity(const StoppingRule& rule, Monotonicity direction,
                                           const ProcessEnsemble& probe_paths,
                                           std::size_t probes_per_path, std::uint64_t seed,
                                           IndicatorTarget target, std::size_t max_index) {
  if (direction == Monotonicity::kNone) {
    throw DomainError("certification needs a nondecreasing or nonincreasing direction");
  }
  Certificate cert;
  if (rule.analytic_certificate(direction, target, max_index)) return cert;

  cert.kind = Certificate::Kind::kSampledOk;
  const std::size_t n = probe_paths.horizon();
  const std::size_t jmax = std::min(n, max_index);
  if (jmax == 0) return cert;
  Stream rng = derive_stream(seed, 0xCE27);
  std::vector<double> bumped(n);

  auto violates = [&](int before, int after) {
    return direction == Monotonicity::kNondecreasing ? after < before : after > before;
  };

  for (std::size_t p = 0; p < probe_paths.size(); ++p) {
    const auto path = probe_paths.path(p);
    const auto [lo, hi] = std::minmax_element(path.begin(), path.end());
    const double range = std::max(1.0, *hi - *lo + 1.0);
    std::vector<double> deltas;
    for (double d = 2.0; d <= 2.0 * range; d *= 2.0) deltas.push_back(d);

    for (std::size_t q = 0; q < probes_per_path; ++q) {
      const std::size_t j = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(jmax));
      const std::size_t i = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(j));
      const double random_delta = std::pow(10.0, -6.0 + 6.0 * rng.uniform());
      const int before = indicator(rule, path, j, target);
      auto probe = [&](double delta) {
        std::copy(path.begin(), path.end(), bumped.begin());
        for (std::size_t k = i - 1; k < n; ++k) bumped[k] += delta;
        ++cert.probes;
        if (violates(before, indicator(rule, bumped, j, target))) {
          cert.kind = Certificate::Kind::kCounterexample;
          cert.path.assign(path.begin(), path.end());
          cert.coordinate = i;
          cert.index = j;
          cert.delta = delta;
          return true;
        }
        return false;
      };
      if (probe(random_delta)) return cert;
      for (double d : deltas) {
        if (probe(d)) return cert;
      }
    }
  }
  return cert;
}

}  // namespace demi
