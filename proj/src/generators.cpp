#include "demi/generators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "demi/parallel.hpp"
#include "detail/text.hpp"

namespace demi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMomentEps = 1e-12;
constexpr double kPsdEps = 1e-10;

double log_sum_exp(std::span<const Atom> atoms, double t) {
  double peak = -kInf;
  for (const auto& a : atoms) peak = std::max(peak, t * a.value);
  double acc = 0.0;
  for (const auto& a : atoms) acc += a.prob * std::exp(t * a.value - peak);
  return peak + std::log(acc);
}

}  // namespace

ScalarLaw ScalarLaw::rademacher() {
  return discrete({{-1.0, 0.5}, {1.0, 0.5}}, "rademacher");
}

ScalarLaw ScalarLaw::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli p must lie in [0,1]");
  std::vector<Atom> atoms;
  if (p < 1.0) atoms.push_back({0.0, 1.0 - p});
  if (p > 0.0) atoms.push_back({1.0, p});
  return discrete(std::move(atoms), "bernoulli(" + detail::format_number(p) + ")");
}

ScalarLaw ScalarLaw::uniform(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a <= b)) {
    throw DomainError("uniform(a,b) requires finite a <= b");
  }
  ScalarLaw law;
  law.kind_ = Kind::kUniform;
  law.a_ = a;
  law.b_ = b;
  law.name_ = "uniform(" + detail::format_number(a) + "," + detail::format_number(b) + ")";
  return law;
}

ScalarLaw ScalarLaw::normal() {
  ScalarLaw law;
  law.kind_ = Kind::kNormal;
  law.name_ = "normal";
  return law;
}

ScalarLaw ScalarLaw::discrete(std::vector<Atom> atoms, std::string name) {
  if (atoms.empty()) throw DomainError("discrete law needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value)) throw DomainError("discrete atom values must be finite");
    if (!(a.prob > 0.0)) throw DomainError("discrete atom probabilities must be positive");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("discrete probabilities must sum to 1");
  ScalarLaw law;
  law.kind_ = Kind::kDiscrete;
  law.atoms_ = std::move(atoms);
  double cum = 0.0;
  for (const auto& a : law.atoms_) {
    cum += a.prob;
    law.cumulative_.push_back(cum);
  }
  law.cumulative_.back() = 1.0;
  if (name.empty()) {
    name = "discrete(";
    for (std::size_t i = 0; i < law.atoms_.size(); ++i) {
      if (i) name += ",";
      name += detail::format_number(law.atoms_[i].value) + ":" +
              detail::format_number(law.atoms_[i].prob);
    }
    name += ")";
  }
  law.name_ = std::move(name);
  return law;
}

ScalarLaw ScalarLaw::parse(std::string_view text) {
  const std::string t = detail::trim(text);
  const auto open = t.find('(');
  const std::string head = detail::trim(t.substr(0, open));
  std::vector<std::string> args;
  if (open != std::string::npos) {
    if (t.back() != ')') throw DomainError("law '" + t + "': missing ')'");
    args = detail::split(t.substr(open + 1, t.size() - open - 2), ',');
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw DomainError("law '" + t + "': expected " + std::to_string(n) + " argument(s)");
    }
  };
  if (head == "rademacher") {
    need(0);
    return rademacher();
  }
  if (head == "normal") {
    need(0);
    return normal();
  }
  if (head == "bernoulli") {
    need(1);
    return bernoulli(detail::parse_double(args[0], "bernoulli p"));
  }
  if (head == "uniform") {
    need(2);
    return uniform(detail::parse_double(args[0], "uniform a"),
                   detail::parse_double(args[1], "uniform b"));
  }
  if (head == "discrete") {
    std::vector<Atom> atoms;
    for (const auto& a : args) {
      const auto parts = detail::split(a, ':');
      if (parts.size() != 2) throw DomainError("discrete atom '" + a + "' must be value:prob");
      atoms.push_back({detail::parse_double(parts[0], "atom value"),
                       detail::parse_double(parts[1], "atom probability")});
    }
    return discrete(std::move(atoms));
  }
  throw DomainError("unknown law '" + t + "'");
}

double ScalarLaw::mean() const {
  switch (kind_) {
    case Kind::kDiscrete: {
      double m = 0.0;
      for (const auto& a : atoms_) m += a.prob * a.value;
      return m;
    }
    case Kind::kUniform:
      return 0.5 * (a_ + b_);
    case Kind::kNormal:
      return 0.0;
  }
  return 0.0;
}

double ScalarLaw::second_moment() const {
  switch (kind_) {
    case Kind::kDiscrete: {
      double m = 0.0;
      for (const auto& a : atoms_) m += a.prob * a.value * a.value;
      return m;
    }
    case Kind::kUniform:
      return (a_ * a_ + a_ * b_ + b_ * b_) / 3.0;
    case Kind::kNormal:
      return 1.0;
  }
  return 0.0;
}

double ScalarLaw::lower() const {
  switch (kind_) {
    case Kind::kDiscrete:
      return std::min_element(atoms_.begin(), atoms_.end(),
                              [](const Atom& x, const Atom& y) { return x.value < y.value; })
          ->value;
    case Kind::kUniform:
      return a_;
    case Kind::kNormal:
      return -kInf;
  }
  return -kInf;
}

double ScalarLaw::upper() const {
  switch (kind_) {
    case Kind::kDiscrete:
      return std::max_element(atoms_.begin(), atoms_.end(),
                              [](const Atom& x, const Atom& y) { return x.value < y.value; })
          ->value;
    case Kind::kUniform:
      return b_;
    case Kind::kNormal:
      return kInf;
  }
  return kInf;
}

double ScalarLaw::log_mgf(double t) const {
  switch (kind_) {
    case Kind::kDiscrete:
      return log_sum_exp(atoms_, t);
    case Kind::kUniform: {
      const double u = t * (b_ - a_);
      if (u == 0.0) return t * a_;
      // log E e^{tX} = t a + log(expm1(u) / u)
      if (u > 0.0) return t * a_ + u + std::log(-std::expm1(-u) / u);
      return t * a_ + std::log(std::expm1(u) / u);
    }
    case Kind::kNormal:
      return 0.5 * t * t;
  }
  return 0.0;
}

double ScalarLaw::sample(Stream& rng) const {
  switch (kind_) {
    case Kind::kDiscrete: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].value;
    }
    case Kind::kUniform:
      return a_ + (b_ - a_) * rng.uniform();
    case Kind::kNormal:
      return rng.normal();
  }
  return 0.0;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kIid:
      return "iid";
    case Family::kMovingSum:
      return "moving_sum";
    case Family::kGaussianAssoc:
      return "gaussian_assoc";
    case Family::kSharedShock:
      return "shared_shock";
    case Family::kCenteredPartialSum:
      return "centered_partial_sum";
    case Family::kAdversarialSignFlip:
      return "adversarial_sign_flip";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::kIid, Family::kMovingSum, Family::kGaussianAssoc,
                   Family::kSharedShock, Family::kCenteredPartialSum,
                   Family::kAdversarialSignFlip}) {
    if (to_string(f) == name) return f;
  }
  throw DomainError("unknown generator family '" + std::string(name) + "'");
}

std::vector<double> CovarianceModel::materialize(std::size_t n) const {
  std::vector<double> m(n * n, 0.0);
  switch (kind) {
    case Kind::kExplicit:
      if (matrix.size() != n * n) {
        throw DomainError("explicit covariance must be horizon x horizon");
      }
      return matrix;
    case Kind::kDiagonal:
      for (std::size_t i = 0; i < n; ++i) m[i * n + i] = variance;
      return m;
    case Kind::kEquicorrelated:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = variance * (i == j ? 1.0 : rho);
      }
      return m;
    case Kind::kAr1:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto lag = static_cast<double>(i > j ? i - j : j - i);
          m[i * n + j] = variance * std::pow(rho, lag);
        }
      }
      return m;
  }
  return m;
}

GeneratorSpec GeneratorSpec::with_horizon(std::size_t n) const {
  GeneratorSpec copy = *this;
  copy.horizon = n;
  return copy;
}

std::string GeneratorSpec::id() const {
  auto base = [&](Family f) {
    std::string s = to_string(f) + "(" + law.name();
    if (f == Family::kSharedShock && shock) s += "+" + shock->name();
    if (f == Family::kMovingSum) {
      s += ";c=";
      for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (i) s += ",";
        s += detail::format_number(coefficients[i]);
      }
    }
    if (f == Family::kGaussianAssoc) {
      switch (covariance.kind) {
        case CovarianceModel::Kind::kDiagonal:
          s = "gaussian_assoc(diag:" + detail::format_number(covariance.variance);
          break;
        case CovarianceModel::Kind::kEquicorrelated:
          s = "gaussian_assoc(equi:" + detail::format_number(covariance.rho);
          break;
        case CovarianceModel::Kind::kAr1:
          s = "gaussian_assoc(ar1:" + detail::format_number(covariance.rho);
          break;
        case CovarianceModel::Kind::kExplicit:
          s = "gaussian_assoc(explicit";
          break;
      }
    }
    return s + ")";
  };
  std::string s = centered() ? "centered_partial_sum(" + base(inner) + ")" : base(family);
  s += "/n=" + std::to_string(horizon);
  if (start != 0.0) s += "/start=" + detail::format_number(start);
  return s;
}

void GeneratorSpec::validate() const {
  if (horizon == 0) throw DomainError("generator horizon must be positive");
  if (!std::isfinite(start)) throw DomainError("generator start must be finite");
  if (centered() && (inner == Family::kCenteredPartialSum)) {
    throw DomainError("centered_partial_sum cannot wrap itself");
  }
  switch (base_family()) {
    case Family::kMovingSum:
      if (coefficients.empty()) throw DomainError("moving_sum needs coefficients c_0..c_q");
      for (double c : coefficients) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
          throw DomainError("moving_sum coefficients must be finite and nonnegative");
        }
      }
      break;
    case Family::kSharedShock:
      if (!shock) throw DomainError("shared_shock needs a shock law");
      break;
    case Family::kGaussianAssoc: {
      const auto m = covariance.materialize(horizon);
      const auto n = static_cast<Eigen::Index>(horizon);
      Eigen::MatrixXd cov(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          const double v = m[static_cast<std::size_t>(i * n + j)];
          if (!std::isfinite(v)) throw DomainError("covariance entries must be finite");
          if (v < 0.0) throw DomainError("covariance entries must be nonnegative");
          cov(i, j) = v;
        }
      }
      if (!cov.isApprox(cov.transpose(), 1e-12)) {
        throw DomainError("covariance must be symmetric");
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() < -kPsdEps) {
        throw DomainError("covariance is not positive semidefinite");
      }
      break;
    }
    default:
      break;
  }
}

std::uint64_t DiscreteChainSpec::outcome_count() const {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = shared_component ? shared_component->size() : 1;
  for (std::size_t i = 0; i < free_steps(); ++i) {
    if (count > kMax / increment_support.size()) return kMax;
    count *= increment_support.size();
  }
  return count;
}

void DiscreteChainSpec::validate() const {
  auto check = [](const std::vector<Atom>& atoms, const char* what) {
    if (atoms.empty()) throw DomainError(std::string(what) + " support is empty");
    double total = 0.0;
    for (const auto& a : atoms) {
      if (!(a.prob > 0.0)) throw DomainError(std::string(what) + " probabilities must be positive");
      total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw DomainError(std::string(what) + " probabilities must sum to 1");
    }
  };
  if (horizon == 0) throw DomainError("chain horizon must be positive");
  check(increment_support, "increment");
  if (shared_component) check(*shared_component, "shared component");
}

ProcessModel::ProcessModel(const GeneratorSpec& spec) : spec_(spec) {
  spec_.validate();
  const std::size_t n = spec_.horizon;
  laws_.push_back(spec_.law);

  switch (spec_.base_family()) {
    case Family::kIid:
      innovation_law_.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i) add_row({{i, 1.0}}, 0.0);
      break;
    case Family::kMovingSum: {
      const std::size_t q = spec_.coefficients.size() - 1;
      innovation_law_.assign(n + q, 0);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Term> row;
        // innovation index i + q is Y_{i+1}; lag k reads Y_{i+1-k}.
        for (std::size_t k = q + 1; k-- > 0;) {
          if (spec_.coefficients[k] != 0.0) row.push_back({i + q - k, spec_.coefficients[k]});
        }
        add_row(std::move(row), 0.0);
      }
      break;
    }
    case Family::kGaussianAssoc: {
      laws_[0] = ScalarLaw::normal();
      innovation_law_.assign(n, 0);
      const auto m = spec_.covariance.materialize(n);
      const auto dim = static_cast<Eigen::Index>(n);
      Eigen::MatrixXd cov(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) cov(i, j) = m[static_cast<std::size_t>(i * dim + j)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
      const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      const Eigen::MatrixXd factor =
          eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
      for (Eigen::Index i = 0; i < dim; ++i) {
        std::vector<Term> row;
        for (Eigen::Index k = 0; k < dim; ++k) {
          if (factor(i, k) != 0.0) row.push_back({static_cast<std::size_t>(k), factor(i, k)});
        }
        add_row(std::move(row), 0.0);
      }
      break;
    }
    case Family::kSharedShock:
      laws_.push_back(*spec_.shock);
      innovation_law_.assign(n, 0);
      innovation_law_.push_back(1);
      for (std::size_t i = 0; i < n; ++i) add_row({{i, 1.0}, {n, 1.0}}, 0.0);
      break;
    case Family::kAdversarialSignFlip:
      innovation_law_.assign((n + 1) / 2, 0);
      for (std::size_t i = 0; i < n; ++i) add_row({{i / 2, i % 2 == 0 ? 1.0 : -1.0}}, 0.0);
      break;
    case Family::kCenteredPartialSum:
      break;
  }

  if (spec_.centered()) {
    for (std::size_t i = 1; i <= n; ++i) offsets_[i - 1] -= increment_mean(i);
  }
  offsets_[0] += spec_.start;
}

void ProcessModel::add_row(std::vector<Term> terms, double offset) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.innovation < b.innovation; });
  row_begin_.push_back(terms_.size());
  terms_.insert(terms_.end(), terms.begin(), terms.end());
  offsets_.push_back(offset);
}

void ProcessModel::sample_path(Stream& rng, std::span<double> scratch,
                               std::span<double> out) const {
  for (std::size_t k = 0; k < innovation_law_.size(); ++k) {
    scratch[k] = laws_[innovation_law_[k]].sample(rng);
  }
  double s = 0.0;
  const std::size_t n = offsets_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t end = i + 1 < n ? row_begin_[i + 1] : terms_.size();
    double x = offsets_[i];
    for (std::size_t t = row_begin_[i]; t < end; ++t) x += terms_[t].coef * scratch[terms_[t].innovation];
    s += x;
    out[i] = s;
  }
}

namespace {

template <class Fn>
double fold_row(std::size_t begin, std::size_t end, Fn&& fn) {
  double acc = 0.0;
  for (std::size_t t = begin; t < end; ++t) acc += fn(t);
  return acc;
}

}  // namespace

double ProcessModel::increment_mean(std::size_t i) const {
  const std::size_t r = i - 1;
  const std::size_t end = i < offsets_.size() ? row_begin_[i] : terms_.size();
  return offsets_[r] + fold_row(row_begin_[r], end, [&](std::size_t t) {
           return terms_[t].coef * laws_[innovation_law_[terms_[t].innovation]].mean();
         });
}

double ProcessModel::increment_covariance(std::size_t i, std::size_t j) const {
  std::size_t a = row_begin_[i - 1];
  const std::size_t a_end = i < offsets_.size() ? row_begin_[i] : terms_.size();
  std::size_t b = row_begin_[j - 1];
  const std::size_t b_end = j < offsets_.size() ? row_begin_[j] : terms_.size();
  double cov = 0.0;
  while (a < a_end && b < b_end) {
    if (terms_[a].innovation < terms_[b].innovation) {
      ++a;
    } else if (terms_[b].innovation < terms_[a].innovation) {
      ++b;
    } else {
      cov += terms_[a].coef * terms_[b].coef *
             laws_[innovation_law_[terms_[a].innovation]].variance();
      ++a;
      ++b;
    }
  }
  return cov;
}

double ProcessModel::increment_second_moment(std::size_t i) const {
  const double m = increment_mean(i);
  return increment_covariance(i, i) + m * m;
}

double ProcessModel::increment_lower(std::size_t i) const {
  const std::size_t r = i - 1;
  const std::size_t end = i < offsets_.size() ? row_begin_[i] : terms_.size();
  return offsets_[r] + fold_row(row_begin_[r], end, [&](std::size_t t) {
           const auto& law = laws_[innovation_law_[terms_[t].innovation]];
           const double c = terms_[t].coef;
           return c > 0.0 ? c * law.lower() : c * law.upper();
         });
}

double ProcessModel::increment_upper(std::size_t i) const {
  const std::size_t r = i - 1;
  const std::size_t end = i < offsets_.size() ? row_begin_[i] : terms_.size();
  return offsets_[r] + fold_row(row_begin_[r], end, [&](std::size_t t) {
           const auto& law = laws_[innovation_law_[terms_[t].innovation]];
           const double c = terms_[t].coef;
           return c > 0.0 ? c * law.upper() : c * law.lower();
         });
}

double ProcessModel::log_mgf(std::size_t i, double theta) const {
  const std::size_t r = i - 1;
  const std::size_t end = i < offsets_.size() ? row_begin_[i] : terms_.size();
  return theta * offsets_[r] + fold_row(row_begin_[r], end, [&](std::size_t t) {
           return laws_[innovation_law_[terms_[t].innovation]].log_mgf(theta * terms_[t].coef);
         });
}

double ProcessModel::increment_bound() const {
  double c = 0.0;
  for (std::size_t i = 1; i <= horizon(); ++i) {
    c = std::max({c, std::abs(increment_lower(i)), std::abs(increment_upper(i))});
  }
  return c;
}

double ProcessModel::v_n(std::size_t n) const {
  double v = 0.0;
  for (std::size_t i = 1; i <= n; ++i) v += increment_second_moment(i);
  return v;
}

double ProcessModel::mean_of_sum(std::size_t n) const {
  double m = 0.0;
  for (std::size_t i = 1; i <= n; ++i) m += increment_mean(i);
  return m;
}

double ProcessModel::variance_of_sum(std::size_t n) const {
  // Var(sum_i X_i) = sum_k Var(xi_k) * (sum_{i<=n} coef_ik)^2.
  std::vector<double> loading(innovation_law_.size(), 0.0);
  const std::size_t end = n < offsets_.size() ? row_begin_[n] : terms_.size();
  for (std::size_t t = 0; t < end; ++t) loading[terms_[t].innovation] += terms_[t].coef;
  double v = 0.0;
  for (std::size_t k = 0; k < loading.size(); ++k) {
    v += loading[k] * loading[k] * laws_[innovation_law_[k]].variance();
  }
  return v;
}

double ProcessModel::second_moment_of_sum(std::size_t n) const {
  const double m = mean_of_sum(n);
  return variance_of_sum(n) + m * m;
}

double ProcessModel::path_lower_bound() const {
  double s = 0.0;
  double lo = kInf;
  for (std::size_t i = 1; i <= horizon(); ++i) {
    s += increment_lower(i);
    lo = std::min(lo, s);
  }
  return lo;
}

bool ProcessModel::associated() const {
  return spec_.base_family() != Family::kAdversarialSignFlip;
}

namespace {

double mean_scale(const ProcessModel& m, std::size_t i) {
  return kMomentEps * std::max(1.0, std::sqrt(m.increment_second_moment(i)));
}

}  // namespace

bool ProcessModel::is_demimartingale() const {
  if (!associated()) return false;
  for (std::size_t i = 2; i <= horizon(); ++i) {
    if (std::abs(increment_mean(i)) > mean_scale(*this, i)) return false;
  }
  return true;
}

bool ProcessModel::is_demisubmartingale() const {
  if (!associated()) return false;
  for (std::size_t i = 2; i <= horizon(); ++i) {
    if (increment_mean(i) < -mean_scale(*this, i)) return false;
  }
  return true;
}

bool ProcessModel::mean_zero() const {
  for (std::size_t i = 1; i <= horizon(); ++i) {
    if (std::abs(increment_mean(i)) > mean_scale(*this, i)) return false;
  }
  return true;
}

bool ProcessModel::identically_distributed() const {
  if (spec_.base_family() == Family::kGaussianAssoc) {
    const auto m = spec_.covariance.materialize(horizon());
    for (std::size_t i = 1; i < horizon(); ++i) {
      if (std::abs(m[i * horizon() + i] - m[0]) > kMomentEps) return false;
    }
    return spec_.start == 0.0;
  }
  using Signature = std::pair<double, std::vector<std::pair<std::size_t, double>>>;
  auto signature = [&](std::size_t i) {
    Signature sig{offsets_[i - 1], {}};
    const std::size_t end = i < offsets_.size() ? row_begin_[i] : terms_.size();
    for (std::size_t t = row_begin_[i - 1]; t < end; ++t) {
      sig.second.emplace_back(innovation_law_[terms_[t].innovation], terms_[t].coef);
    }
    std::sort(sig.second.begin(), sig.second.end());
    return sig;
  };
  const Signature first = signature(1);
  for (std::size_t i = 2; i <= horizon(); ++i) {
    const Signature s = signature(i);
    if (std::abs(s.first - first.first) > kMomentEps || s.second.size() != first.second.size()) {
      return false;
    }
    for (std::size_t t = 0; t < s.second.size(); ++t) {
      // A sign flip changes the law unless it is symmetric; rows with a
      // negated coefficient are compared through their moments instead.
      if (s.second[t] != first.second[t]) {
        if (std::abs(increment_mean(i) - increment_mean(1)) > kMomentEps ||
            std::abs(increment_second_moment(i) - increment_second_moment(1)) > kMomentEps ||
            std::abs(increment_lower(i) - increment_lower(1)) > kMomentEps ||
            std::abs(increment_upper(i) - increment_upper(1)) > kMomentEps) {
          return false;
        }
      }
    }
  }
  return true;
}

ProcessEnsemble generate(const GeneratorSpec& spec, std::size_t paths, std::uint64_t seed) {
  if (paths == 0) throw DomainError("paths must be positive");
  const ProcessModel model(spec);
  const std::size_t n = spec.horizon;
  std::vector<double> values(paths * n);
  const std::uint64_t chunks = (paths + kChunkPaths - 1) / kChunkPaths;
  int sink = 0;
  ordered_chunk_reduce(
      chunks, sink,
      [&](std::uint64_t c) {
        Stream rng = derive_stream(seed, c);
        std::vector<double> scratch(model.innovation_count());
        const std::size_t begin = c * kChunkPaths;
        const std::size_t end = std::min<std::size_t>(paths, begin + kChunkPaths);
        for (std::size_t p = begin; p < end; ++p) {
          model.sample_path(rng, scratch, std::span<double>(values).subspan(p * n, n));
        }
        return 0;
      },
      [](int&, int) {});
  return ProcessEnsemble(n, std::move(values), seed, spec.id());
}

DiscreteChainSpec to_chain(const GeneratorSpec& spec) {
  spec.validate();
  const Family base = spec.base_family();
  const bool chain_family = base == Family::kIid || base == Family::kSharedShock ||
                            base == Family::kAdversarialSignFlip;
  if (!chain_family || !spec.law.is_discrete() ||
      (base == Family::kSharedShock && !spec.shock->is_discrete())) {
    throw DomainError("not enumerable: " + spec.id());
  }
  DiscreteChainSpec chain;
  const auto atoms = spec.law.atoms();
  chain.increment_support.assign(atoms.begin(), atoms.end());
  chain.horizon = spec.horizon;
  chain.start = spec.start;
  chain.sign_flip_pairs = base == Family::kAdversarialSignFlip;
  double mean = spec.law.mean();
  if (base == Family::kSharedShock) {
    const auto shared = spec.shock->atoms();
    chain.shared_component.emplace(shared.begin(), shared.end());
    mean += spec.shock->mean();
  }
  if (spec.centered()) chain.drift = mean;
  return chain;
}

}  // namespace demi
