#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "demi/core.hpp"
#include "demi/harness.hpp"

namespace demi {

struct Instance;

/// e^u - u - 1, accurate near 0.
double phi(double u);
/// u^2 / (2 (1 - u/3)) for u in (0, 3).
double phi_bound(double u);

/// lambda^2 EX^2 / (2 (1 - lambda C / 3)) for lambda in (0, 3/C).
double mgf_log_bound(double lambda, double c, double ex2);

/// 1 + u - sqrt(1 + 2u), evaluated as u^2 / (1 + u + sqrt(1 + 2u)).
double h1(double u);
/// u^2 / (2 (1 + u)).
double h1_lower(double u);

/// (9 V / C^2) h1(C t / (3 V)): the supremum over lambda in (0, 3/C) of
/// lambda t - lambda^2 V / (2 (1 - lambda C / 3)).
double psi_sup(double t, double v, double c);

struct BernsteinInput {
  double t = 0.0;
  double v_n = 0.0;
  double c = 0.0;
  std::size_t n = 1;

  void validate() const;
};

/// exp(-t^2 / (2 (V_n + t C / 3))).
double bernstein_tail(const BernsteinInput& in);
/// Twice the one-sided bound.
double bernstein_tail_two_sided(const BernsteinInput& in);

/// E S_1 / lambda.
double doob_max_bound(double es1, double lambda);
/// p E S_1 / ((1 - p) M^(1-p)) for p in (0, 1), M > 0.
double lp_max_bound(double p, double m, double es1);

/// 2^p p V_n^(p/2) Gamma(p/2). The o(1) remainder of the asymptotic
/// statement is dropped, so this is only the leading term.
double moment_bound(double p, double v_n);

struct WaldInput {
  double mu1 = 0.0;
  double m2 = 0.0;
  double e_tau = 1.0;
  double theta = 0.0;
  /// psi_i(theta) = log E exp(theta X_i), i = 1..
  std::vector<double> psi;

  void validate() const;
  /// E X_1 E tau.
  double first_moment_rhs() const { return mu1 * e_tau; }
  /// E X_1^2 E tau.
  double second_moment_rhs() const { return m2 * e_tau; }
};

/// Registry entries owned by the bounds module: T4.1-doob-max, C4.3-lp-max,
/// L4.4/L4.6-lemma-grid, L4.5-mgf, T4.7-bernstein, C4.10-exp-stopped,
/// C5.2/C5.3-wald-first, C5.4-wald-second, C5.5-wald-exp,
/// T5.6-bernstein-assoc.
VerificationReport verify_bounds_entry(const std::string& theorem_id, const Instance& instance,
                                       const Params& params, const Mode& mode,
                                       const Tolerance& tol);

}  // namespace demi
