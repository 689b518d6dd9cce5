// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "demi/asymptotics.hpp"
#include "demi/bounds.hpp"
#include "demi/experiment.hpp"
#include "demi/monotone.hpp"
#include "demi/oracle.hpp"
#include "demi/registry.hpp"

namespace fs = std::filesystem;
using namespace demi;

namespace {

struct Result {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Instance iid(const std::string& law, std::size_t n, std::optional<StoppingRule> rule = {}) {
  Instance inst;
  inst.generator.law = ScalarLaw::parse(law);
  inst.generator.horizon = n;
  inst.stopping = std::move(rule);
  inst.seed = 20240601;
  return inst;
}

Params one(const std::string& k, const std::string& v) {
  Params p;
  p.set(k, v);
  return p;
}

bool passes(const VerificationReport& r) { return r.verdict == Verdict::kPass; }

Result lemma_grid() {
  const auto r = verify("L4.4", iid("rademacher", 1), Params{}, Exact{}, Tolerance{});
  return {passes(r), fmt("%zu grids, worst z=%.3g", r.checks.size(), r.z_margin)};
}

Result definition_exact() {
  const auto full = sample_battery(11, 32, false);
  const auto nonneg = sample_battery(12, 32, true);
  double worst = INFINITY;
  std::size_t evaluations = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto rad = enumerate(to_chain(iid("rademacher", n).generator));
    const auto ber = enumerate(to_chain(iid("bernoulli(0.5)", n).generator));
    for (std::size_t j = 1; j < n; ++j) {
      for (const auto& f : full) worst = std::min(worst, exact_demi_check(rad, j, f));
      for (const auto& f : nonneg) {
        worst = std::min(worst, exact_demi_check(rad, j, f));
        worst = std::min(worst, exact_demi_check(ber, j, f));
      }
      evaluations += full.size() + 2 * nonneg.size();
    }
  }
  GeneratorSpec flip;
  flip.family = Family::kAdversarialSignFlip;
  flip.horizon = 4;
  const double flipped =
      exact_demi_check(enumerate(to_chain(flip)), 1, MonotoneTestFunction::last_coordinate());
  return {worst >= -1e-12 && flipped == -1.0,
          fmt("%zu evaluations, min %.3g; sign flip gives %g", evaluations, worst, flipped)};
}

Result optional_sampling_exact() {
  const auto base =
      verify("T3.1", iid("rademacher", 3, StoppingRule::capped(StoppingRule::first_passage_up(1), 3)),
             Params{}, Exact{}, Tolerance{});
  bool ok = passes(base) && std::abs(base.lhs.mean) < 1e-15 && base.rhs == 0.0;
  std::size_t runs = 1;
  // Up rules need a demimartingale; down rules only a demisubmartingale.
  for (const std::string law : {"rademacher", "bernoulli(0.5)"}) {
    const bool martingale = law == "rademacher";
    for (std::size_t n = 1; n <= 8; ++n) {
      for (double lambda : {1.0, 2.0}) {
        std::vector<StoppingRule> rules{
            StoppingRule::capped(StoppingRule::first_passage_down(lambda), n)};
        if (martingale) {
          rules.push_back(StoppingRule::capped(StoppingRule::first_passage_up(lambda), n));
          rules.push_back(StoppingRule::capped(StoppingRule::first_passage_down(-lambda), n));
        }
        for (const auto& rule : rules) {
          ok &= passes(verify("T1.4", iid(law, n, rule), Params{}, Exact{}, Tolerance{}));
          ++runs;
        }
        for (std::size_t k = 1; k <= n; ++k) {
          const auto look = StoppingRule::single_look(k, lambda);
          ok &= passes(verify("C2.2", iid(law, n, look), Params{}, Exact{}, Tolerance{}));
          ++runs;
        }
      }
    }
  }
  for (std::size_t n = 2; n <= 8; ++n) {
    for (double lambda : {0.0, 1.0, 2.0}) {
      const auto down = StoppingRule::capped(StoppingRule::first_passage_down(lambda), n);
      ok &= passes(verify("T3.3", iid("bernoulli(0.5)", n, down), Params{}, Exact{}, Tolerance{}));
      ++runs;
    }
  }
  return {ok, fmt("%zu exact runs, E S_{tau^3} = %g", runs, base.lhs.mean)};
}

Result monte_carlo_agreement() {
  std::size_t pairs = 0, compared = 0;
  double worst = 0.0;
  std::string offender;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(DEMI_SOURCE_DIR) / "configs/acceptance"))
    files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    ExperimentConfig cfg = load_config(file);
    RunResult exact, mc;
    try {
      cfg.mode = Exact{};
      exact = run_experiment(cfg);
    } catch (const std::exception&) {
      continue;  // not enumerable
    }
    cfg.mode = MonteCarlo{100000, cfg.seed};
    mc = run_experiment(cfg);
    const auto& a = exact.report.checks;
    const auto& b = mc.report.checks;
    if (a.size() != b.size()) continue;
    bool sampled = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].label != b[i].label || b[i].underpowered || b[i].lhs_stderr == 0.0) continue;
      sampled = true;
      ++compared;
      const double z = std::abs(b[i].lhs - a[i].lhs) / b[i].lhs_stderr;
      if (z > worst) {
        worst = z;
        offender = file.stem().string() + ":" + a[i].label;
      }
    }
    pairs += sampled;
  }
  return {pairs >= 20 && worst <= 4.0,
          fmt("%zu pairs, %zu checks, max |mc-exact|/se = %.2f (%s)", pairs, compared, worst,
              offender.c_str())};
}

Result bernstein_monte_carlo() {
  bool ok = true;
  std::string detail;
  for (double t : {5.0, 10.0, 15.0}) {
    const auto r = verify("T4.7", iid("rademacher", 100), one("t", fmt("%g", t)),
                          MonteCarlo{1000000, 20240601}, Tolerance{});
    for (const auto& c : r.checks) ok &= c.z_margin >= 0.0;
    ok &= passes(r);
    detail += fmt("t=%g tail %.4f<=%.4f ", t, r.checks[0].lhs, r.checks[0].rhs);
  }
  return {ok, detail};
}

Result wald_suite() {
  bool ok = true;
  double worst_gap = 0.0;
  for (std::size_t m = 1; m <= 10; ++m) {
    const auto r = verify("C5.2", iid("bernoulli(0.3)", 10, StoppingRule::deterministic(m)),
                          Params{}, Exact{}, Tolerance{});
    worst_gap = std::max(worst_gap, std::abs(r.lhs.mean - 0.3 * static_cast<double>(m)));
    ok &= passes(r);
  }
  ok &= worst_gap <= 1e-14;
  std::size_t runs = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (double lambda : {0.0, 1.0, 2.0}) {
      const auto down = StoppingRule::capped(StoppingRule::first_passage_down(lambda), n);
      ok &= passes(verify("C5.2", iid("bernoulli(0.5)", n, down), Params{}, Exact{}, Tolerance{}));
      ok &= passes(verify("C5.5", iid("bernoulli(0.5)", n, down), one("theta", "0.5"), Exact{},
                          Tolerance{}));
      runs += 2;
    }
  }
  return {ok, fmt("deterministic gap %.2g, %zu stopped runs", worst_gap, runs)};
}

Result clt_calibration() {
  // The first 100 seeds form the gate; 2000 seeds give the rejection rate.
  int calibrated = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto z = normal_samples(seed, 10000);
    const bool pass = ks_distance_normal(z) < ks_critical_value(z.size());
    if (seed < 100) calibrated += pass;
    rejected += !pass;
  }
  GeneratorSpec shock;
  shock.family = Family::kSharedShock;
  shock.shock = ScalarLaw::rademacher();
  shock.horizon = 256;
  const std::vector<std::size_t> grid{16, 64, 256};
  const auto rep = clt_diagnose(shock, grid, 10000, 20240601);
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n);
    worst = std::max(worst, std::abs(row.ratio_cubed / std::pow(2 * n / (n * n + n), 1.5) - 1));
  }
  return {calibrated >= 99 && rep.ratio_decreasing && worst <= 1e-9,
          fmt("KS gate %d/100 (crit %.4f), rejection rate %.2f%% over 2000 seeds; ratio rel err "
              "%.2g, decreasing %s",
              calibrated, ks_critical_value(10000), rejected / 20.0, worst,
              rep.ratio_decreasing ? "yes" : "no")};
}

Result complete_convergence() {
  GeneratorSpec g;
  g.horizon = 100;
  const std::vector<std::size_t> grid{25, 50, 100};
  const auto d = complete_convergence_diagnose(g, 1.0, 0.5, grid, 0, 20240601);
  bool ok = d.summable_decay;
  double min_drop = INFINITY;
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    ok &= d.rows[i].exact && d.rows[i].tail <= d.rows[i].envelope;
    if (i > 0) min_drop = std::min(min_drop, d.rows[i - 1].tail / d.rows[i].tail);
  }
  ok &= min_drop >= 10.0;
  return {ok, fmt("exact tails, n=100 tail %.3g <= envelope %.3g, min drop per doubling %.0fx",
                  d.rows.back().tail, d.rows.back().envelope, min_drop)};
}

Result negative_controls() {
  Instance flip = iid("rademacher", 6);
  flip.generator.family = Family::kAdversarialSignFlip;
  const auto r = verify("D1.2", flip, Params{}, Exact{}, Tolerance{});
  const auto rule =
      StoppingRule::first_passage_down(-1).with_direction(Monotonicity::kNondecreasing);
  const ProcessEnsemble probe(2, std::vector<double>{-2, 0}, 0, "probe");
  const auto cert =
      certify_indicator_monotonicity(rule, Monotonicity::kNondecreasing, probe, 64, 7);
  return {r.verdict == Verdict::kFail && cert.kind == Certificate::Kind::kCounterexample,
          fmt("sign flip %s (z=%.3g); down rule %s", to_string(r.verdict).c_str(), r.z_margin,
              to_string(cert.kind).c_str())};
}

std::string normalized(const fs::path& p) {
  std::ifstream in(p);
  auto j = nlohmann::json::parse(in);
  j.erase("runtime_ms");
  return j.dump();
}

Result determinism() {
  const fs::path root = fs::temp_directory_path() / "demi-acceptance-determinism";
  fs::remove_all(root);
  std::size_t compared = 0;
  bool ok = true;
  for (const char* suite : {"acceptance", "negative"}) {
    const fs::path dir = fs::path(DEMI_SOURCE_DIR) / "configs" / suite;
    run_suite(dir, root / "a" / suite);
    run_suite(dir, root / "b" / suite);
    for (const auto& e : fs::directory_iterator(root / "a" / suite)) {
      if (e.path().filename() == "summary.json") continue;
      ok &= normalized(e.path()) == normalized(root / "b" / suite / e.path().filename());
      ++compared;
    }
  }
  fs::remove_all(root);
  return {ok && compared > 0, fmt("%zu reports identical modulo runtime_ms", compared)};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Result()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"analytic lemma suite", 1, lemma_grid},
      {"definition check, exact", 10, definition_exact},
      {"optional sampling, exact", 30, optional_sampling_exact},
      {"monte-carlo/oracle agreement", 120, monte_carlo_agreement},
      {"bernstein tail", 60, bernstein_monte_carlo},
      {"wald suite", 30, wald_suite},
      {"clt harness calibration", 120, clt_calibration},
      {"complete convergence", 300, complete_convergence},
      {"negative controls", 10, negative_controls},
      {"determinism", 600, determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.ok && secs < c.budget_s;
    failed += !ok;
    std::printf("%s %2zu %s (%.2fs/%gs): %s\n", ok ? "PASS" : "FAIL", i + 1, c.name, secs,
                c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
