// demi: command-line runner for generators, stopping rules, bounds and
// registry verifications.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "demi/asymptotics.hpp"
#include "demi/bounds.hpp"
#include "demi/experiment.hpp"
#include "demi/oracle.hpp"
#include "demi/registry.hpp"
#include "demi/stopping.hpp"

namespace {

using demi::ConfigError;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::string out;
  bool dump_paths = false;
  std::vector<std::string> overrides;
};

KeyValues overrides_of(const Common& c) {
  KeyValues kv;
  for (const auto& item : c.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(item, "expected key=value");
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  if (c.seed) kv.emplace_back("seed", std::to_string(*c.seed));
  if (c.paths) {
    kv.emplace_back("paths", std::to_string(*c.paths));
    kv.emplace_back("mode", "monte_carlo");
  }
  return kv;
}

KeyValues merged(KeyValues base, const KeyValues& over) {
  for (const auto& [key, value] : over) {
    bool replaced = false;
    for (auto& p : base) {
      if (p.first == key) {
        p.second = value;
        replaced = true;
      }
    }
    if (!replaced) base.emplace_back(key, value);
  }
  return base;
}

demi::ExperimentConfig load(const Common& c) {
  KeyValues pairs;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) throw ConfigError("config", "cannot read " + c.config);
    std::stringstream buf;
    buf << in.rdbuf();
    pairs = demi::parse_key_values(buf.str());
  }
  return demi::build_config(merged(std::move(pairs), overrides_of(c)));
}

std::size_t paths_of(const demi::ExperimentConfig& c) {
  if (const auto* mc = std::get_if<demi::MonteCarlo>(&c.mode)) return mc->paths;
  return 100000;
}

/// Writes to --out when given, else stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    demi::write_file_atomic(c.out, text);
  }
}

void print_checks(const demi::VerificationReport& r) {
  for (const auto& note : r.notes) std::cerr << "# " << note << "\n";
  for (const auto& check : r.checks) {
    std::cerr << "# " << demi::to_string(check.verdict) << "  z=" << fmt(check.z_margin) << "  "
              << check.label << ": " << fmt(check.lhs) << " " << demi::to_string(check.direction)
              << " " << fmt(check.rhs) << "\n";
  }
}

int run_verification(const Common& c, const demi::ExperimentConfig& config) {
  const auto result = demi::run_experiment(config);
  print_checks(result.report);
  emit(c, result.json);
  if (c.dump_paths) {
    const auto ensemble = demi::generate(config.instance.generator, paths_of(config), config.seed);
    std::ofstream csv(c.out.empty() ? "paths.csv" : c.out + ".paths.csv");
    demi::write_paths_csv(csv, ensemble);
  }
  return demi::exit_code(result.report.verdict);
}

int cmd_gen(const Common& c) {
  const auto config = load(c);
  const auto& spec = config.instance.generator;
  const auto ensemble = demi::generate(spec, paths_of(config), config.seed);
  std::ostringstream out;
  if (c.dump_paths) {
    demi::write_paths_csv(out, ensemble);
  } else {
    out << "step,mean,stderr\n";
    for (std::size_t k = 0; k < spec.horizon; ++k) {
      std::vector<double> column(ensemble.size());
      for (std::size_t i = 0; i < ensemble.size(); ++i) column[i] = ensemble.path(i)[k];
      const auto s = demi::summarize(column);
      out << k + 1 << ',' << fmt(s.mean) << ',' << fmt(s.std_error) << '\n';
    }
  }
  std::cerr << "# " << spec.id() << " paths=" << ensemble.size() << " seed=" << config.seed << "\n";
  emit(c, out.str());
  return 0;
}

int cmd_check_demi(const Common& c) {
  auto config = load(c);
  config.theorem_id = "D1.2-definition";
  if (config.experiment_id.empty()) config.experiment_id = "check-demi";
  return run_verification(c, config);
}

int cmd_stop(const Common& c) {
  const auto config = load(c);
  const auto& rule = demi::require_stopping(config.instance);
  const auto& spec = config.instance.generator;
  const auto ensemble = demi::generate(spec, paths_of(config), config.seed);
  std::vector<double> taus, stopped;
  std::ostringstream out;
  if (c.dump_paths) out << "path_id,step,value\n";
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto view = demi::apply_stop(ensemble.to_path(i), rule);
    if (view.tau) {
      taus.push_back(static_cast<double>(*view.tau));
      stopped.push_back(*view.s_tau);
    }
    if (c.dump_paths) {
      for (std::size_t k = 0; k < view.stopped_sequence.size(); ++k) {
        out << i << ',' << k + 1 << ',' << fmt(view.stopped_sequence[k]) << '\n';
      }
    }
  }
  std::ostringstream summary;
  summary << "rule," << rule.describe() << "\n";
  summary << "direction," << demi::to_string(rule.declared_direction()) << "\n";
  summary << "stopped_fraction," << fmt(static_cast<double>(taus.size()) / ensemble.size()) << "\n";
  if (!taus.empty()) {
    const auto t = demi::summarize(taus);
    const auto s = demi::summarize(stopped);
    summary << "mean_tau," << fmt(t.mean) << "\nmean_tau_stderr," << fmt(t.std_error) << "\n";
    summary << "mean_s_tau," << fmt(s.mean) << "\nmean_s_tau_stderr," << fmt(s.std_error) << "\n";
  }
  if (c.dump_paths) {
    std::cerr << summary.str();
    emit(c, out.str());
  } else {
    emit(c, summary.str());
  }
  return 0;
}

int cmd_bound(const std::string& name, const std::vector<std::string>& args, const Common& c) {
  std::map<std::string, double> in;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError(a, "expected key=value");
    try {
      in[a.substr(0, eq)] = std::stod(a.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError(a.substr(0, eq), "not a number");
    }
  }
  auto get = [&](const std::string& key) {
    const auto it = in.find(key);
    if (it == in.end()) throw ConfigError(key, "required by " + name);
    return it->second;
  };
  const std::map<std::string, std::function<double()>> table = {
      {"phi", [&] { return demi::phi(get("u")); }},
      {"phi_bound", [&] { return demi::phi_bound(get("u")); }},
      {"mgf", [&] { return demi::mgf_log_bound(get("lambda"), get("C"), get("EX2")); }},
      {"h1", [&] { return demi::h1(get("u")); }},
      {"h1_lower", [&] { return demi::h1_lower(get("u")); }},
      {"psi", [&] { return demi::psi_sup(get("t"), get("V"), get("C")); }},
      {"bernstein",
       [&] {
         return demi::bernstein_tail(
             {get("t"), get("V"), get("C"), static_cast<std::size_t>(in.count("n") ? get("n") : 1)});
       }},
      {"bernstein2",
       [&] {
         return demi::bernstein_tail_two_sided(
             {get("t"), get("V"), get("C"), static_cast<std::size_t>(in.count("n") ? get("n") : 1)});
       }},
      {"doob", [&] { return demi::doob_max_bound(get("ES1"), get("lambda")); }},
      {"lp", [&] { return demi::lp_max_bound(get("p"), get("M"), get("ES1")); }},
      {"moment", [&] { return demi::moment_bound(get("p"), get("V")); }},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("bound", "unknown bound '" + name + "'");
  const double value = it->second();
  std::ostringstream out;
  out << name;
  for (const auto& [key, v] : in) out << ' ' << key << '=' << fmt(v);
  out << " value=" << fmt(value) << '\n';
  if (name == "moment") out << "# leading term only; the o(1) remainder is dropped\n";
  emit(c, out.str());
  return 0;
}

int cmd_verify(const Common& c) {
  auto config = load(c);
  if (config.experiment_id.empty()) config.experiment_id = "verify";
  return run_verification(c, config);
}

std::vector<std::size_t> grid_of(const demi::ExperimentConfig& config) {
  std::vector<std::size_t> grid;
  if (!config.params.has("n_grid")) return {config.instance.generator.horizon};
  for (const double v : config.params.numbers("n_grid")) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw ConfigError("params.n_grid", "entries must be positive integers");
    }
    grid.push_back(static_cast<std::size_t>(v));
  }
  return grid;
}

int cmd_clt(const Common& c) {
  const auto config = load(c);
  const auto grid = grid_of(config);
  const auto report = demi::clt_diagnose(config.instance.generator, grid, paths_of(config), config.seed);
  std::ostringstream out;
  out << "n,sigma_n,V_n,ratio_cubed,ks_distance,ks_critical,ecf_distance\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << fmt(r.sigma_n) << ',' << fmt(r.v_n) << ',' << fmt(r.ratio_cubed) << ','
        << fmt(r.ks_distance) << ',' << fmt(r.ks_critical) << ',' << fmt(r.ecf_distance) << '\n';
  }
  std::cerr << "# ratio_cubed decreasing along n_grid: "
            << (report.ratio_decreasing ? "yes" : "no, condition not satisfied") << "\n";
  emit(c, out.str());
  return 0;
}

int cmd_slln(const Common& c) {
  const auto config = load(c);
  const auto grid = grid_of(config);
  const auto d = demi::complete_convergence_diagnose(
      config.instance.generator, config.params.number("r"), config.params.number("epsilon"), grid,
      paths_of(config), config.seed);
  std::ostringstream out;
  out << "n,threshold,tail,stderr,exact,envelope,partial_sum,vn_over_nr\n";
  bool below = true;
  for (const auto& r : d.rows) {
    out << r.n << ',' << fmt(r.threshold) << ',' << fmt(r.tail) << ',' << fmt(r.std_error) << ','
        << (r.exact ? 1 : 0) << ',' << fmt(r.envelope) << ',' << fmt(r.partial_sum) << ','
        << fmt(r.vn_over_nr) << '\n';
    below &= r.tail <= r.envelope + 3.0 * r.std_error;
  }
  std::cerr << "# tails below envelope: " << (below ? "yes" : "no") << "\n"
            << "# V_n/n^r decreasing: " << (d.hypothesis_trend ? "yes" : "no, condition not satisfied")
            << "\n# tails shrink >= 10x per doubling: " << (d.summable_decay ? "yes" : "no")
            << "\n# geometric fit: " << fmt(d.geometric_fit) << "\n";
  emit(c, out.str());
  return below ? 0 : 1;
}

int cmd_oracle(const Common& c) {
  const auto config = load(c);
  const auto& spec = config.instance.generator;
  const auto law = demi::terminal_law(spec);
  double mean = 0.0, second = 0.0;
  std::ostringstream out;
  out << "value,probability\n";
  for (const auto& a : law) {
    mean += a.prob * a.value;
    second += a.prob * a.value * a.value;
    out << fmt(a.value) << ',' << fmt(a.prob) << '\n';
  }
  std::cerr << "# " << spec.id() << " atoms=" << law.size() << " E S_n=" << fmt(mean)
            << " E S_n^2=" << fmt(second) << "\n";
  if (c.dump_paths) {
    const auto table = demi::enumerate(demi::to_chain(spec));
    std::ostringstream paths;
    paths << "path_id,step,value,probability\n";
    for (std::size_t i = 0; i < table.outcomes.size(); ++i) {
      const auto& o = table.outcomes[i];
      for (std::size_t k = 0; k < o.path.horizon(); ++k) {
        paths << i << ',' << k + 1 << ',' << fmt(o.path[k]) << ',' << fmt(o.probability) << '\n';
      }
    }
    emit(c, paths.str());
  } else {
    emit(c, out.str());
  }
  return 0;
}

int cmd_suite(const std::string& dir, const Common& c) {
  const auto summary = demi::run_suite(
      dir, c.out.empty() ? std::nullopt : std::optional<std::filesystem::path>(c.out),
      overrides_of(c));
  std::printf("%-28s %-24s %-13s %12s %10s\n", "experiment_id", "theorem_id", "verdict",
              "z_margin", "ms");
  for (const auto& row : summary.rows) {
    std::printf("%-28s %-24s %-13s %12s %10.0f\n", row.experiment_id.c_str(),
                row.theorem_id.c_str(), row.status.c_str(),
                row.status == "ERROR" ? "-" : fmt(row.z_margin).c_str(), row.runtime_ms);
    if (!row.error.empty()) std::printf("  %s: %s\n", row.file.c_str(), row.error.c_str());
  }
  if (c.out.empty()) std::cout << summary.json;
  return summary.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and exact-enumeration checks of demimartingale inequalities"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", common.config, "Experiment config file");
    sub->add_option("--seed", common.seed, "Override the seed");
    sub->add_option("--paths", common.paths, "Monte-Carlo paths (forces monte_carlo mode)");
    sub->add_option("--out", common.out, "Output file (directory for suite)");
    sub->add_flag("--dump-paths", common.dump_paths, "Emit per-path CSV path_id,step,value");
  };

  std::string bound_name;
  std::vector<std::string> bound_args;
  std::string suite_dir;

  auto* gen = app.add_subcommand("gen", "Sample an ensemble; per-step summary or path CSV");
  auto* check = app.add_subcommand("check-demi", "Run the defining-inequality battery");
  auto* stop = app.add_subcommand("stop", "Apply the configured stopping rule to an ensemble");
  auto* bound = app.add_subcommand("bound", "Evaluate a closed-form bound, e.g. bernstein t=10 V=100 C=1");
  auto* verify = app.add_subcommand("verify", "Run one registry verification; JSON report");
  auto* clt = app.add_subcommand("clt", "CLT diagnostics along params.n_grid (CSV)");
  auto* slln = app.add_subcommand("slln", "Complete-convergence tails along params.n_grid (CSV)");
  auto* oracle = app.add_subcommand("oracle", "Exact law of S_n for a finite-support generator");
  auto* suite = app.add_subcommand("suite", "Run every *.cfg in a directory");
  auto* list = app.add_subcommand("list", "List registry entries");

  for (auto* sub : {gen, check, stop, verify, clt, slln, oracle}) {
    add_common(sub, true);
    sub->add_option("overrides", common.overrides, "key=value config overrides");
  }
  bound->add_option("name", bound_name, "phi, phi_bound, mgf, h1, h1_lower, psi, bernstein, "
                                        "bernstein2, doob, lp, moment")
      ->required();
  bound->add_option("inputs", bound_args, "key=value inputs");
  bound->add_option("--out", common.out, "Output file");
  suite->add_option("directory", suite_dir, "Directory of configs")->required();
  add_common(suite, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(common);
    if (*check) return cmd_check_demi(common);
    if (*stop) return cmd_stop(common);
    if (*bound) return cmd_bound(bound_name, bound_args, common);
    if (*verify) return cmd_verify(common);
    if (*clt) return cmd_clt(common);
    if (*slln) return cmd_slln(common);
    if (*oracle) return cmd_oracle(common);
    if (*suite) return cmd_suite(suite_dir, common);
    if (*list) {
      for (const auto& e : demi::registry()) {
        std::cout << e.id;
        for (const auto& a : e.aliases) std::cout << ' ' << a;
        std::cout << "\n    " << e.summary << "\n";
      }
      return 0;
    }
  } catch (const demi::PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return demi::kExitPrecondition;
  } catch (const demi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return demi::kExitConfig;
  } catch (const demi::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return demi::kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return demi::kExitConfig;
  }
  return 0;
}
