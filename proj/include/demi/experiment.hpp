#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "demi/core.hpp"
#include "demi/harness.hpp"
#include "demi/instance.hpp"

namespace demi {

/// One experiment, read from a flat `key = value` document:
///
///   experiment_id = bern-n100
///   theorem_id = T4.7
///   seed = 7
///   mode = monte_carlo          # or exact
///   paths = 1000000
///   generator.family = iid
///   generator.law = rademacher
///   generator.horizon = 100
///   params.t = 10
struct ExperimentConfig {
  std::string experiment_id;
  std::string theorem_id;
  Instance instance;
  Params params;
  Mode mode = MonteCarlo{};
  std::uint64_t seed = 0;
  double tolerance_z = 3.0;

  Tolerance tolerance() const {
    Tolerance t;
    t.z = tolerance_z;
    return t;
  }
};

/// Raw key/value pairs in file order; duplicate keys raise ConfigError.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

/// Builds a config from key/value pairs. Missing seed raises
/// ConfigError("seed", "required"). theorem_id may be empty for commands
/// that only need a generator.
ExperimentConfig build_config(const std::vector<std::pair<std::string, std::string>>& pairs);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

GeneratorSpec parse_generator(const std::map<std::string, std::string>& fields);
CovarianceModel parse_covariance(std::string_view text);

/// JSON document with exactly the fields experiment_id, theorem_id,
/// generator, params, mode, seed, lhs {mean, stderr}, rhs, direction,
/// z_margin, verdict, exact, runtime_ms. Numbers carry 12 significant digits;
/// infinities are written as null.
std::string report_json(const ExperimentConfig& config, const VerificationReport& report,
                        double runtime_ms);

struct RunResult {
  VerificationReport report;
  double runtime_ms = 0.0;
  std::string json;
};

/// Validates and runs one experiment.
RunResult run_experiment(const ExperimentConfig& config);

/// Exit status for a verdict: PASS 0, FAIL 1, INCONCLUSIVE 2.
int exit_code(Verdict v);
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitConfig = 4;

/// Path CSV with header path_id,step,value.
void write_paths_csv(std::ostream& out, const ProcessEnsemble& ensemble);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct SuiteRow {
  std::string file;
  std::string experiment_id;
  std::string theorem_id;
  /// PASS, FAIL, INCONCLUSIVE or ERROR.
  std::string status;
  double z_margin = 0.0;
  double runtime_ms = 0.0;
  std::string error;
};

struct SuiteSummary {
  std::vector<SuiteRow> rows;
  int exit_code = 0;
  std::string json;
};

/// Runs every *.cfg file of `directory` in name order. Config and
/// precondition errors abort that experiment only (status ERROR); a
/// repeated experiment_id is an ERROR on the later file. When `out` is set,
/// per-experiment reports and summary.json are written there.
/// Exit code: 1 on any FAIL, else 3 on any ERROR, else 2 on any
/// INCONCLUSIVE, else 0.
SuiteSummary run_suite(const std::filesystem::path& directory,
                       const std::optional<std::filesystem::path>& out,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

}  // namespace demi
