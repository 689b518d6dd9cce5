#include "demi/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "demi/registry.hpp"
#include "detail/text.hpp"

namespace demi {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "experiment_id", "theorem_id", "seed", "mode", "paths", "tolerance_z",
    "stopping", "stopping.direction", "stopping2", "stopping2.direction"};

const std::set<std::string> kGeneratorKeys = {"family",     "law",   "horizon", "shock",
                                              "coefficients", "covariance", "inner", "start"};

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(field, "'" + text + "' is not an unsigned integer");
  }
  return v;
}

double parse_number(const std::string& text, const std::string& field) {
  try {
    return detail::parse_double(text, field);
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError&) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
}

StoppingRule parse_rule(const std::map<std::string, std::string>& kv, const std::string& key) {
  StoppingRule rule = [&] {
    try {
      return parse_stopping_rule(kv.at(key));
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& e) {
      throw ConfigError(key, e.what());
    }
  }();
  if (const auto it = kv.find(key + ".direction"); it != kv.end()) {
    try {
      rule = rule.with_direction(parse_monotonicity(it->second));
    } catch (const DomainError& e) {
      throw ConfigError(key + ".direction", e.what());
    }
  }
  return rule;
}

/// 12 significant digits, infinities and NaN as null.
ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(detail::format_number(v));
}

ordered_json param_value(const std::string& text) {
  try {
    return number(detail::parse_double(text, "param"));
  } catch (const DomainError&) {
    return text;
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    std::string key = detail::trim(std::string_view(trimmed).substr(0, eq));
    std::string value = detail::trim(std::string_view(trimmed).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    if (!seen.insert(key).second) throw ConfigError(key, "given twice");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

CovarianceModel parse_covariance(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.empty()) throw ConfigError("generator.covariance", "empty");
  CovarianceModel m;
  auto num = [&](std::size_t i) { return parse_number(parts.at(i), "generator.covariance"); };
  const std::string& kind = parts[0];
  if (kind == "diag" && parts.size() <= 2) {
    m.kind = CovarianceModel::Kind::kDiagonal;
    if (parts.size() == 2) m.variance = num(1);
  } else if ((kind == "equi" || kind == "ar1") && (parts.size() == 2 || parts.size() == 3)) {
    m.kind = kind == "equi" ? CovarianceModel::Kind::kEquicorrelated : CovarianceModel::Kind::kAr1;
    m.rho = num(1);
    if (parts.size() == 3) m.variance = num(2);
  } else if (kind == "explicit" && parts.size() == 2) {
    m.kind = CovarianceModel::Kind::kExplicit;
    for (const auto& v : detail::split(parts[1], ',')) {
      m.matrix.push_back(parse_number(v, "generator.covariance"));
    }
  } else {
    throw ConfigError("generator.covariance",
                      "expected diag[:var], equi:rho[:var], ar1:rho[:var] or explicit:a,b,...");
  }
  return m;
}

GeneratorSpec parse_generator(const std::map<std::string, std::string>& fields) {
  for (const auto& [key, value] : fields) {
    if (!kGeneratorKeys.count(key)) throw ConfigError("generator." + key, "unknown key");
  }
  GeneratorSpec spec;
  auto field = [&](const std::string& key) -> const std::string* {
    const auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };
  auto wrap = [](const std::string& name, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& e) {
      throw ConfigError("generator." + name, e.what());
    }
  };
  const std::string* family = field("family");
  if (!family) throw ConfigError("generator.family", "required");
  spec.family = wrap("family", [&] { return parse_family(*family); });
  const std::string* horizon = field("horizon");
  if (!horizon) throw ConfigError("generator.horizon", "required");
  spec.horizon = parse_u64(*horizon, "generator.horizon");
  if (const auto* v = field("law")) spec.law = wrap("law", [&] { return ScalarLaw::parse(*v); });
  if (const auto* v = field("shock")) {
    spec.shock = wrap("shock", [&] { return ScalarLaw::parse(*v); });
  }
  if (const auto* v = field("coefficients")) {
    for (const auto& c : detail::split(*v, ',')) {
      spec.coefficients.push_back(parse_number(c, "generator.coefficients"));
    }
  }
  if (const auto* v = field("covariance")) spec.covariance = parse_covariance(*v);
  if (const auto* v = field("inner")) spec.inner = wrap("inner", [&] { return parse_family(*v); });
  if (const auto* v = field("start")) spec.start = parse_number(*v, "generator.start");
  wrap("family", [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

ExperimentConfig build_config(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::string> top;
  std::map<std::string, std::string> gen;
  std::map<std::string, std::string> params;
  for (const auto& [key, value] : pairs) {
    if (key.rfind("generator.", 0) == 0) {
      gen[key.substr(10)] = value;
    } else if (key.rfind("params.", 0) == 0) {
      params[key.substr(7)] = value;
    } else if (kTopLevelKeys.count(key)) {
      top[key] = value;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  ExperimentConfig c;
  const auto seed = top.find("seed");
  if (seed == top.end()) throw ConfigError("seed", "required");
  c.seed = parse_u64(seed->second, "seed");
  c.experiment_id = top.count("experiment_id") ? top["experiment_id"] : "";
  c.theorem_id = top.count("theorem_id") ? top["theorem_id"] : "";
  if (top.count("tolerance_z")) {
    c.tolerance_z = parse_number(top["tolerance_z"], "tolerance_z");
    if (!(c.tolerance_z > 0.0)) throw ConfigError("tolerance_z", "must be positive");
  }
  const std::string mode = top.count("mode") ? top["mode"] : "monte_carlo";
  if (mode == "exact") {
    c.mode = Exact{};
  } else if (mode == "monte_carlo") {
    const std::size_t paths = top.count("paths") ? parse_u64(top["paths"], "paths") : 100000;
    if (paths < 2) throw ConfigError("paths", "must be at least 2");
    c.mode = MonteCarlo{paths, c.seed};
  } else {
    throw ConfigError("mode", "expected exact or monte_carlo");
  }

  if (gen.empty()) {
    // Statements without a process (the lemma grid) still carry a nominal one.
    gen = {{"family", "iid"}, {"horizon", "1"}};
  }
  c.instance.generator = parse_generator(gen);
  c.instance.seed = c.seed;
  if (top.count("stopping")) c.instance.stopping = parse_rule(top, "stopping");
  if (top.count("stopping2")) c.instance.stopping2 = parse_rule(top, "stopping2");
  for (const auto& key : {std::string("stopping.direction"), std::string("stopping2.direction")}) {
    if (top.count(key) && !top.count(key.substr(0, key.find('.')))) {
      throw ConfigError(key, "given without a rule");
    }
  }
  c.params = Params(std::move(params));
  return c;
}

ExperimentConfig parse_config(std::string_view text) { return build_config(parse_key_values(text)); }

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string report_json(const ExperimentConfig& config, const VerificationReport& report,
                        double runtime_ms) {
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : config.params.values()) params[key] = param_value(value);
  ordered_json mode = ordered_json::object();
  if (const auto* mc = std::get_if<MonteCarlo>(&config.mode)) {
    mode["kind"] = "monte_carlo";
    mode["paths"] = mc->paths;
  } else {
    mode["kind"] = "exact";
  }
  ordered_json j = ordered_json::object();
  j["experiment_id"] = config.experiment_id;
  j["theorem_id"] = report.theorem_id;
  j["generator"] = config.instance.generator.id();
  j["params"] = std::move(params);
  j["mode"] = std::move(mode);
  j["seed"] = config.seed;
  j["lhs"] = {{"mean", number(report.lhs.mean)}, {"stderr", number(report.lhs.std_error)}};
  j["rhs"] = number(report.rhs);
  j["direction"] = to_string(report.direction);
  j["z_margin"] = number(report.z_margin);
  j["verdict"] = to_string(report.verdict);
  j["exact"] = report.exact;
  j["runtime_ms"] = number(runtime_ms);
  return j.dump(2) + "\n";
}

RunResult run_experiment(const ExperimentConfig& config) {
  if (config.theorem_id.empty()) throw ConfigError("theorem_id", "required");
  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  r.report = verify(config.theorem_id, config.instance, config.params, config.mode,
                    config.tolerance());
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.json = report_json(config, r.report, r.runtime_ms);
  return r;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return 0;
    case Verdict::kFail:
      return 1;
    case Verdict::kInconclusive:
      return 2;
  }
  return 2;
}

void write_paths_csv(std::ostream& out, const ProcessEnsemble& ensemble) {
  out << "path_id,step,value\n";
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto path = ensemble.path(i);
    for (std::size_t k = 0; k < path.size(); ++k) {
      out << i << ',' << k + 1 << ',' << detail::format_number(path[k]) << '\n';
    }
  }
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out", "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw ConfigError("out", "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

SuiteSummary run_suite(const fs::path& directory, const std::optional<fs::path>& out,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  if (!fs::is_directory(directory)) {
    throw ConfigError("suite", directory.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  SuiteSummary summary;
  std::set<std::string> ids;
  bool any_fail = false, any_error = false, any_inconclusive = false;
  for (const auto& file : files) {
    SuiteRow row;
    row.file = file.filename().string();
    try {
      std::ifstream in(file);
      std::stringstream buf;
      buf << in.rdbuf();
      auto pairs = parse_key_values(buf.str());
      for (const auto& [key, value] : overrides) {
        bool replaced = false;
        for (auto& p : pairs) {
          if (p.first == key) {
            p.second = value;
            replaced = true;
          }
        }
        if (!replaced) pairs.emplace_back(key, value);
      }
      const ExperimentConfig config = build_config(pairs);
      row.experiment_id = config.experiment_id.empty() ? file.stem().string() : config.experiment_id;
      row.theorem_id = config.theorem_id;
      if (!ids.insert(row.experiment_id).second) {
        throw ConfigError("experiment_id", "duplicate '" + row.experiment_id + "'");
      }
      ExperimentConfig named = config;
      named.experiment_id = row.experiment_id;
      const RunResult result = run_experiment(named);
      row.theorem_id = result.report.theorem_id;
      row.status = to_string(result.report.verdict);
      row.z_margin = result.report.z_margin;
      row.runtime_ms = result.runtime_ms;
      if (out) write_file_atomic(*out / (row.experiment_id + ".json"), result.json);
      any_fail |= result.report.verdict == Verdict::kFail;
      any_inconclusive |= result.report.verdict == Verdict::kInconclusive;
    } catch (const PreconditionError& e) {
      row.status = "ERROR";
      row.error = std::string("precondition: ") + e.what();
      any_error = true;
    } catch (const DomainError& e) {
      row.status = "ERROR";
      row.error = e.what();
      any_error = true;
    }
    summary.rows.push_back(std::move(row));
  }
  summary.exit_code = any_fail ? 1 : any_error ? 3 : any_inconclusive ? 2 : 0;

  ordered_json rows = ordered_json::array();
  for (const auto& row : summary.rows) {
    ordered_json j;
    j["file"] = row.file;
    j["experiment_id"] = row.experiment_id;
    j["theorem_id"] = row.theorem_id;
    j["verdict"] = row.status;
    j["z_margin"] = row.status == "ERROR" ? ordered_json(nullptr) : number(row.z_margin);
    j["runtime_ms"] = number(row.runtime_ms);
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  ordered_json doc;
  doc["experiments"] = std::move(rows);
  doc["exit_code"] = summary.exit_code;
  summary.json = doc.dump(2) + "\n";
  if (out) write_file_atomic(*out / "summary.json", summary.json);
  return summary;
}

}  // namespace demi
