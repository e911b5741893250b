#include "cochranq/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cochranq/cochran.hpp"
#include "cochranq/judgement.hpp"
#include "cochranq/pipeline.hpp"
#include "cochranq/powersim.hpp"
#include "cochranq/report.hpp"
#include "cochranq/subgroup.hpp"

namespace cochranq::cli {
namespace {

/// Failure to read or parse an input file (exit 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inconsistent flags or flag values (exit 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Text, Json, Csv };

struct RunConfig {
  std::string input;
  std::optional<double> ci;
  std::optional<double> cvr;
  std::string method = "auto";
  double alpha = 0.05;
  std::uint64_t mc_reps = kDefaultMcReplicates;
  std::uint64_t exact_cutoff = kDefaultExactCutoff;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "text";
  std::string convention = "standard";
  std::vector<std::string> dimensions;
  std::size_t min_specialists = kDefaultMinSpecialists;
  int workers = 0;
  std::string retention_csv;
  std::string w_csv;
  // subgroups
  std::size_t top = 0;
  std::size_t min_size = 6;
  std::size_t max_size = 0;
  bool no_full = false;
  // power
  std::string builtin;
  std::string scenario_file;
  std::size_t replicates = 10'000;
  std::uint64_t power_seed = 42;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError("error reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

Format parse_format(const std::string& f) {
  if (f == "text") return Format::Text;
  if (f == "json") return Format::Json;
  if (f == "csv") return Format::Csv;
  throw ConfigError("unknown format '" + f + "'");
}

template <typename F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ConditionSpec condition_from(const RunConfig& c) {
  if (c.ci && c.cvr) throw ConfigError("--ci and --cvr are mutually exclusive");
  return as_config_error([&] {
    const auto conv = parse_convention(c.convention);
    if (c.cvr) return ConditionSpec::content_validity(*c.cvr, conv);
    return ConditionSpec::concordance(c.ci.value_or(50.0), conv);
  });
}

PermutationBudget budget_from(const RunConfig& c) {
  if (c.exact_cutoff < 1) throw ConfigError("--exact-cutoff must be >= 1");
  if (c.mc_reps < kMinMcReplicates)
    throw ConfigError("--mc-reps must be >= " + std::to_string(kMinMcReplicates));
  return {c.exact_cutoff, c.mc_reps, c.seed, c.workers};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
}

JudgementMatrix load_matrix(const RunConfig& c, std::ostream& err) {
  const auto text = read_file(c.input);
  ParseOptions options;
  if (!c.dimensions.empty()) options.dimensions = c.dimensions;
  JudgementMatrix matrix;
  try {
    matrix = parse_judgement_csv(text, options);
  } catch (const ParseError& e) {
    throw InputError(c.input + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InputError(c.input + ": " + e.what());
  }
  const auto report = validate_matrix(matrix, c.min_specialists);
  for (const auto& w : report.warnings) err << "warning: " << w.location << ": " << w.message << '\n';
  if (!report.accepted()) {
    std::string msg = c.input + ": matrix rejected";
    for (const auto& e : report.errors) msg += "\n  " + e.location + ": " + e.message;
    throw InputError(msg);
  }
  return matrix;
}

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(c.format);
  check_alpha(c.alpha);
  const auto condition = condition_from(c);
  const auto budget = budget_from(c);
  const auto method = as_config_error([&] { return parse_method(c.method); });
  const auto matrix = load_matrix(c, err);
  PanelAnalysis analysis;
  try {
    analysis = analyze_panel(matrix, condition, method, budget);
  } catch (const ArrangementLimitExceeded& e) {
    throw ConfigError(std::string(e.what()) + "; use --method mc or raise --exact-cutoff");
  }
  if (!c.retention_csv.empty())
    write_file(c.retention_csv, report::retention_csv(matrix, analysis.retention));
  if (!c.w_csv.empty()) write_file(c.w_csv, report::w_matrix_csv(analysis.w));

  switch (format) {
    case Format::Text:
      out << report::analyze_text(matrix, analysis, condition, c.alpha);
      break;
    case Format::Json:
      out << report::analyze_json(matrix, analysis, condition, c.alpha).dump(2) << '\n';
      break;
    case Format::Csv: {
      const auto& t = analysis.test;
      out << "n_retained,q,df,p_value,method,mc_std_error,degenerate,alpha,decision\n";
      out << analysis.retention.retained.size() << ',' << report::exact_real(t.q) << ',' << t.df
          << ',' << report::exact_real(t.p_value) << ',' << to_string(t.method) << ','
          << (t.mc_std_error ? report::exact_real(*t.mc_std_error) : "") << ','
          << (t.degenerate ? "true" : "false") << ',' << report::exact_real(c.alpha) << ','
          << (t.rejects(c.alpha) ? "reject" : "do not reject") << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_subgroups(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(c.format);
  check_alpha(c.alpha);
  const auto condition = condition_from(c);
  SubgroupOptions options;
  options.budget = budget_from(c);
  options.method = as_config_error([&] { return parse_method(c.method); });
  options.min_size = c.min_size;
  options.max_size = c.max_size;
  options.include_full = !c.no_full;
  options.workers = c.workers;
  const auto matrix = load_matrix(c, err);
  const auto max_size = options.max_size == 0 ? matrix.n_specialists() - 1 : options.max_size;
  as_config_error([&] {
    return enumerate_subgroups(matrix.n_specialists(), options.min_size, max_size,
                               options.include_full)
        .size();
  });
  SubgroupReport report;
  try {
    report = analyze_subgroups(matrix, condition, options);
  } catch (const ArrangementLimitExceeded& e) {
    throw ConfigError(std::string(e.what()) + "; use --method mc or raise --exact-cutoff");
  }
  switch (format) {
    case Format::Text:
      out << report::subgroups_text(report, c.alpha, c.top);
      break;
    case Format::Json:
      out << report::subgroups_json(report, condition, c.alpha, c.top).dump(2) << '\n';
      break;
    case Format::Csv:
      out << write_subgroup_csv(report, c.top);
      break;
  }
  return kExitOk;
}

int cmd_power(const RunConfig& c, std::ostream& out, bool convention_given) {
  const auto format = parse_format(c.format);
  if (c.builtin.empty() == c.scenario_file.empty())
    throw ConfigError("exactly one of --builtin or --scenario is required");
  if (c.replicates < kMinPowerReplicates)
    throw ConfigError("--replicates must be >= " + std::to_string(kMinPowerReplicates));
  const auto convention = as_config_error([&] { return parse_convention(c.convention); });

  std::vector<ScenarioSpec> scenarios;
  if (!c.builtin.empty()) {
    for (auto& s : builtin_scenarios(convention))
      if (c.builtin == "all" || c.builtin == s.name) scenarios.push_back(std::move(s));
    if (scenarios.empty()) throw ConfigError("unknown builtin scenario '" + c.builtin + "'");
  } else {
    const auto text = read_file(c.scenario_file);
    report::json j;
    try {
      j = report::json::parse(text);
    } catch (const report::json::parse_error& e) {
      throw InputError(c.scenario_file + ": " + e.what());
    }
    scenarios = as_config_error([&] { return report::scenarios_from_json(j); });
    if (convention_given)
      for (auto& s : scenarios) s.convention = convention;
  }

  std::vector<PowerEstimate> estimates;
  for (const auto& s : scenarios) estimates.push_back(estimate_power(s, c.replicates, c.power_seed, c.workers));
  switch (format) {
    case Format::Text:
      out << report::power_text(estimates);
      break;
    case Format::Json:
      out << report::power_json(estimates).dump(2) << '\n';
      break;
    case Format::Csv:
      out << report::power_csv(estimates);
      break;
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--format", c.format, "Output format: text, json or csv")->capture_default_str();
  cmd->add_option("--workers", c.workers, "OpenMP threads (0 = runtime default); output is unaffected");
}

void add_panel_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--input", c.input, "Judgement CSV file")->required();
  cmd->add_option("--ci", c.ci, "Concordance index percent in [50, 100] (default 50)");
  cmd->add_option("--cvr", c.cvr, "Content validity ratio threshold in [-1, 1]");
  cmd->add_option("--method", c.method, "exact, mc, asymptotic or auto")->capture_default_str();
  cmd->add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
  cmd->add_option("--mc-reps", c.mc_reps, "Monte Carlo replicates")->capture_default_str();
  cmd->add_option("--exact-cutoff", c.exact_cutoff, "Largest arrangement count enumerated exactly")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Monte Carlo seed")->capture_default_str();
  cmd->add_option("--convention", c.convention,
                  "standard, or published to reproduce the published tables")
      ->capture_default_str();
  cmd->add_option("--dimensions", c.dimensions, "Declared dimension labels (comma separated)")
      ->delimiter(',');
  cmd->add_option("--min-specialists", c.min_specialists, "Smallest accepted panel")
      ->capture_default_str();
  add_common(cmd, c);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Content analysis of items: Cochran's Q test of specialist homogeneity", "cochranq"};
  app.require_subcommand(1);
  RunConfig config;

  auto* analyze = app.add_subcommand("analyze", "Retain items, build the agreement table and test it");
  add_panel_options(analyze, config);
  analyze->add_option("--retention-csv", config.retention_csv, "Also write the retention table here");
  analyze->add_option("--w-csv", config.w_csv, "Also write the agreement table here");

  auto* subgroups = app.add_subcommand("subgroups", "Test every specialist subgroup and rank by p-value");
  add_panel_options(subgroups, config);
  subgroups->add_option("--top", config.top, "Show only the first K entries (0 = all)");
  subgroups->add_option("--min-size", config.min_size, "Smallest subgroup")->capture_default_str();
  subgroups->add_option("--max-size", config.max_size, "Largest subgroup (default s - 1)");
  subgroups->add_flag("--no-full", config.no_full, "Leave out the full panel");

  auto* power = app.add_subcommand("power", "Estimate test power by simulation");
  power->add_option("--builtin", config.builtin, "Built-in scenario name or 'all'");
  power->add_option("--scenario", config.scenario_file, "Scenario JSON file");
  power->add_option("--replicates", config.replicates, "Simulated panels per scenario")
      ->capture_default_str();
  power->add_option("--seed", config.power_seed, "Master seed")->capture_default_str();
  auto* power_convention =
      power->add_option("--convention", config.convention, "standard or published");
  add_common(power, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(config, out, err);
    if (subgroups->parsed()) return cmd_subgroups(config, out, err);
    return cmd_power(config, out, power_convention->count() > 0);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace cochranq::cli
