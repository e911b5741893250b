#include "cochranq/report.hpp"

#include <algorithm>
#include <cstdio>

#include <fmt/format.h>

#include "cochranq/csv.hpp"

namespace cochranq::report {
namespace {

std::string join_ids(const std::vector<std::string>& ids, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i != 0) out += sep;
    out += ids[i];
  }
  return out;
}

std::string condition_text(const ConditionSpec& c) {
  const auto conv = to_string(c.convention);
  if (c.kind == ConditionKind::ConcordanceIndex)
    return fmt::format("concordance index {} {:g}% ({} convention)",
                       c.convention == Convention::Published ? ">" : ">=", c.ci_percent(), conv);
  return fmt::format("content validity ratio {} {:.3f} ({} convention)",
                     c.convention == Convention::Published ? ">" : ">=", c.cvr_threshold, conv);
}

std::string method_title(Method m) {
  switch (m) {
    case Method::Exact:
      return "exact permutation";
    case Method::MonteCarlo:
      return "Monte Carlo permutation";
    case Method::Asymptotic:
      return "chi-square approximation";
    case Method::Auto:
      break;
  }
  return "auto";
}

std::string decision_text(bool reject) { return reject ? "reject" : "do not reject"; }

}  // namespace

std::string exact_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json to_json(const QTestResult& r) {
  json j{{"q", r.q},
         {"df", r.df},
         {"p_value", r.p_value},
         {"method", to_string(r.method)},
         {"mc_std_error", nullptr},
         {"degenerate", r.degenerate},
         {"n_items", r.n_items},
         {"n_specialists", r.n_specialists}};
  if (r.mc_std_error) j["mc_std_error"] = *r.mc_std_error;
  return j;
}

json to_json(const ConditionSpec& c) {
  json j{{"kind", c.kind == ConditionKind::ConcordanceIndex ? "ci" : "cvr"},
         {"convention", to_string(c.convention)}};
  if (c.kind == ConditionKind::ConcordanceIndex)
    j["ci_percent"] = c.ci_percent();
  else
    j["cvr_threshold"] = c.cvr_threshold;
  return j;
}

json to_json(const JudgementMatrix& matrix, const RetentionResult& retention) {
  json retained = json::array();
  const auto& theo = matrix.theoretical();
  for (const auto& r : retention.retained) {
    json e{{"item", matrix.items()[r.item]}, {"dimension", matrix.label(r.dimension)}};
    if (theo) {
      const auto t = (*theo)[r.item];
      e["theoretical"] = matrix.label(t);
      e["agrees_with_theoretical"] = t == r.dimension;
    }
    retained.push_back(std::move(e));
  }
  json excluded = json::array();
  for (const auto& x : retention.excluded)
    excluded.push_back({{"item", matrix.items()[x.item]}, {"reason", to_string(x.reason)}});
  return {{"retained", std::move(retained)},
          {"excluded", std::move(excluded)},
          {"n_retained", retention.retained.size()},
          {"n_excluded", retention.excluded.size()}};
}

json to_json(const WMatrix& w) {
  json cells = json::array();
  for (std::size_t l = 0; l < w.n_items(); ++l) {
    json row = json::array();
    for (std::size_t j = 0; j < w.n_specialists(); ++j) row.push_back(int{w.at(l, j)});
    cells.push_back(std::move(row));
  }
  return {{"items", w.item_ids()},       {"specialists", w.specialist_ids()},
          {"cells", std::move(cells)},   {"row_totals", w.row_totals()},
          {"col_totals", w.col_totals()}, {"grand_total", w.grand_total()}};
}

json to_json(const PowerEstimate& e) {
  return {{"scenario", e.scenario},
          {"power", e.power},
          {"mc_std_error", e.mc_std_error},
          {"mean_retained", e.mean_retained_items},
          {"replicates", e.replicates},
          {"rejections", e.rejections},
          {"seed", e.seed}};
}

json to_json(const SubgroupEntry& e) {
  return {{"specialists", e.specialists},
          {"q", e.q},
          {"p_value", e.p_value},
          {"n_retained", e.n_retained},
          {"degenerate", e.degenerate}};
}

json to_json(const ScenarioSpec& spec) {
  json profiles = json::array();
  for (const auto& p : spec.specialists)
    profiles.push_back({{"p_correct", p.p_correct}, {"error_split", p.error_split}});
  return {{"name", spec.name},
          {"n_items", spec.n_items},
          {"n_dims", spec.n_dims},
          {"ci_percent", spec.ci_percent},
          {"alpha", spec.alpha},
          {"convention", to_string(spec.convention)},
          {"specialists", std::move(profiles)}};
}

ScenarioSpec scenario_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("scenario must be a JSON object");
  ScenarioSpec spec;
  try {
    spec.name = j.at("name").get<std::string>();
    spec.n_items = j.value("n_items", spec.n_items);
    spec.n_dims = j.value("n_dims", spec.n_dims);
    spec.ci_percent = j.value("ci_percent", spec.ci_percent);
    spec.alpha = j.value("alpha", spec.alpha);
    spec.convention = parse_convention(j.value("convention", std::string("standard")));
    for (const auto& p : j.at("specialists")) {
      if (p.is_number()) {
        spec.specialists.push_back(CapabilityProfile::symmetric(p.get<double>(), spec.n_dims));
        continue;
      }
      const double pc = p.at("p_correct").get<double>();
      if (p.contains("error_split"))
        spec.specialists.push_back({pc, p.at("error_split").get<std::vector<double>>()});
      else
        spec.specialists.push_back(CapabilityProfile::symmetric(pc, spec.n_dims));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed scenario: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::vector<ScenarioSpec> scenarios_from_json(const json& j) {
  std::vector<ScenarioSpec> out;
  if (j.is_array())
    for (const auto& s : j) out.push_back(scenario_from_json(s));
  else
    out.push_back(scenario_from_json(j));
  return out;
}

json analyze_json(const JudgementMatrix& matrix, const PanelAnalysis& analysis,
                  const ConditionSpec& condition, double alpha) {
  const bool reject = analysis.test.rejects(alpha);
  json j{{"command", "analyze"},
         {"input",
          {{"n_items", matrix.n_items()},
           {"n_specialists", matrix.n_specialists()},
           {"n_dims", matrix.n_dims()},
           {"dimensions", matrix.dimensions()},
           {"specialists", matrix.specialists()}}},
         {"condition", to_json(condition)},
         {"retention", to_json(matrix, analysis.retention)},
         {"w", to_json(analysis.w)},
         {"test", to_json(analysis.test)},
         {"alpha", alpha},
         {"reject", reject},
         {"decision", decision_text(reject)}};
  if (matrix.theoretical()) {
    std::size_t agree = 0;
    for (const auto& r : analysis.retention.retained)
      agree += (*matrix.theoretical())[r.item] == r.dimension ? 1 : 0;
    j["theoretical_agreement"] = {{"compared", analysis.retention.retained.size()},
                                  {"agree", agree}};
  }
  return j;
}

json subgroups_json(const SubgroupReport& report, const ConditionSpec& condition, double alpha,
                    std::size_t top) {
  json entries = json::array();
  const auto n = top == 0 ? report.entries.size() : std::min(top, report.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto e = to_json(report.entries[i]);
    e["reject"] = report.entries[i].p_value < alpha;
    entries.push_back(std::move(e));
  }
  return {{"command", "subgroups"},
          {"condition", to_json(condition)},
          {"alpha", alpha},
          {"n_subgroups", report.entries.size()},
          {"n_rejected", count_rejections(report, alpha)},
          {"entries", std::move(entries)}};
}

json power_json(const std::vector<PowerEstimate>& estimates) {
  json rows = json::array();
  for (const auto& e : estimates) rows.push_back(to_json(e));
  return {{"command", "power"}, {"results", std::move(rows)}};
}

std::string retention_csv(const JudgementMatrix& matrix, const RetentionResult& retention) {
  std::string out = "item,status,dimension,reason\n";
  std::size_t r = 0, x = 0;
  for (std::size_t i = 0; i < matrix.n_items(); ++i) {
    if (r < retention.retained.size() && retention.retained[r].item == i) {
      out += csv::join({matrix.items()[i], "retained", matrix.label(retention.retained[r].dimension), ""});
      ++r;
    } else if (x < retention.excluded.size() && retention.excluded[x].item == i) {
      out += csv::join({matrix.items()[i], "excluded", "", std::string(to_string(retention.excluded[x].reason))});
      ++x;
    }
    out += '\n';
  }
  return out;
}

std::string w_matrix_csv(const WMatrix& w) {
  std::vector<std::string> fields{"item"};
  fields.insert(fields.end(), w.specialist_ids().begin(), w.specialist_ids().end());
  std::string out = csv::join(fields) + "\n";
  for (std::size_t l = 0; l < w.n_items(); ++l) {
    fields.assign({w.item_ids()[l]});
    for (std::size_t j = 0; j < w.n_specialists(); ++j) fields.push_back(w.at(l, j) ? "1" : "0");
    out += csv::join(fields) + "\n";
  }
  return out;
}

std::string power_csv(const std::vector<PowerEstimate>& estimates) {
  std::string out = "scenario,power,mc_std_error,mean_retained,replicates,seed\n";
  for (const auto& e : estimates) {
    out += csv::join({e.scenario, exact_real(e.power), exact_real(e.mc_std_error),
                      exact_real(e.mean_retained_items), std::to_string(e.replicates),
                      std::to_string(e.seed)});
    out += '\n';
  }
  return out;
}

std::string analyze_text(const JudgementMatrix& matrix, const PanelAnalysis& analysis,
                         const ConditionSpec& condition, double alpha) {
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };
  const auto& ret = analysis.retention;
  const auto& theo = matrix.theoretical();
  line(fmt::format("Judgements: {} items, {} specialists, {} dimensions ({})", matrix.n_items(),
                   matrix.n_specialists(), matrix.n_dims(), join_ids(matrix.dimensions(), ", ")));
  line("Condition: " + condition_text(condition));
  line("");
  line(fmt::format("Retained items ({}):", ret.retained.size()));
  if (theo)
    line(fmt::format("  {:<10} {:<10} {:<12} {}", "item", "dimension", "theoretical", "agrees"));
  else
    line(fmt::format("  {:<10} {}", "item", "dimension"));
  std::size_t agree = 0;
  for (const auto& r : ret.retained) {
    if (theo) {
      const auto t = (*theo)[r.item];
      agree += t == r.dimension ? 1 : 0;
      line(fmt::format("  {:<10} {:<10} {:<12} {}", matrix.items()[r.item], matrix.label(r.dimension),
                       matrix.label(t), t == r.dimension ? "yes" : "no"));
    } else {
      line(fmt::format("  {:<10} {}", matrix.items()[r.item], matrix.label(r.dimension)));
    }
  }
  if (theo)
    line(fmt::format("  agreement with theoretical dimension: {}/{}", agree, ret.retained.size()));
  line("");
  line(fmt::format("Excluded items ({}):", ret.excluded.size()));
  for (const auto& x : ret.excluded)
    line(fmt::format("  {:<10} {}", matrix.items()[x.item], to_string(x.reason)));
  line("");

  const auto& w = analysis.w;
  line(fmt::format("Agreement table: {} rows", w.n_items()));
  std::string header = fmt::format("  {:<12}", "specialist");
  std::string totals = fmt::format("  {:<12}", "total");
  for (std::size_t j = 0; j < w.n_specialists(); ++j) {
    const auto width = std::max<std::size_t>(3, w.specialist_ids()[j].size() + 1);
    header += fmt::format("{:>{}}", w.specialist_ids()[j], width);
    totals += fmt::format("{:>{}}", w.col_totals()[j], width);
  }
  line(header);
  line(totals);
  line(fmt::format("  N = {}", w.grand_total()));
  line("");

  const auto& t = analysis.test;
  line(fmt::format("Cochran's Q test ({})", method_title(t.method)));
  line(fmt::format("  Q = {:.3f}  df = {}  p-value = {:.3f}", t.q, t.df, t.p_value));
  if (t.mc_std_error) line(fmt::format("  Monte Carlo standard error = {:.4f}", *t.mc_std_error));
  if (t.degenerate)
    line("  degenerate: every agreement row is unanimous; Q is defined as 0 and p as 1");
  line(fmt::format("Decision at alpha = {:.3f}: {} H0", alpha, decision_text(t.rejects(alpha))));
  return out;
}

std::string subgroups_text(const SubgroupReport& report, double alpha, std::size_t top) {
  std::string out = fmt::format("Subgroups analysed: {}; rejected at alpha = {:.3f}: {}\n",
                                report.entries.size(), alpha, count_rejections(report, alpha));
  out += fmt::format("{:<28} {:>8} {:>8} {:>9}\n", "specialists", "Q", "p-value", "retained");
  const auto n = top == 0 ? report.entries.size() : std::min(top, report.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = report.entries[i];
    out += fmt::format("{:<28} {:>8.3f} {:>8.3f} {:>9}{}\n", "(" + join_ids(e.specialists, ",") + ")",
                       e.q, e.p_value, e.n_retained, e.degenerate ? "  degenerate" : "");
  }
  return out;
}

std::string power_text(const std::vector<PowerEstimate>& estimates) {
  std::size_t width = 14;
  for (const auto& e : estimates) width = std::max(width, e.scenario.size());
  std::string out = fmt::format("{:<{}} {:>7} {:>9} {:>9} {:>11} {:>20}\n", "scenario", width,
                                "power", "std.err", "retained", "replicates", "seed");
  for (const auto& e : estimates)
    out += fmt::format("{:<{}} {:>7.3f} {:>9.3f} {:>9.3f} {:>11} {:>20}\n", e.scenario, width,
                       e.power, e.mc_std_error, e.mean_retained_items, e.replicates, e.seed);
  return out;
}

}  // namespace cochranq::report
