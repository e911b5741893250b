#include "cochranq/subgroup.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>

#include <omp.h>

#include "cochranq/csv.hpp"
#include "cochranq/pipeline.hpp"
#include "cochranq/report.hpp"

namespace cochranq {
namespace {

void append_combinations(std::size_t s, std::size_t k, std::vector<Subset>& out) {
  Subset idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == s - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::size_t resolved_max(const JudgementMatrix& matrix, const SubgroupOptions& options) {
  return options.max_size == 0 ? matrix.n_specialists() - 1 : options.max_size;
}

SubgroupEntry analyze_one(const JudgementMatrix& matrix, const ConditionSpec& condition,
                          const SubgroupOptions& options, const Subset& columns) {
  const auto panel = matrix.restrict_specialists(columns);
  auto budget = options.budget;
  budget.workers = 1;
  const auto analysis = analyze_panel(panel, condition, options.method, budget);
  SubgroupEntry e;
  e.specialists = panel.specialists();
  e.columns = columns;
  e.q = analysis.test.q;
  e.p_value = analysis.test.p_value;
  e.n_retained = analysis.retention.retained.size();
  e.degenerate = analysis.test.degenerate;
  return e;
}

std::vector<Subset> subsets_for(const JudgementMatrix& matrix, const SubgroupOptions& options) {
  return enumerate_subgroups(matrix.n_specialists(), options.min_size,
                             resolved_max(matrix, options), options.include_full);
}

void rank(SubgroupReport& report) {
  std::sort(report.entries.begin(), report.entries.end(), ranks_before);
}

double parse_real(const std::string& text, std::size_t line, std::size_t column) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw ParseError(line, column, "expected a number, found '" + text + "'");
  return v;
}

}  // namespace

std::vector<Subset> enumerate_subgroups(std::size_t s, std::size_t min_size, std::size_t max_size,
                                        bool include_full) {
  if (min_size < 2 || min_size > max_size || max_size > s)
    throw InvalidArgument("subgroup sizes must satisfy 2 <= min (" + std::to_string(min_size) +
                          ") <= max (" + std::to_string(max_size) + ") <= s (" +
                          std::to_string(s) + ")");
  std::vector<Subset> out;
  for (std::size_t k = min_size; k <= max_size; ++k) append_combinations(s, k, out);
  if (include_full && max_size < s) append_combinations(s, s, out);
  return out;
}

bool ranks_before(const SubgroupEntry& a, const SubgroupEntry& b) {
  if (a.p_value != b.p_value) return a.p_value > b.p_value;
  if (a.specialists.size() != b.specialists.size())
    return a.specialists.size() > b.specialists.size();
  return a.specialists < b.specialists;
}

SubgroupReport analyze_subgroups_serial(const JudgementMatrix& matrix,
                                        const ConditionSpec& condition,
                                        const SubgroupOptions& options) {
  const auto subsets = subsets_for(matrix, options);
  SubgroupReport report;
  report.entries.reserve(subsets.size());
  for (const auto& subset : subsets)
    report.entries.push_back(analyze_one(matrix, condition, options, subset));
  rank(report);
  return report;
}

SubgroupReport analyze_subgroups(const JudgementMatrix& matrix, const ConditionSpec& condition,
                                 const SubgroupOptions& options) {
  const auto subsets = subsets_for(matrix, options);
  SubgroupReport report;
  report.entries.resize(subsets.size());
  const auto n = static_cast<std::int64_t>(subsets.size());
  const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
  // Exceptions may not cross the parallel region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      report.entries[static_cast<std::size_t>(i)] =
          analyze_one(matrix, condition, options, subsets[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(cochranq_subgroup_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  rank(report);
  return report;
}

std::size_t count_rejections(const SubgroupReport& report, double alpha) {
  return static_cast<std::size_t>(std::count_if(
      report.entries.begin(), report.entries.end(),
      [alpha](const SubgroupEntry& e) { return e.p_value < alpha; }));
}

std::string write_subgroup_csv(const SubgroupReport& report, std::size_t top) {
  std::string out = "subset,q,p_value,n_retained,degenerate\n";
  const auto n = top == 0 ? report.entries.size() : std::min(top, report.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = report.entries[i];
    std::string subset;
    for (std::size_t j = 0; j < e.specialists.size(); ++j) {
      if (j != 0) subset.push_back('+');
      subset += e.specialists[j];
    }
    out += csv::join({subset, report::exact_real(e.q), report::exact_real(e.p_value),
                      std::to_string(e.n_retained), e.degenerate ? "true" : "false"});
    out += '\n';
  }
  return out;
}

SubgroupReport parse_subgroup_csv(std::string_view text) {
  const auto records = csv::read(text);
  if (records.empty() || records.front().fields !=
                             std::vector<std::string>{"subset", "q", "p_value", "n_retained",
                                                      "degenerate"})
    throw ParseError(1, 0, "expected header 'subset,q,p_value,n_retained,degenerate'");
  SubgroupReport report;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 5)
      throw ParseError(rec.line, 0, "expected 5 fields, found " + std::to_string(rec.fields.size()));
    SubgroupEntry e;
    std::string_view subset = rec.fields[0];
    while (true) {
      const auto plus = subset.find('+');
      e.specialists.emplace_back(subset.substr(0, plus));
      if (e.specialists.back().empty()) throw ParseError(rec.line, 1, "empty specialist id");
      if (plus == std::string_view::npos) break;
      subset.remove_prefix(plus + 1);
    }
    e.q = parse_real(rec.fields[1], rec.line, 2);
    e.p_value = parse_real(rec.fields[2], rec.line, 3);
    const auto& count = rec.fields[3];
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), e.n_retained);
    if (ec != std::errc{} || ptr != count.data() + count.size())
      throw ParseError(rec.line, 4, "expected a count, found '" + count + "'");
    if (rec.fields[4] != "true" && rec.fields[4] != "false")
      throw ParseError(rec.line, 5, "expected true or false");
    e.degenerate = rec.fields[4] == "true";
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace cochranq
