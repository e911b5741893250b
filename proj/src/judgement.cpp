#include "cochranq/judgement.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "cochranq/csv.hpp"

namespace cochranq {
namespace {

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (id.empty()) throw InvalidArgument(std::string("empty ") + what + " id");
    if (!seen.insert(id).second) throw InvalidArgument(std::string("duplicate ") + what + " id '" + id + "'");
  }
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

template <typename Range>
std::optional<std::size_t> find_index(const Range& ids, std::string_view id) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

JudgementMatrix::JudgementMatrix(std::vector<std::string> items,
                                 std::vector<std::string> specialists,
                                 std::vector<std::string> dimensions, std::vector<DimIndex> cells,
                                 std::optional<std::vector<DimIndex>> theoretical)
    : items_(std::move(items)),
      specialists_(std::move(specialists)),
      dimensions_(std::move(dimensions)),
      cells_(std::move(cells)),
      theoretical_(std::move(theoretical)) {
  require_unique(items_, "item");
  require_unique(specialists_, "specialist");
  require_unique(dimensions_, "dimension");
  if (dimensions_.size() > std::numeric_limits<DimIndex>::max())
    throw InvalidArgument("too many dimensions");
  if (cells_.size() != items_.size() * specialists_.size())
    throw InvalidArgument("cell count does not match items x specialists");
  const auto n = dimensions_.size();
  if (std::any_of(cells_.begin(), cells_.end(), [n](DimIndex d) { return d >= n; }))
    throw InvalidArgument("cell refers to an unknown dimension");
  if (theoretical_) {
    if (theoretical_->size() != items_.size())
      throw InvalidArgument("theoretical column length does not match item count");
    if (std::any_of(theoretical_->begin(), theoretical_->end(), [n](DimIndex d) { return d >= n; }))
      throw InvalidArgument("theoretical entry refers to an unknown dimension");
  }
}

std::optional<std::size_t> JudgementMatrix::item_index(std::string_view id) const {
  return find_index(items_, id);
}

std::optional<std::size_t> JudgementMatrix::specialist_index(std::string_view id) const {
  return find_index(specialists_, id);
}

std::optional<DimIndex> JudgementMatrix::dimension_index(std::string_view label) const {
  if (auto i = find_index(dimensions_, label)) return static_cast<DimIndex>(*i);
  return std::nullopt;
}

JudgementMatrix JudgementMatrix::restrict_specialists(std::span<const std::size_t> columns) const {
  std::vector<std::string> specialists;
  specialists.reserve(columns.size());
  for (auto c : columns) {
    if (c >= specialists_.size()) throw InvalidArgument("specialist column out of range");
    specialists.push_back(specialists_[c]);
  }
  std::vector<DimIndex> cells;
  cells.reserve(items_.size() * columns.size());
  for (std::size_t i = 0; i < items_.size(); ++i)
    for (auto c : columns) cells.push_back(at(i, c));
  return JudgementMatrix(items_, std::move(specialists), dimensions_, std::move(cells),
                         theoretical_);
}

JudgementMatrix parse_judgement_csv(std::string_view text, const ParseOptions& options) {
  const auto records = csv::read(text);
  if (records.empty()) throw ParseError(1, 0, "empty input: header row expected");

  const auto& header = records.front();
  std::vector<std::string> head;
  for (const auto& f : header.fields) head.emplace_back(trim(f));
  if (head.size() < 2 || head.front() != "item")
    throw ParseError(header.line, 1, "header must start with 'item' followed by specialist ids");
  const bool has_theoretical = head.size() >= 3 && head.back() == kTheoreticalColumn;
  const std::size_t n_spec = head.size() - 1 - (has_theoretical ? 1 : 0);

  std::vector<std::string> specialists(head.begin() + 1, head.begin() + 1 + n_spec);
  {
    std::unordered_set<std::string_view> seen;
    for (std::size_t j = 0; j < specialists.size(); ++j) {
      if (specialists[j].empty()) throw ParseError(header.line, j + 2, "empty specialist id");
      if (!seen.insert(specialists[j]).second)
        throw ParseError(header.line, j + 2, "duplicate specialist id '" + specialists[j] + "'");
    }
  }

  std::vector<std::string> dimensions;
  std::unordered_map<std::string, DimIndex> dim_index;
  const bool declared = options.dimensions.has_value();
  if (declared) {
    for (const auto& d : *options.dimensions) {
      if (d.empty()) throw ParseError(0, 0, "empty declared dimension label");
      if (!dim_index.emplace(d, static_cast<DimIndex>(dimensions.size())).second)
        throw ParseError(0, 0, "duplicate declared dimension label '" + d + "'");
      dimensions.push_back(d);
    }
  }
  auto lookup = [&](std::string_view label, std::size_t line, std::size_t column) -> DimIndex {
    if (label.empty()) throw ParseError(line, column, "missing judgement");
    std::string key(label);
    if (auto it = dim_index.find(key); it != dim_index.end()) return it->second;
    if (declared) throw ParseError(line, column, "unknown dimension label '" + key + "'");
    if (dimensions.size() == std::numeric_limits<DimIndex>::max())
      throw ParseError(line, column, "too many dimension labels");
    const auto idx = static_cast<DimIndex>(dimensions.size());
    dim_index.emplace(key, idx);
    dimensions.push_back(std::move(key));
    return idx;
  };

  std::vector<std::string> items;
  std::unordered_set<std::string> item_seen;
  std::vector<DimIndex> cells;
  std::vector<DimIndex> theoretical;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != head.size())
      throw ParseError(rec.line, 0,
                       "expected " + std::to_string(head.size()) + " fields, found " +
                           std::to_string(rec.fields.size()));
    std::string id(trim(rec.fields[0]));
    if (id.empty()) throw ParseError(rec.line, 1, "empty item id");
    if (!item_seen.insert(id).second)
      throw ParseError(rec.line, 1, "duplicate item id '" + id + "'");
    items.push_back(std::move(id));
    for (std::size_t j = 0; j < n_spec; ++j)
      cells.push_back(lookup(trim(rec.fields[j + 1]), rec.line, j + 2));
    if (has_theoretical) theoretical.push_back(lookup(trim(rec.fields.back()), rec.line, head.size()));
  }
  if (items.empty()) throw ParseError(header.line, 0, "no item rows");

  std::optional<std::vector<DimIndex>> theo;
  if (has_theoretical) theo = std::move(theoretical);
  return JudgementMatrix(std::move(items), std::move(specialists), std::move(dimensions),
                         std::move(cells), std::move(theo));
}

std::string write_judgement_csv(const JudgementMatrix& matrix) {
  std::vector<std::string> fields{"item"};
  for (const auto& s : matrix.specialists()) fields.push_back(s);
  if (matrix.theoretical()) fields.emplace_back(kTheoreticalColumn);
  std::string out = csv::join(fields) + "\n";
  for (std::size_t i = 0; i < matrix.n_items(); ++i) {
    fields.assign({matrix.items()[i]});
    for (auto d : matrix.row(i)) fields.push_back(matrix.label(d));
    if (matrix.theoretical()) fields.push_back(matrix.label((*matrix.theoretical())[i]));
    out += csv::join(fields);
    out += '\n';
  }
  return out;
}

ValidationReport validate_matrix(const JudgementMatrix& matrix, std::size_t min_specialists) {
  ValidationReport report;
  const auto s = matrix.n_specialists();
  if (s < min_specialists)
    report.errors.push_back({"panel", "panel has " + std::to_string(s) +
                                          " specialists; at least " +
                                          std::to_string(min_specialists) + " required"});
  if (matrix.n_dims() < 2)
    report.warnings.push_back(
        {"dimensions", "fewer than two dimension labels; declare the full set with --dimensions"});
  if (matrix.n_items() > 1) {
    for (std::size_t j = 0; j < s; ++j) {
      const auto first = matrix.at(0, j);
      bool constant = true;
      for (std::size_t i = 1; i < matrix.n_items() && constant; ++i) constant = matrix.at(i, j) == first;
      if (constant)
        report.warnings.push_back({"specialist " + matrix.specialists()[j],
                                   "gave label '" + matrix.label(first) + "' to every item"});
    }
  }
  return report;
}

}  // namespace cochranq
