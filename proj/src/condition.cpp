#include "cochranq/condition.hpp"

#include <algorithm>
#include <cmath>

namespace cochranq {
namespace {

std::vector<std::size_t> head_counts(const JudgementMatrix& matrix, std::size_t item) {
  std::vector<std::size_t> counts(matrix.n_dims(), 0);
  for (auto d : matrix.row(item)) ++counts[d];
  return counts;
}

std::size_t require_item(const JudgementMatrix& matrix, std::string_view item) {
  if (auto i = matrix.item_index(item)) return *i;
  throw InvalidArgument("unknown item id '" + std::string(item) + "'");
}

bool passes_threshold(const ConditionSpec& spec, std::size_t max_count, std::size_t s) {
  const bool strict = spec.convention == Convention::Published;
  if (spec.kind == ConditionKind::ConcordanceIndex) {
    const auto lhs = static_cast<std::uint64_t>(max_count) * 10'000U;
    const auto rhs = static_cast<std::uint64_t>(spec.ci_basis_points) * s;
    return strict ? lhs > rhs : lhs >= rhs;
  }
  const double half = static_cast<double>(s) / 2.0;
  const double ratio = (static_cast<double>(max_count) - half) / half;
  return strict ? ratio > spec.cvr_threshold : ratio >= spec.cvr_threshold;
}

}  // namespace

ConditionSpec ConditionSpec::concordance(double percent, Convention convention) {
  if (!std::isfinite(percent) || percent < 50.0 || percent > 100.0)
    throw InvalidArgument("concordance index must lie in [50, 100]");
  ConditionSpec spec;
  spec.kind = ConditionKind::ConcordanceIndex;
  spec.ci_basis_points = static_cast<std::uint32_t>(std::lround(percent * 100.0));
  spec.convention = convention;
  return spec;
}

ConditionSpec ConditionSpec::content_validity(double threshold, Convention convention) {
  if (!std::isfinite(threshold) || threshold < -1.0 || threshold > 1.0)
    throw InvalidArgument("CVR threshold must lie in [-1, 1]");
  ConditionSpec spec;
  spec.kind = ConditionKind::ContentValidityRatio;
  spec.cvr_threshold = threshold;
  spec.convention = convention;
  return spec;
}

WMatrix::WMatrix(std::vector<std::string> item_ids, std::vector<std::string> specialist_ids,
                 std::vector<std::uint8_t> cells)
    : item_ids_(std::move(item_ids)),
      specialist_ids_(std::move(specialist_ids)),
      cells_(std::move(cells)),
      row_totals_(item_ids_.size(), 0),
      col_totals_(specialist_ids_.size(), 0) {
  const auto s = specialist_ids_.size();
  if (cells_.size() != item_ids_.size() * s)
    throw InvalidArgument("W cell count does not match rows x columns");
  for (std::size_t l = 0; l < item_ids_.size(); ++l) {
    for (std::size_t j = 0; j < s; ++j) {
      const auto v = cells_[l * s + j];
      if (v > 1) throw InvalidArgument("W cells must be 0 or 1");
      row_totals_[l] += v;
      col_totals_[j] += v;
    }
    grand_total_ += row_totals_[l];
  }
}

WMatrix WMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t s = rows.empty() ? 0 : rows.front().size();
  std::vector<std::string> items, specs;
  std::vector<std::uint8_t> cells;
  for (std::size_t l = 0; l < rows.size(); ++l) {
    if (rows[l].size() != s) throw InvalidArgument("ragged W rows");
    items.push_back(std::to_string(l + 1));
    for (int v : rows[l]) {
      if (v != 0 && v != 1) throw InvalidArgument("W cells must be 0 or 1");
      cells.push_back(static_cast<std::uint8_t>(v));
    }
  }
  for (std::size_t j = 0; j < s; ++j) specs.push_back(std::to_string(j + 1));
  return WMatrix(std::move(items), std::move(specs), std::move(cells));
}

MajoritySet majority_set(const JudgementMatrix& matrix, std::size_t item) {
  if (item >= matrix.n_items()) throw InvalidArgument("item index out of range");
  const auto counts = head_counts(matrix, item);
  MajoritySet result;
  result.item = matrix.items()[item];
  result.max_count = *std::max_element(counts.begin(), counts.end());
  for (std::size_t d = 0; d < counts.size(); ++d)
    if (counts[d] == result.max_count) result.dimensions.push_back(static_cast<DimIndex>(d));
  return result;
}

MajoritySet majority_set(const JudgementMatrix& matrix, std::string_view item) {
  return majority_set(matrix, require_item(matrix, item));
}

double concordance_fraction(const JudgementMatrix& matrix, std::string_view item) {
  const auto m = majority_set(matrix, require_item(matrix, item));
  return static_cast<double>(m.max_count) / static_cast<double>(matrix.n_specialists());
}

double cvr(const JudgementMatrix& matrix, std::string_view item) {
  const auto m = majority_set(matrix, require_item(matrix, item));
  const double half = static_cast<double>(matrix.n_specialists()) / 2.0;
  return (static_cast<double>(m.max_count) - half) / half;
}

DimIndex first_appearance_mode(const JudgementMatrix& matrix, std::size_t item) {
  const auto counts = head_counts(matrix, item);
  const auto max_count = *std::max_element(counts.begin(), counts.end());
  for (auto d : matrix.row(item))
    if (counts[d] == max_count) return d;
  return 0;  // unreachable for s >= 1
}

RetentionResult apply_condition(const JudgementMatrix& matrix, const ConditionSpec& spec) {
  RetentionResult result;
  result.convention = spec.convention;
  result.n_items = matrix.n_items();
  const auto s = matrix.n_specialists();
  for (std::size_t i = 0; i < matrix.n_items(); ++i) {
    const auto m = majority_set(matrix, i);
    if (!passes_threshold(spec, m.max_count, s))
      result.excluded.push_back({i, ExclusionReason::BelowThreshold});
    else if (!m.unique())
      result.excluded.push_back({i, ExclusionReason::Tie});
    else
      result.retained.push_back({i, m.dimensions.front()});
  }
  return result;
}

WMatrix build_w_matrix(const JudgementMatrix& matrix, const RetentionResult& retention) {
  if (retention.n_items != matrix.n_items() ||
      retention.retained.size() + retention.excluded.size() != matrix.n_items())
    throw InvalidArgument("retention result does not belong to this judgement matrix");
  const auto s = matrix.n_specialists();
  const auto v = retention.retained.size();

  std::vector<std::size_t> rows;
  std::vector<DimIndex> reference;
  rows.reserve(v);
  reference.reserve(v);
  if (retention.convention == Convention::Published) {
    for (std::size_t i = 0; i < v; ++i) {
      rows.push_back(i);
      reference.push_back(first_appearance_mode(matrix, i));
    }
  } else {
    for (const auto& r : retention.retained) {
      if (r.item >= matrix.n_items())
        throw InvalidArgument("retained item not found in judgement matrix");
      rows.push_back(r.item);
      reference.push_back(r.dimension);
    }
  }

  std::vector<std::string> ids;
  std::vector<std::uint8_t> cells;
  ids.reserve(v);
  cells.reserve(v * s);
  for (std::size_t l = 0; l < rows.size(); ++l) {
    ids.push_back(matrix.items()[rows[l]]);
    for (auto d : matrix.row(rows[l])) cells.push_back(d == reference[l] ? 1 : 0);
  }
  return WMatrix(std::move(ids), matrix.specialists(), std::move(cells));
}

std::size_t concordance_head_count(std::uint32_t ci_basis_points, std::size_t s,
                                   Convention convention) {
  const auto need = static_cast<std::uint64_t>(ci_basis_points) * s;
  const auto ceil = (need + 9'999U) / 10'000U;
  if (convention == Convention::Published) return static_cast<std::size_t>(need / 10'000U + 1);
  return static_cast<std::size_t>(ceil);
}

std::string_view to_string(ExclusionReason reason) noexcept {
  return reason == ExclusionReason::Tie ? "tie" : "below-threshold";
}

std::string_view to_string(Convention convention) noexcept {
  return convention == Convention::Published ? "published" : "standard";
}

Convention parse_convention(std::string_view text) {
  if (text == "standard") return Convention::Standard;
  if (text == "published") return Convention::Published;
  throw InvalidArgument("unknown convention '" + std::string(text) + "'");
}

}  // namespace cochranq
