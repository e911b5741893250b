#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cochranq/judgement.hpp"

namespace cochranq {

/// Dimensions receiving the most votes for one item.
struct MajoritySet {
  std::string item;
  std::vector<DimIndex> dimensions;  // ascending dimension index
  std::size_t max_count = 0;

  bool unique() const noexcept { return dimensions.size() == 1; }
};

enum class ConditionKind { ConcordanceIndex, ContentValidityRatio };

/// How retention and W-row selection are carried out.
///
/// Standard: an item is kept when agreement reaches the threshold
/// (agreement >= c%), and W has one row per kept item.
///
/// Published: reproduces the numbers printed for the worked application and
/// simulation study. Agreement must strictly exceed the threshold, and W is
/// built from the first |kept| items of the input in file order (kept or
/// not), each scored against its first-appearance modal dimension.
enum class Convention { Standard, Published };

struct ConditionSpec {
  ConditionKind kind = ConditionKind::ConcordanceIndex;
  /// Concordance threshold in hundredths of a percent (5000 == 50%).
  std::uint32_t ci_basis_points = 5000;
  double cvr_threshold = 0.0;
  Convention convention = Convention::Standard;

  /// `percent` in [50, 100]; rounded to two decimals.
  static ConditionSpec concordance(double percent, Convention convention = Convention::Standard);
  /// `threshold` in [-1, 1].
  static ConditionSpec content_validity(double threshold,
                                        Convention convention = Convention::Standard);

  double ci_percent() const noexcept { return ci_basis_points / 100.0; }
};

enum class ExclusionReason { Tie, BelowThreshold };

struct RetainedItem {
  std::size_t item = 0;  // row index in the source matrix
  DimIndex dimension = 0;
};

struct ExcludedItem {
  std::size_t item = 0;
  ExclusionReason reason = ExclusionReason::BelowThreshold;
};

/// Partition of the input items into retained (each with its unique modal
/// dimension) and excluded, both in input order.
struct RetentionResult {
  std::vector<RetainedItem> retained;
  std::vector<ExcludedItem> excluded;
  Convention convention = Convention::Standard;
  std::size_t n_items = 0;  // size of the source matrix, for mismatch checks
};

/// Binary items x specialists agreement table with its margins.
class WMatrix {
 public:
  WMatrix() = default;
  /// Throws InvalidArgument on a size mismatch or a non-binary cell.
  WMatrix(std::vector<std::string> item_ids, std::vector<std::string> specialist_ids,
          std::vector<std::uint8_t> cells);

  /// Convenience for tests and fixtures; ids become "1", "2", ...
  static WMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t n_items() const noexcept { return item_ids_.size(); }
  std::size_t n_specialists() const noexcept { return specialist_ids_.size(); }
  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
  const std::vector<std::string>& specialist_ids() const noexcept { return specialist_ids_; }
  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }
  std::uint8_t at(std::size_t row, std::size_t col) const noexcept {
    return cells_[row * specialist_ids_.size() + col];
  }
  const std::vector<std::size_t>& row_totals() const noexcept { return row_totals_; }
  const std::vector<std::size_t>& col_totals() const noexcept { return col_totals_; }
  std::size_t grand_total() const noexcept { return grand_total_; }

  friend bool operator==(const WMatrix&, const WMatrix&) = default;

 private:
  std::vector<std::string> item_ids_;
  std::vector<std::string> specialist_ids_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::size_t> row_totals_;
  std::vector<std::size_t> col_totals_;
  std::size_t grand_total_ = 0;
};

/// Throws InvalidArgument for an unknown item id.
MajoritySet majority_set(const JudgementMatrix& matrix, std::string_view item);
MajoritySet majority_set(const JudgementMatrix& matrix, std::size_t item);

double concordance_fraction(const JudgementMatrix& matrix, std::string_view item);

/// Lawshe's ratio with the modal head-count as n_e: (n_e - s/2) / (s/2).
double cvr(const JudgementMatrix& matrix, std::string_view item);

/// First-appearance mode of an item: the modal dimension whose first vote
/// comes earliest in specialist order.
DimIndex first_appearance_mode(const JudgementMatrix& matrix, std::size_t item);

RetentionResult apply_condition(const JudgementMatrix& matrix, const ConditionSpec& spec);

/// Throws InvalidArgument if `retention` was not produced from `matrix`.
WMatrix build_w_matrix(const JudgementMatrix& matrix, const RetentionResult& retention);

/// Smallest head-count an item needs to be retained under a concordance
/// threshold with `s` specialists.
std::size_t concordance_head_count(std::uint32_t ci_basis_points, std::size_t s,
                                   Convention convention = Convention::Standard);

std::string_view to_string(ExclusionReason reason) noexcept;
std::string_view to_string(Convention convention) noexcept;
Convention parse_convention(std::string_view text);

}  // namespace cochranq
