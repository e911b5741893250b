#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cochranq/error.hpp"

namespace cochranq {

/// Index into a study's dimension set.
using DimIndex = std::uint16_t;

/// Items x specialists table of categorical dimension judgements.
///
/// Cells are stored row-major as indices into `dimensions()`. Every cell is
/// populated; missing judgements are rejected at construction. The optional
/// theoretical column holds the dimension each item was written for.
class JudgementMatrix {
 public:
  JudgementMatrix() = default;

  /// Throws InvalidArgument when ids are duplicated or empty, when the cell
  /// count differs from items*specialists, or when a cell or theoretical
  /// entry indexes outside `dimensions`.
  JudgementMatrix(std::vector<std::string> items, std::vector<std::string> specialists,
                  std::vector<std::string> dimensions, std::vector<DimIndex> cells,
                  std::optional<std::vector<DimIndex>> theoretical = std::nullopt);

  std::size_t n_items() const noexcept { return items_.size(); }
  std::size_t n_specialists() const noexcept { return specialists_.size(); }
  std::size_t n_dims() const noexcept { return dimensions_.size(); }

  const std::vector<std::string>& items() const noexcept { return items_; }
  const std::vector<std::string>& specialists() const noexcept { return specialists_; }
  const std::vector<std::string>& dimensions() const noexcept { return dimensions_; }
  const std::vector<DimIndex>& cells() const noexcept { return cells_; }
  const std::optional<std::vector<DimIndex>>& theoretical() const noexcept { return theoretical_; }

  DimIndex at(std::size_t item, std::size_t specialist) const noexcept {
    return cells_[item * specialists_.size() + specialist];
  }
  std::span<const DimIndex> row(std::size_t item) const noexcept {
    return {cells_.data() + item * specialists_.size(), specialists_.size()};
  }
  const std::string& label(DimIndex d) const noexcept { return dimensions_[d]; }

  std::optional<std::size_t> item_index(std::string_view id) const;
  std::optional<std::size_t> specialist_index(std::string_view id) const;
  std::optional<DimIndex> dimension_index(std::string_view label) const;

  /// Column subset in the given order; the dimension set is kept whole.
  JudgementMatrix restrict_specialists(std::span<const std::size_t> columns) const;

  friend bool operator==(const JudgementMatrix&, const JudgementMatrix&) = default;

 private:
  std::vector<std::string> items_;
  std::vector<std::string> specialists_;
  std::vector<std::string> dimensions_;
  std::vector<DimIndex> cells_;
  std::optional<std::vector<DimIndex>> theoretical_;
};

struct ParseOptions {
  /// Declared dimension set. When present, any other label is an error and
  /// the matrix uses exactly this order. When absent the set is inferred as
  /// the union of cell and theoretical labels in order of first appearance.
  std::optional<std::vector<std::string>> dimensions;
};

/// Name of the optional trailing header column holding theoretical dimensions.
inline constexpr std::string_view kTheoreticalColumn = "theoretical";

/// Parses `item,<spec_1>,...,<spec_s>[,theoretical]`. Errors carry the file
/// line and the 1-based column of the offending cell.
JudgementMatrix parse_judgement_csv(std::string_view text, const ParseOptions& options = {});

/// Inverse of parse_judgement_csv; output ends with a newline.
std::string write_judgement_csv(const JudgementMatrix& matrix);

struct Diagnostic {
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool accepted() const noexcept { return errors.empty(); }
};

inline constexpr std::size_t kDefaultMinSpecialists = 6;

/// Reports a panel smaller than `min_specialists` as an error. Warns about
/// specialists who gave one label to every item and about a dimension set
/// with fewer than two labels.
ValidationReport validate_matrix(const JudgementMatrix& matrix,
                                 std::size_t min_specialists = kDefaultMinSpecialists);

}  // namespace cochranq
