#pragma once

#include "cochranq/cochran.hpp"
#include "cochranq/condition.hpp"
#include "cochranq/judgement.hpp"

namespace cochranq {

/// Retention, agreement table and test result for one specialist panel.
struct PanelAnalysis {
  RetentionResult retention;
  WMatrix w;
  QTestResult test;
};

/// apply_condition -> build_w_matrix -> run_test. A panel with no retained
/// items (or a W with a single column) yields a degenerate result
/// (q = 0, p = 1) rather than an error.
PanelAnalysis analyze_panel(const JudgementMatrix& matrix, const ConditionSpec& condition,
                            Method method, const PermutationBudget& budget);

}  // namespace cochranq
