#include "cochranq/pipeline.hpp"

namespace cochranq {

PanelAnalysis analyze_panel(const JudgementMatrix& matrix, const ConditionSpec& condition,
                            Method method, const PermutationBudget& budget) {
  PanelAnalysis out;
  out.retention = apply_condition(matrix, condition);
  out.w = build_w_matrix(matrix, out.retention);
  if (out.w.n_items() == 0 || out.w.n_specialists() < 2) {
    auto& t = out.test;
    t.method = method == Method::Auto ? Method::Asymptotic : method;
    t.df = static_cast<int>(matrix.n_specialists()) - 1;
    t.degenerate = true;
    t.q = 0.0;
    t.p_value = 1.0;
    if (t.method == Method::MonteCarlo) t.mc_std_error = 0.0;
    t.n_items = out.w.n_items();
    t.n_specialists = matrix.n_specialists();
    return out;
  }
  out.test = run_test(out.w, method, budget);
  return out;
}

}  // namespace cochranq
