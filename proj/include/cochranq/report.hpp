#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cochranq/cochran.hpp"
#include "cochranq/condition.hpp"
#include "cochranq/judgement.hpp"
#include "cochranq/pipeline.hpp"
#include "cochranq/powersim.hpp"
#include "cochranq/subgroup.hpp"

namespace cochranq::report {

using nlohmann::json;

json to_json(const QTestResult& result);
json to_json(const JudgementMatrix& matrix, const RetentionResult& retention);
json to_json(const WMatrix& w);
json to_json(const ConditionSpec& spec);
json to_json(const PowerEstimate& estimate);
json to_json(const SubgroupEntry& entry);
json to_json(const ScenarioSpec& spec);

ScenarioSpec scenario_from_json(const json& j);
/// Accepts a single scenario object or an array of them.
std::vector<ScenarioSpec> scenarios_from_json(const json& j);

/// `analyze` report object (see schemas/analyze.schema.json).
json analyze_json(const JudgementMatrix& matrix, const PanelAnalysis& analysis,
                  const ConditionSpec& condition, double alpha);
json subgroups_json(const SubgroupReport& report, const ConditionSpec& condition, double alpha,
                    std::size_t top);
json power_json(const std::vector<PowerEstimate>& estimates);

/// Retained/excluded table as CSV: `item,status,dimension,reason`.
std::string retention_csv(const JudgementMatrix& matrix, const RetentionResult& retention);
/// W as CSV in the judgement-file dialect: `item,<spec...>`, cells 0/1.
std::string w_matrix_csv(const WMatrix& w);
/// `scenario,power,mc_std_error,mean_retained,replicates,seed`.
std::string power_csv(const std::vector<PowerEstimate>& estimates);

std::string analyze_text(const JudgementMatrix& matrix, const PanelAnalysis& analysis,
                         const ConditionSpec& condition, double alpha);
std::string subgroups_text(const SubgroupReport& report, double alpha, std::size_t top);
std::string power_text(const std::vector<PowerEstimate>& estimates);

/// "%.17g"; shortest text that parses back to the same double.
std::string exact_real(double value);

}  // namespace cochranq::report
