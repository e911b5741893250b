#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cochranq/cochran.hpp"
#include "cochranq/condition.hpp"
#include "cochranq/judgement.hpp"

namespace cochranq {

using Subset = std::vector<std::size_t>;

/// All subsets of {0..s-1} with size in [min_size, max_size], by size then
/// lexicographically; the full set is appended when `include_full` and it is
/// not already in range. Throws InvalidArgument unless
/// 2 <= min_size <= max_size <= s.
std::vector<Subset> enumerate_subgroups(std::size_t s, std::size_t min_size,
                                        std::size_t max_size, bool include_full);

struct SubgroupEntry {
  std::vector<std::string> specialists;
  Subset columns;
  double q = 0.0;
  double p_value = 1.0;
  std::size_t n_retained = 0;
  bool degenerate = false;
};

struct SubgroupReport {
  /// Descending p-value; ties go to the larger subset, then to the
  /// lexicographically smaller id sequence.
  std::vector<SubgroupEntry> entries;
};

struct SubgroupOptions {
  Method method = Method::Asymptotic;
  PermutationBudget budget;
  std::size_t min_size = 6;
  std::size_t max_size = 0;  // 0 means s - 1
  bool include_full = true;
  int workers = 0;
};

/// Reruns retention, W and the test on every subgroup's restricted matrix.
SubgroupReport analyze_subgroups(const JudgementMatrix& matrix, const ConditionSpec& condition,
                                 const SubgroupOptions& options);

/// Single-threaded reference for analyze_subgroups.
SubgroupReport analyze_subgroups_serial(const JudgementMatrix& matrix,
                                        const ConditionSpec& condition,
                                        const SubgroupOptions& options);

bool ranks_before(const SubgroupEntry& a, const SubgroupEntry& b);

std::size_t count_rejections(const SubgroupReport& report, double alpha);

/// Header `subset,q,p_value,n_retained,degenerate`; subset ids joined by '+'.
/// Reals are written with 17 significant digits so parsing recovers them.
std::string write_subgroup_csv(const SubgroupReport& report, std::size_t top = 0);
SubgroupReport parse_subgroup_csv(std::string_view text);

}  // namespace cochranq
