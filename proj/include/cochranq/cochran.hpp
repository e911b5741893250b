#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "cochranq/condition.hpp"

namespace cochranq {

enum class Method { Auto, Exact, MonteCarlo, Asymptotic };

struct QStatistic {
  double q = 0.0;
  bool degenerate = false;
};

struct QTestResult {
  double q = 0.0;
  int df = 0;
  double p_value = 1.0;
  Method method = Method::Asymptotic;
  std::optional<double> mc_std_error;
  bool degenerate = false;
  std::size_t n_items = 0;
  std::size_t n_specialists = 0;

  bool rejects(double alpha) const noexcept { return p_value < alpha; }
};

inline constexpr std::uint64_t kDefaultExactCutoff = 10'000'000;
inline constexpr std::uint64_t kDefaultMcReplicates = 100'000;
inline constexpr std::uint64_t kMinMcReplicates = 1'000;
inline constexpr std::uint64_t kDefaultSeed = 20'190'101;

struct PermutationBudget {
  std::uint64_t exact_cutoff = kDefaultExactCutoff;
  std::uint64_t mc_replicates = kDefaultMcReplicates;
  std::uint64_t seed = kDefaultSeed;
  /// OpenMP threads for Monte Carlo replicates; 0 means the runtime default.
  /// Results do not depend on this value.
  int workers = 0;
};

/// Raised by exact_p when the arrangement count exceeds the budget.
class ArrangementLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cochran's Q. All-unanimous rows (every R in {0, s}) make the
/// denominator vanish; that case returns {0, degenerate}. Throws
/// InvalidArgument when W has no rows or fewer than two columns.
QStatistic q_statistic(const WMatrix& w);

/// Product over rows of C(s, R_l), saturating at UINT64_MAX.
std::uint64_t arrangement_count(const WMatrix& w);

QTestResult asymptotic_p(const WMatrix& w);

/// Exact p under the row-conditional permutation null: each row keeps its
/// total and every placement of its 1s is equally likely, independently
/// across rows. Ties with the observed statistic count toward the p-value.
/// Throws ArrangementLimitExceeded when arrangement_count > exact_cutoff.
QTestResult exact_p(const WMatrix& w, const PermutationBudget& budget);

/// Add-one Monte Carlo estimate under the same null. OpenMP-parallel over
/// replicates; replicate r draws from derive_seed(budget.seed, r).
QTestResult mc_permutation_p(const WMatrix& w, const PermutationBudget& budget);

/// Single-threaded reference for mc_permutation_p; identical output.
QTestResult mc_permutation_p_serial(const WMatrix& w, const PermutationBudget& budget);

/// Method::Auto picks Exact within the cutoff, else Asymptotic when
/// v >= kAutoAsymptoticItems, else MonteCarlo.
QTestResult run_test(const WMatrix& w, Method method, const PermutationBudget& budget);

inline constexpr std::size_t kAutoAsymptoticItems = 24;

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

}  // namespace cochranq
