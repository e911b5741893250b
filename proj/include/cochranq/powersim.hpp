#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cochranq/condition.hpp"
#include "cochranq/judgement.hpp"

namespace cochranq {

/// One specialist's judging behaviour: probability of choosing an item's
/// correct dimension, and how the remaining mass is spread over the wrong
/// dimensions (in dimension-index order, skipping the correct one).
struct CapabilityProfile {
  double p_correct = 1.0;
  std::vector<double> error_split;

  /// Even split of 1 - p over `n_dims - 1` wrong dimensions.
  static CapabilityProfile symmetric(double p_correct, std::size_t n_dims);
};

struct ScenarioSpec {
  std::string name;
  std::size_t n_items = 30;
  std::size_t n_dims = 3;
  std::vector<CapabilityProfile> specialists;
  double ci_percent = 50.0;
  double alpha = 0.05;
  Convention convention = Convention::Standard;

  /// Throws InvalidArgument if any invariant fails.
  void validate() const;
};

struct PowerEstimate {
  std::string scenario;
  double power = 0.0;
  double mc_std_error = 0.0;
  double mean_retained_items = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejections = 0;
};

inline constexpr std::size_t kMinPowerReplicates = 1000;

/// Labels used for simulated matrices: dimensions "D1".., items "i1..",
/// specialists "e1..". Item l's correct dimension is l mod n_dims.
JudgementMatrix simulate_judgements(const ScenarioSpec& spec, std::uint64_t seed);

/// Rejection rate of the asymptotic test over simulated panels. Replicates
/// with fewer than two retained items or a degenerate W count as
/// non-rejections. Replicate r uses derive_seed(seed, r). OpenMP-parallel;
/// output does not depend on `workers` (0 = runtime default).
PowerEstimate estimate_power(const ScenarioSpec& spec, std::size_t replicates,
                             std::uint64_t seed, int workers = 0);

/// Single-threaded reference for estimate_power; identical output.
PowerEstimate estimate_power_serial(const ScenarioSpec& spec, std::size_t replicates,
                                    std::uint64_t seed);

/// Whether a single simulated replicate rejects, and how many items it kept.
struct ReplicateOutcome {
  bool rejected = false;
  std::size_t retained = 0;
};
ReplicateOutcome run_power_replicate(const ScenarioSpec& spec, std::uint64_t replicate_seed);

/// The ten capability scenarios: nine specialists, 30 items, 3 dimensions,
/// CI 50%, alpha 0.05. Names "scenario-1" ... "scenario-10".
std::vector<ScenarioSpec> builtin_scenarios(Convention convention = Convention::Standard);

/// Closed-form P{W = 1} for a specialist whose judgement law is
/// (p_correct, wrong_probs): P{X >= f*} p + sum_k P{X_k >= f*} p_k with
/// X ~ Bin(s-1, p), X_k ~ Bin(s-1, p_k), f* = floor(c s / 100).
/// Throws InvalidArgument unless p_correct + sum(wrong_probs) == 1 within 1e-12.
double prop2_w_probability(double p_correct, std::span<const double> wrong_probs, std::size_t s,
                           double ci_percent);

}  // namespace cochranq
