#include "cochranq/powersim.hpp"

#include <cmath>
#include <numeric>

#include <omp.h>

#include "cochranq/cochran.hpp"
#include "cochranq/random.hpp"
#include "cochranq/special_functions.hpp"

namespace cochranq {
namespace {

constexpr double kProbabilityTolerance = 1e-12;

std::vector<std::string> numbered(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

struct Labels {
  std::vector<std::string> items, specialists, dimensions;
};

Labels labels_for(const ScenarioSpec& spec) {
  return {numbered("i", spec.n_items), numbered("e", spec.specialists.size()),
          numbered("D", spec.n_dims)};
}

std::vector<DimIndex> simulate_cells(const ScenarioSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const auto s = spec.specialists.size();
  std::vector<DimIndex> cells;
  cells.reserve(spec.n_items * s);
  for (std::size_t l = 0; l < spec.n_items; ++l) {
    const auto correct = static_cast<DimIndex>(l % spec.n_dims);
    for (const auto& profile : spec.specialists) {
      const double u = rng.uniform();
      if (u < profile.p_correct) {
        cells.push_back(correct);
        continue;
      }
      // Walk the wrong dimensions in index order until the cumulative
      // probability passes u; the last one absorbs rounding.
      double cumulative = profile.p_correct;
      const double wrong_mass = 1.0 - profile.p_correct;
      DimIndex pick = correct == spec.n_dims - 1 ? static_cast<DimIndex>(spec.n_dims - 2)
                                                 : static_cast<DimIndex>(spec.n_dims - 1);
      std::size_t k = 0;
      for (std::size_t d = 0; d < spec.n_dims; ++d) {
        if (d == correct) continue;
        cumulative += profile.error_split[k++] * wrong_mass;
        if (u < cumulative) {
          pick = static_cast<DimIndex>(d);
          break;
        }
      }
      cells.push_back(pick);
    }
  }
  return cells;
}

ReplicateOutcome replicate(const ScenarioSpec& spec, const ConditionSpec& condition,
                           const Labels& labels, std::uint64_t seed) {
  const JudgementMatrix matrix(labels.items, labels.specialists, labels.dimensions,
                               simulate_cells(spec, seed));
  const auto retention = apply_condition(matrix, condition);
  ReplicateOutcome out;
  out.retained = retention.retained.size();
  if (out.retained < 2) return out;
  const auto result = asymptotic_p(build_w_matrix(matrix, retention));
  out.rejected = !result.degenerate && result.rejects(spec.alpha);
  return out;
}

PowerEstimate summarize(const ScenarioSpec& spec, std::size_t replicates, std::uint64_t seed,
                        std::uint64_t rejections, std::uint64_t retained_total) {
  PowerEstimate e;
  e.scenario = spec.name;
  e.replicates = replicates;
  e.seed = seed;
  e.rejections = rejections;
  e.power = static_cast<double>(rejections) / static_cast<double>(replicates);
  e.mc_std_error = std::sqrt(e.power * (1.0 - e.power) / static_cast<double>(replicates));
  e.mean_retained_items = static_cast<double>(retained_total) / static_cast<double>(replicates);
  return e;
}

void check_replicates(std::size_t replicates) {
  if (replicates < kMinPowerReplicates)
    throw InvalidArgument("power estimation needs at least " +
                          std::to_string(kMinPowerReplicates) + " replicates");
}

ScenarioSpec symmetric_scenario(std::string name, std::vector<double> p_correct,
                            Convention convention) {
  ScenarioSpec spec;
  spec.name = std::move(name);
  spec.convention = convention;
  for (double p : p_correct) spec.specialists.push_back(CapabilityProfile::symmetric(p, spec.n_dims));
  return spec;
}

// Uniform capability, wrong-dimension split skewed per specialist so the
// judgement laws are not permutations of each other.
ScenarioSpec skewed_scenario(std::string name, double p, Convention convention) {
  ScenarioSpec spec;
  spec.name = std::move(name);
  spec.convention = convention;
  for (int j = 0; j < 9; ++j) {
    const double delta = 0.05 * j;
    spec.specialists.push_back({p, {0.25 + delta, 0.75 - delta}});
  }
  return spec;
}

}  // namespace

CapabilityProfile CapabilityProfile::symmetric(double p_correct, std::size_t n_dims) {
  if (n_dims < 2) throw InvalidArgument("a capability profile needs at least two dimensions");
  return {p_correct, std::vector<double>(n_dims - 1, 1.0 / static_cast<double>(n_dims - 1))};
}

void ScenarioSpec::validate() const {
  if (n_dims < 2) throw InvalidArgument("scenario '" + name + "': n_dims must be >= 2");
  if (n_items < 1) throw InvalidArgument("scenario '" + name + "': n_items must be >= 1");
  if (specialists.size() < 2)
    throw InvalidArgument("scenario '" + name + "': at least two specialists required");
  if (!(ci_percent >= 50.0 && ci_percent <= 100.0))
    throw InvalidArgument("scenario '" + name + "': ci_percent must lie in [50, 100]");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("scenario '" + name + "': alpha must lie in (0, 1)");
  for (std::size_t j = 0; j < specialists.size(); ++j) {
    const auto& p = specialists[j];
    const auto where = "scenario '" + name + "', specialist " + std::to_string(j + 1) + ": ";
    if (!(p.p_correct >= 0.0 && p.p_correct <= 1.0))
      throw InvalidArgument(where + "p_correct must lie in [0, 1]");
    if (p.error_split.size() != n_dims - 1)
      throw InvalidArgument(where + "error_split needs n_dims - 1 entries");
    double sum = 0.0;
    for (double e : p.error_split) {
      if (!(e >= 0.0)) throw InvalidArgument(where + "error_split entries must be >= 0");
      sum += e;
    }
    if (std::fabs(sum - 1.0) > kProbabilityTolerance)
      throw InvalidArgument(where + "error_split must sum to 1");
  }
}

JudgementMatrix simulate_judgements(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.validate();
  auto labels = labels_for(spec);
  return JudgementMatrix(std::move(labels.items), std::move(labels.specialists),
                         std::move(labels.dimensions), simulate_cells(spec, seed));
}

ReplicateOutcome run_power_replicate(const ScenarioSpec& spec, std::uint64_t replicate_seed) {
  spec.validate();
  return replicate(spec, ConditionSpec::concordance(spec.ci_percent, spec.convention),
                   labels_for(spec), replicate_seed);
}

PowerEstimate estimate_power_serial(const ScenarioSpec& spec, std::size_t replicates,
                                    std::uint64_t seed) {
  spec.validate();
  check_replicates(replicates);
  const auto condition = ConditionSpec::concordance(spec.ci_percent, spec.convention);
  const auto labels = labels_for(spec);
  std::uint64_t rejections = 0;
  std::uint64_t retained = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto out = replicate(spec, condition, labels, derive_seed(seed, r));
    rejections += out.rejected ? 1 : 0;
    retained += out.retained;
  }
  return summarize(spec, replicates, seed, rejections, retained);
}

PowerEstimate estimate_power(const ScenarioSpec& spec, std::size_t replicates, std::uint64_t seed,
                             int workers) {
  spec.validate();
  check_replicates(replicates);
  const auto condition = ConditionSpec::concordance(spec.ci_percent, spec.convention);
  const auto labels = labels_for(spec);
  const auto n = static_cast<std::int64_t>(replicates);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::uint64_t rejections = 0;
  std::uint64_t retained = 0;
#pragma omp parallel for num_threads(threads) schedule(static) reduction(+ : rejections, retained)
  for (std::int64_t r = 0; r < n; ++r) {
    const auto out =
        replicate(spec, condition, labels, derive_seed(seed, static_cast<std::uint64_t>(r)));
    rejections += out.rejected ? 1 : 0;
    retained += out.retained;
  }
  return summarize(spec, replicates, seed, rejections, retained);
}

std::vector<ScenarioSpec> builtin_scenarios(Convention convention) {
  const double hi = 0.9;
  std::vector<ScenarioSpec> out;
  out.push_back(symmetric_scenario("scenario-1", {0.45, hi, hi, hi, hi, hi, hi, hi, hi}, convention));
  out.push_back(
      symmetric_scenario("scenario-2", {0.45, 0.45, 0.45, hi, hi, hi, hi, hi, hi}, convention));
  out.push_back(
      symmetric_scenario("scenario-3", {0.45, 0.35, 0.25, hi, hi, hi, hi, hi, hi}, convention));
  out.push_back(symmetric_scenario("scenario-4", {0.8, hi, hi, hi, hi, hi, hi, hi, hi}, convention));
  out.push_back(symmetric_scenario("scenario-5", {0.8, 0.8, hi, hi, hi, hi, hi, hi, hi}, convention));
  out.push_back(
      symmetric_scenario("scenario-6", {0.75, 0.75, 0.75, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6}, convention));
  out.push_back(
      symmetric_scenario("scenario-7", {0.75, 0.75, 0.75, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3}, convention));
  out.push_back(symmetric_scenario("scenario-8", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9},
                               convention));
  out.push_back(skewed_scenario("scenario-9", 0.9, convention));
  out.push_back(skewed_scenario("scenario-10", 0.6, convention));
  return out;
}

double prop2_w_probability(double p_correct, std::span<const double> wrong_probs, std::size_t s,
                           double ci_percent) {
  if (s < 1) throw InvalidArgument("prop2_w_probability: s must be >= 1");
  if (!(ci_percent >= 0.0 && ci_percent <= 100.0))
    throw InvalidArgument("prop2_w_probability: c must lie in [0, 100]");
  double total = p_correct;
  bool in_range = p_correct >= 0.0 && p_correct <= 1.0;
  for (double p : wrong_probs) {
    total += p;
    in_range = in_range && p >= 0.0 && p <= 1.0;
  }
  if (!in_range || std::fabs(total - 1.0) > kProbabilityTolerance)
    throw InvalidArgument("prop2_w_probability: probabilities must lie in [0, 1] and sum to 1");

  const auto bp = static_cast<std::uint64_t>(std::llround(ci_percent * 100.0));
  const auto threshold = static_cast<unsigned>(bp * s / 10'000U);  // floor(c s / 100)
  const auto trials = static_cast<unsigned>(s - 1);
  double result = binomial_upper_tail(trials, p_correct, threshold) * p_correct;
  for (double p : wrong_probs) result += binomial_upper_tail(trials, p, threshold) * p;
  return result;
}

}  // namespace cochranq
