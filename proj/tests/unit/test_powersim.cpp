#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cochranq/powersim.hpp"

namespace cochranq {
namespace {

ScenarioSpec uniform_spec(double p, std::size_t s = 9) {
  ScenarioSpec spec;
  spec.name = "uniform";
  for (std::size_t j = 0; j < s; ++j) spec.specialists.push_back(CapabilityProfile::symmetric(p, 3));
  return spec;
}

// The threshold event behind the closed form, simulated directly: a focal
// specialist picks a dimension, and W = 1 when at least f* of the other
// s - 1 specialists picked the same one.
double prop2_event_frequency(const std::vector<double>& probs, std::size_t s, double c,
                             std::size_t draws, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::discrete_distribution<int> pick(probs.begin(), probs.end());
  const auto threshold = static_cast<std::size_t>(std::floor(c * static_cast<double>(s) / 100.0 + 1e-9));
  std::size_t hits = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const int focal = pick(gen);
    std::size_t agree = 0;
    for (std::size_t j = 1; j < s; ++j) agree += pick(gen) == focal ? 1 : 0;
    hits += agree >= threshold ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

TEST(SimulateJudgements, PerfectSpecialistsAgree) {
  const auto m = simulate_judgements(uniform_spec(1.0), 99);
  ASSERT_EQ(m.n_items(), 30u);
  ASSERT_EQ(m.n_specialists(), 9u);
  for (std::size_t i = 0; i < m.n_items(); ++i)
    for (std::size_t j = 0; j < m.n_specialists(); ++j) EXPECT_EQ(m.at(i, j), i % 3);
}

TEST(SimulateJudgements, Scenario1Shape) {
  const auto m = simulate_judgements(builtin_scenarios().front(), 1234);
  EXPECT_EQ(m.n_items(), 30u);
  EXPECT_EQ(m.n_specialists(), 9u);
  EXPECT_EQ(m.n_dims(), 3u);
  EXPECT_EQ(simulate_judgements(builtin_scenarios().front(), 1234), m);
}

// Property: cell frequencies follow the capability profile.
TEST(SimulateJudgements, CellFrequenciesMatchProfile) {
  ScenarioSpec spec;
  spec.name = "freq";
  spec.n_items = 40;
  spec.specialists = {{0.6, {0.25, 0.75}}, {0.3, {0.5, 0.5}}};
  std::vector<std::array<double, 3>> freq(2, {0.0, 0.0, 0.0});
  const int seeds = 2000;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto m = simulate_judgements(spec, static_cast<std::uint64_t>(seed));
    for (std::size_t i = 0; i < m.n_items(); ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto correct = i % 3;
        const auto d = m.at(i, j);
        // Position 0: correct; 1: first wrong dimension; 2: second wrong.
        const std::size_t slot = d == correct ? 0 : (d < correct ? d + 1 : d);
        freq[j][slot] += 1.0;
      }
  }
  const double n = seeds * 40.0;
  const std::vector<std::array<double, 3>> expected{{0.6, 0.1, 0.3}, {0.3, 0.35, 0.35}};
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      const double p = expected[j][k];
      EXPECT_NEAR(freq[j][k] / n, p, 4.0 * std::sqrt(p * (1 - p) / n)) << j << "," << k;
    }
}

TEST(BuiltinScenarios, TenBuiltinProfiles) {
  const auto all = builtin_scenarios();
  ASSERT_EQ(all.size(), 10u);
  const auto& eighth = all[7];
  EXPECT_EQ(eighth.name, "scenario-8");
  for (std::size_t j = 0; j < 9; ++j)
    EXPECT_NEAR(eighth.specialists[j].p_correct, 0.1 * static_cast<double>(j + 1), 1e-12);
  for (const auto& s : all) {
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.n_items, 30u);
    EXPECT_EQ(s.specialists.size(), 9u);
  }
  EXPECT_EQ(builtin_scenarios(Convention::Published).front().convention, Convention::Published);
}

TEST(ScenarioSpec, ValidateRejectsBadProfiles) {
  auto spec = uniform_spec(0.9);
  spec.specialists[0].p_correct = 1.2;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec = uniform_spec(0.9);
  spec.specialists[3].error_split = {0.5, 0.6};
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec = uniform_spec(0.9);
  spec.ci_percent = 40;
  EXPECT_THROW(spec.validate(), InvalidArgument);
}

TEST(EstimatePower, PerfectPanelNeverRejects) {
  const auto est = estimate_power(uniform_spec(1.0), 2000, 5);
  EXPECT_LE(est.power, 0.05 + 3.0 * est.mc_std_error);
  EXPECT_DOUBLE_EQ(est.mean_retained_items, 30.0);
}

TEST(EstimatePower, Scenario1SmallRun) {
  const auto est = estimate_power(builtin_scenarios().front(), 2000, 42);
  EXPECT_NEAR(est.power, 0.9931, 0.03);
  EXPECT_NEAR(est.mean_retained_items, 30.0, 1.5);
  EXPECT_EQ(est.replicates, 2000u);
  EXPECT_EQ(est.seed, 42u);
}

TEST(EstimatePower, LowerCapabilityRaisesPower) {
  const auto all = builtin_scenarios();
  const auto weak = estimate_power(all[0], 2000, 1);    // one specialist at 0.45
  const auto mild = estimate_power(all[3], 2000, 1);    // one specialist at 0.8
  const auto null = estimate_power(uniform_spec(0.9), 2000, 1);
  EXPECT_GT(weak.power, mild.power);
  EXPECT_GT(mild.power, null.power);
}

TEST(EstimatePower, TooFewReplicates) {
  EXPECT_THROW(estimate_power(uniform_spec(0.9), 999, 1), InvalidArgument);
}

TEST(EstimatePower, Deterministic) {
  const auto a = estimate_power(builtin_scenarios()[5], 1500, 77);
  const auto b = estimate_power(builtin_scenarios()[5], 1500, 77);
  EXPECT_EQ(a.rejections, b.rejections);
  EXPECT_EQ(a.mean_retained_items, b.mean_retained_items);
}

TEST(Prop2, PerfectCapabilityIsOne) {
  const std::vector<double> wrong{0.0, 0.0};
  for (std::size_t s : {6u, 9u, 12u})
    for (double c : {50.0, 60.0, 75.0, 99.0}) EXPECT_DOUBLE_EQ(prop2_w_probability(1.0, wrong, s, c), 1.0);
}

TEST(Prop2, MatchesThresholdEventSimulation) {
  const std::vector<double> wrong{0.05, 0.05};
  const double closed = prop2_w_probability(0.9, wrong, 9, 50);
  const std::size_t draws = 400000;
  const double sim = prop2_event_frequency({0.9, 0.05, 0.05}, 9, 50, draws, 8);
  EXPECT_NEAR(sim, closed, 3.0 * std::sqrt(closed * (1 - closed) / draws));
}

TEST(Prop2, SymmetricCollapsesToSingleTail) {
  for (std::size_t s : {6u, 9u, 12u}) {
    const std::vector<double> wrong{1.0 / 3.0, 1.0 / 3.0};
    const auto f = static_cast<int>(s * 60 / 100);
    double tail = 0.0;
    for (int k = f; k <= static_cast<int>(s) - 1; ++k)
      tail += std::tgamma(s) / (std::tgamma(k + 1) * std::tgamma(static_cast<double>(s) - k)) *
              std::pow(1.0 / 3.0, k) * std::pow(2.0 / 3.0, static_cast<double>(s) - 1 - k);
    EXPECT_NEAR(prop2_w_probability(1.0 / 3.0, wrong, s, 60), tail, 1e-12);
  }
}

TEST(Prop2, RejectsNonDistribution) {
  const std::vector<double> wrong{0.2, 0.2};
  EXPECT_THROW(prop2_w_probability(0.5, wrong, 9, 50), InvalidArgument);
}

}  // namespace
}  // namespace cochranq
