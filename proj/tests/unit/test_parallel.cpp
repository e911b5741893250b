#include <random>

#include <gtest/gtest.h>

#include "cochranq/cochran.hpp"
#include "cochranq/powersim.hpp"
#include "cochranq/subgroup.hpp"
#include "oracles.hpp"

namespace cochranq {
namespace {

TEST(Parallel, McPermutationMatchesSerial) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = WMatrix::from_rows(testing::random_w(gen, 1'000'000));
    PermutationBudget budget;
    budget.mc_replicates = 5000;
    budget.seed = gen();
    const auto serial = mc_permutation_p_serial(w, budget);
    for (int workers : {1, 2, 3, 4}) {
      budget.workers = workers;
      const auto par = mc_permutation_p(w, budget);
      EXPECT_EQ(par.p_value, serial.p_value) << "workers=" << workers;
      EXPECT_EQ(par.mc_std_error, serial.mc_std_error);
    }
  }
}

TEST(Parallel, PowerMatchesSerial) {
  const auto all = builtin_scenarios();
  for (const auto& spec : {all[1], all[6], all[9]}) {
    const auto serial = estimate_power_serial(spec, 1000, 2024);
    for (int workers : {1, 2, 3, 4}) {
      const auto par = estimate_power(spec, 1000, 2024, workers);
      EXPECT_EQ(par.rejections, serial.rejections) << spec.name << " workers=" << workers;
      EXPECT_EQ(par.mean_retained_items, serial.mean_retained_items);
    }
  }
}

TEST(Parallel, SubgroupsMatchSerial) {
  const auto m = parse_judgement_csv(testing::read_fixture("sample_panel.csv"));
  SubgroupOptions options;
  options.method = Method::MonteCarlo;
  options.budget.mc_replicates = 1000;
  options.min_size = 7;
  const auto spec = ConditionSpec::concordance(50);
  const auto serial = write_subgroup_csv(analyze_subgroups_serial(m, spec, options));
  for (int workers : {1, 2, 3, 4}) {
    options.workers = workers;
    EXPECT_EQ(write_subgroup_csv(analyze_subgroups(m, spec, options)), serial);
  }
}

}  // namespace
}  // namespace cochranq
