#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cochranq/condition.hpp"
#include "cochranq/csv.hpp"
#include "oracles.hpp"

namespace cochranq {
namespace {

JudgementMatrix sample_panel() { return parse_judgement_csv(testing::read_fixture("sample_panel.csv")); }

std::vector<std::string> labels(const JudgementMatrix& m, const std::vector<DimIndex>& dims) {
  std::vector<std::string> out;
  for (auto d : dims) out.push_back(m.label(d));
  return out;
}

TEST(MajoritySet, SamplePanelRows) {
  const auto m = sample_panel();
  const auto first = majority_set(m, "1");
  EXPECT_EQ(labels(m, first.dimensions), std::vector<std::string>{"T"});
  EXPECT_EQ(first.max_count, 5u);
  EXPECT_TRUE(first.unique());

  const auto second = majority_set(m, "2");
  auto names = labels(m, second.dimensions);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"P", "T"}));
  EXPECT_EQ(second.max_count, 4u);
  EXPECT_FALSE(second.unique());
}

TEST(MajoritySet, Unanimous) {
  const auto m = parse_judgement_csv("item,a,b,c,d,e,f\nq,A,A,A,A,A,A\n");
  const auto set = majority_set(m, "q");
  EXPECT_EQ(set.max_count, 6u);
  EXPECT_TRUE(set.unique());
  EXPECT_THROW(majority_set(m, "missing"), InvalidArgument);
}

TEST(ConcordanceFraction, Examples) {
  EXPECT_DOUBLE_EQ(concordance_fraction(sample_panel(), "4"), 6.0 / 9.0);
  const auto m = parse_judgement_csv(
      "item,1,2,3,4,5,6,7,8,9\nu,A,A,A,A,A,A,A,A,A\nw,A,B,C,A,B,C,A,B,C\n");
  EXPECT_DOUBLE_EQ(concordance_fraction(m, "u"), 1.0);
  EXPECT_DOUBLE_EQ(concordance_fraction(m, "w"), 3.0 / 9.0);
}

TEST(Cvr, Examples) {
  const auto nine = parse_judgement_csv("item,1,2,3,4,5,6,7,8,9\nx,A,A,A,A,A,A,B,B,C\n");
  EXPECT_NEAR(cvr(nine, "x"), 1.0 / 3.0, 1e-15);
  const auto unanimous = parse_judgement_csv("item,1,2,3,4,5\nx,A,A,A,A,A\n");
  EXPECT_DOUBLE_EQ(cvr(unanimous, "x"), 1.0);
  const auto half = parse_judgement_csv("item,1,2,3,4,5,6\nx,A,A,A,B,C,C\n");
  EXPECT_DOUBLE_EQ(cvr(half, "x"), 0.0);
}

TEST(ApplyCondition, SamplePanelCi50MatchesReferenceDimensions) {
  const auto m = sample_panel();
  const auto r = apply_condition(m, ConditionSpec::concordance(50));
  ASSERT_EQ(r.retained.size(), 24u);
  std::set<std::string> excluded;
  for (const auto& e : r.excluded) excluded.insert(m.items()[e.item]);
  EXPECT_EQ(excluded, (std::set<std::string>{"2", "3", "9", "16", "18", "24"}));

  const auto star = csv::read(testing::read_fixture("sample_panel_dimensions.csv"));
  std::map<std::string, std::string> assigned;
  for (const auto& kept : r.retained) assigned[m.items()[kept.item]] = m.label(kept.dimension);
  for (std::size_t i = 1; i < star.size(); ++i) {
    const auto& id = star[i].fields[0];
    const auto& dim = star[i].fields[1];
    if (dim == "-")
      EXPECT_EQ(assigned.count(id), 0u) << "item " << id;
    else
      EXPECT_EQ(assigned[id], dim) << "item " << id;
  }
}

TEST(ApplyCondition, SamplePanelCi60ExcludesItemOne) {
  const auto m = sample_panel();
  const auto r = apply_condition(m, ConditionSpec::concordance(60));
  const auto it = std::find_if(r.excluded.begin(), r.excluded.end(),
                               [](const ExcludedItem& e) { return e.item == 0; });
  ASSERT_NE(it, r.excluded.end());
  EXPECT_EQ(it->reason, ExclusionReason::BelowThreshold);
}

TEST(ApplyCondition, UnanimousAtHundredPercent) {
  const auto m = parse_judgement_csv("item,a,b,c,d,e,f\nq,A,A,A,A,A,A\n");
  EXPECT_EQ(apply_condition(m, ConditionSpec::concordance(100)).retained.size(), 1u);
  // A strict "more than 100%" can never hold.
  const auto strict = apply_condition(m, ConditionSpec::concordance(100, Convention::Published));
  EXPECT_TRUE(strict.retained.empty());
}

TEST(ApplyCondition, EvenPanelTieAtFifty) {
  const auto m = parse_judgement_csv("item,1,2,3,4,5,6\nx,A,A,A,B,B,B\ny,A,A,A,A,B,B\n");
  const auto r = apply_condition(m, ConditionSpec::concordance(50));
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded.front().item, 0u);
  EXPECT_EQ(r.excluded.front().reason, ExclusionReason::Tie);
  const auto strict = apply_condition(m, ConditionSpec::concordance(50, Convention::Published));
  EXPECT_EQ(strict.excluded.front().reason, ExclusionReason::BelowThreshold);
}

TEST(ApplyCondition, CvrRule) {
  const auto m = parse_judgement_csv("item,1,2,3,4,5,6\nx,A,A,A,A,B,B\ny,A,A,A,B,B,C\n");
  const auto r = apply_condition(m, ConditionSpec::content_validity(0.2));
  ASSERT_EQ(r.retained.size(), 1u);
  EXPECT_EQ(r.retained.front().item, 0u);
}

TEST(ConditionSpec, RangeChecks) {
  EXPECT_THROW(ConditionSpec::concordance(49.9), InvalidArgument);
  EXPECT_THROW(ConditionSpec::concordance(100.1), InvalidArgument);
  EXPECT_THROW(ConditionSpec::content_validity(1.5), InvalidArgument);
  EXPECT_EQ(ConditionSpec::concordance(62.5).ci_basis_points, 6250u);
}

TEST(ConcordanceHeadCount, MatchesCeiling) {
  for (std::size_t s = 1; s <= 20; ++s)
    for (std::uint32_t bp = 5000; bp <= 10000; bp += 125) {
      const auto need = concordance_head_count(bp, s);
      EXPECT_GE(10000 * need, bp * s);
      EXPECT_LT(10000 * (need - 1), bp * s);
      const auto strict = concordance_head_count(bp, s, Convention::Published);
      EXPECT_GT(10000 * strict, bp * s);
      EXPECT_LE(10000 * (strict - 1), bp * s);
    }
}

TEST(BuildWMatrix, StandardSamplePanel) {
  const auto m = sample_panel();
  const auto r = apply_condition(m, ConditionSpec::concordance(50));
  const auto w = build_w_matrix(m, r);
  EXPECT_EQ(w.n_items(), 24u);
  EXPECT_EQ(w.n_specialists(), 9u);
  const std::vector<int> first{1, 0, 0, 1, 1, 1, 1, 0, 0};
  for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(w.at(0, j), first[j]);
  EXPECT_EQ(w.row_totals().front(), 5u);
  EXPECT_EQ(w.col_totals(), (std::vector<std::size_t>{17, 17, 20, 16, 20, 20, 19, 14, 12}));
  EXPECT_EQ(w.grand_total(), 155u);
}

TEST(BuildWMatrix, PublishedMatchesPublishedWFixture) {
  const auto m = sample_panel();
  const auto r = apply_condition(m, ConditionSpec::concordance(50, Convention::Published));
  const auto w = build_w_matrix(m, r);

  const auto rows = csv::read(testing::read_fixture("sample_panel_published_w.csv"));
  std::vector<std::string> items;
  std::vector<std::uint8_t> cells;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    items.push_back(rows[i].fields[0]);
    for (std::size_t j = 1; j < rows[i].fields.size(); ++j)
      cells.push_back(static_cast<std::uint8_t>(rows[i].fields[j] == "1"));
  }
  const std::vector<std::string> specialists(rows[0].fields.begin() + 1, rows[0].fields.end());
  const WMatrix expected(items, specialists, cells);
  EXPECT_EQ(w, expected);
  EXPECT_EQ(w.col_totals(), (std::vector<std::size_t>{18, 14, 17, 18, 17, 17, 18, 12, 13}));
  EXPECT_EQ(w.grand_total(), 144u);
}

TEST(BuildWMatrix, UnanimousRowIsAllOnes) {
  const auto m = parse_judgement_csv("item,a,b,c,d,e,f\nq,A,A,A,A,A,A\n");
  const auto w = build_w_matrix(m, apply_condition(m, ConditionSpec::concordance(50)));
  EXPECT_EQ(w.row_totals(), std::vector<std::size_t>{6});
}

TEST(BuildWMatrix, ForeignRetentionRejected) {
  const auto m = sample_panel();
  const auto other = parse_judgement_csv("item,a,b\n1,P,P\n");
  EXPECT_THROW(build_w_matrix(m, apply_condition(other, ConditionSpec::concordance(50))),
               InvalidArgument);
}

JudgementMatrix random_matrix(std::mt19937_64& gen, std::size_t m, std::size_t s, std::size_t n) {
  std::vector<std::string> items, specialists, dims;
  for (std::size_t i = 0; i < m; ++i) items.push_back("i" + std::to_string(i));
  for (std::size_t j = 0; j < s; ++j) specialists.push_back("e" + std::to_string(j));
  for (std::size_t d = 0; d < n; ++d) dims.push_back("D" + std::to_string(d));
  std::vector<DimIndex> cells(m * s);
  for (auto& c : cells) {
    // Skew toward dimension 0 so many items clear the threshold.
    c = static_cast<DimIndex>(gen() % 3 == 0 ? gen() % n : 0);
  }
  return JudgementMatrix(items, specialists, dims, cells);
}

// Property: renaming dimensions never changes which items are retained or
// the W matrix, under either convention.
TEST(Invariants, DimensionRelabel) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 4;
    const auto m = random_matrix(gen, 1 + gen() % 15, 3 + gen() % 8, n);
    std::vector<DimIndex> perm(n);
    std::iota(perm.begin(), perm.end(), DimIndex{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<std::string> dims(n);
    for (std::size_t d = 0; d < n; ++d) dims[perm[d]] = "X" + m.dimensions()[d];
    std::vector<DimIndex> cells;
    for (auto c : m.cells()) cells.push_back(perm[c]);
    const JudgementMatrix renamed(m.items(), m.specialists(), dims, cells);
    for (auto conv : {Convention::Standard, Convention::Published}) {
      const auto spec = ConditionSpec::concordance(50 + static_cast<double>(gen() % 40), conv);
      const auto a = apply_condition(m, spec);
      const auto b = apply_condition(renamed, spec);
      ASSERT_EQ(a.retained.size(), b.retained.size());
      for (std::size_t k = 0; k < a.retained.size(); ++k) {
        EXPECT_EQ(a.retained[k].item, b.retained[k].item);
        EXPECT_EQ(perm[a.retained[k].dimension], b.retained[k].dimension);
      }
      EXPECT_EQ(build_w_matrix(m, a), build_w_matrix(renamed, b));
    }
  }
}

// Property: permuting specialists permutes the W columns and nothing else
// under the standard rule.
TEST(Invariants, SpecialistPermutationPermutesColumns) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_matrix(gen, 2 + gen() % 12, 3 + gen() % 8, 2 + gen() % 3);
    std::vector<std::size_t> cols(m.n_specialists());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    std::shuffle(cols.begin(), cols.end(), gen);
    const auto shuffled = m.restrict_specialists(cols);
    const auto spec = ConditionSpec::concordance(60);
    const auto w = build_w_matrix(m, apply_condition(m, spec));
    const auto ws = build_w_matrix(shuffled, apply_condition(shuffled, spec));
    ASSERT_EQ(w.n_items(), ws.n_items());
    for (std::size_t i = 0; i < w.n_items(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) EXPECT_EQ(ws.at(i, j), w.at(i, cols[j]));
  }
}

// Property: every retained item's W row sum meets the head-count threshold.
TEST(Invariants, RetainedRowsMeetThreshold) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_matrix(gen, 1 + gen() % 10, 2 + gen() % 10, 2 + gen() % 4);
    const auto spec = ConditionSpec::concordance(50 + static_cast<double>(gen() % 51));
    const auto w = build_w_matrix(m, apply_condition(m, spec));
    const auto need = concordance_head_count(spec.ci_basis_points, m.n_specialists());
    for (auto r : w.row_totals()) EXPECT_GE(r, need);
  }
}

TEST(Convention, ParseAndPrint) {
  EXPECT_EQ(parse_convention("standard"), Convention::Standard);
  EXPECT_EQ(parse_convention("published"), Convention::Published);
  EXPECT_EQ(to_string(Convention::Published), "published");
  EXPECT_THROW(parse_convention("other"), InvalidArgument);
}

}  // namespace
}  // namespace cochranq
