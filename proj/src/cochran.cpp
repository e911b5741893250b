#include "cochranq/cochran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <omp.h>

#include "cochranq/random.hpp"
#include "cochranq/special_functions.hpp"

namespace cochranq {
namespace {

void require_testable(const WMatrix& w) {
  if (w.n_items() == 0) throw InvalidArgument("W matrix has no rows");
  if (w.n_specialists() < 2) throw InvalidArgument("W matrix needs at least two specialists");
}

std::uint64_t sum_of_squares(std::span<const std::size_t> totals) {
  std::uint64_t acc = 0;
  for (auto d : totals) acc += static_cast<std::uint64_t>(d) * d;
  return acc;
}

std::uint64_t denominator(const WMatrix& w) {
  const auto s = w.n_specialists();
  std::uint64_t den = 0;
  for (auto r : w.row_totals()) den += static_cast<std::uint64_t>(r) * (s - r);
  return den;
}

// Q from the column sum of squares: (s-1)(s*sum D^2 - N^2) / sum R(s-R).
double q_from_squares(std::uint64_t squares, std::size_t s, std::size_t n, std::uint64_t den) {
  const double numerator = static_cast<double>(s) * static_cast<double>(squares) -
                           static_cast<double>(n) * static_cast<double>(n);
  return static_cast<double>(s - 1) * numerator / static_cast<double>(den);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    result = result * num / i;
  }
  return result;
}

QTestResult base_result(const WMatrix& w, Method method) {
  QTestResult r;
  r.df = static_cast<int>(w.n_specialists()) - 1;
  r.method = method;
  r.n_items = w.n_items();
  r.n_specialists = w.n_specialists();
  return r;
}

QTestResult degenerate_result(const WMatrix& w, Method method) {
  auto r = base_result(w, method);
  r.degenerate = true;
  r.q = 0.0;
  r.p_value = 1.0;
  if (method == Method::MonteCarlo) r.mc_std_error = 0.0;
  return r;
}

// All C(s, k) column subsets of size k, lexicographic.
std::vector<std::vector<std::uint16_t>> combinations(std::size_t s, std::size_t k) {
  std::vector<std::vector<std::uint16_t>> out;
  std::vector<std::uint16_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::uint16_t{0});
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == s - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = static_cast<std::uint16_t>(idx[j - 1] + 1);
  }
  return out;
}

struct McProblem {
  std::vector<std::size_t> row_totals;
  std::size_t s = 0;
  std::uint64_t observed_squares = 0;
};

// One replicate: redraw every row's placement and report whether the
// column sum of squares reaches the observed one.
bool replicate_reaches(const McProblem& problem, std::uint64_t seed,
                       std::vector<std::uint32_t>& totals, std::vector<std::uint16_t>& perm) {
  Rng rng(seed);
  std::fill(totals.begin(), totals.end(), 0U);
  const auto s = problem.s;
  for (auto r : problem.row_totals) {
    if (r == 0) continue;
    if (r == s) {
      for (auto& t : totals) ++t;
      continue;
    }
    std::iota(perm.begin(), perm.end(), std::uint16_t{0});
    for (std::size_t i = 0; i < r; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(s - i));
      std::swap(perm[i], perm[j]);
      ++totals[perm[i]];
    }
  }
  std::uint64_t squares = 0;
  for (auto t : totals) squares += static_cast<std::uint64_t>(t) * t;
  return squares >= problem.observed_squares;
}

QTestResult finish_mc(const WMatrix& w, const QStatistic& stat, std::uint64_t hits,
                      std::uint64_t replicates) {
  auto r = base_result(w, Method::MonteCarlo);
  r.q = stat.q;
  const double p = (1.0 + static_cast<double>(hits)) / (static_cast<double>(replicates) + 1.0);
  r.p_value = p;
  r.mc_std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
  return r;
}

McProblem make_problem(const WMatrix& w) {
  return {w.row_totals(), w.n_specialists(), sum_of_squares(w.col_totals())};
}

void check_mc_budget(const PermutationBudget& budget) {
  if (budget.mc_replicates < kMinMcReplicates)
    throw InvalidArgument("Monte Carlo needs at least " + std::to_string(kMinMcReplicates) +
                          " replicates");
}

}  // namespace

QStatistic q_statistic(const WMatrix& w) {
  require_testable(w);
  const auto den = denominator(w);
  if (den == 0) return {0.0, true};
  const double q = q_from_squares(sum_of_squares(w.col_totals()), w.n_specialists(),
                                  w.grand_total(), den);
  return {std::max(q, 0.0), false};
}

std::uint64_t arrangement_count(const WMatrix& w) {
  std::uint64_t total = 1;
  for (auto r : w.row_totals()) {
    const auto c = binomial(w.n_specialists(), r);
    if (c != 0 && total > std::numeric_limits<std::uint64_t>::max() / c)
      return std::numeric_limits<std::uint64_t>::max();
    total *= c;
  }
  return total;
}

QTestResult asymptotic_p(const WMatrix& w) {
  const auto stat = q_statistic(w);
  if (stat.degenerate) return degenerate_result(w, Method::Asymptotic);
  auto r = base_result(w, Method::Asymptotic);
  r.q = stat.q;
  r.p_value = chi_square_sf(stat.q, r.df);
  return r;
}

QTestResult exact_p(const WMatrix& w, const PermutationBudget& budget) {
  const auto stat = q_statistic(w);
  const auto count = arrangement_count(w);
  if (count > budget.exact_cutoff)
    throw ArrangementLimitExceeded("exact enumeration needs " + std::to_string(count) +
                                   " arrangements; cutoff is " +
                                   std::to_string(budget.exact_cutoff));
  if (stat.degenerate) return degenerate_result(w, Method::Exact);

  const auto s = w.n_specialists();
  const auto observed = sum_of_squares(w.col_totals());

  // The null law is invariant under column permutations, so column totals
  // are tracked as sorted vectors and their probabilities merged.
  using State = std::vector<std::uint16_t>;
  std::map<State, double> dist{{State(s, 0), 1.0}};
  std::map<std::size_t, std::vector<std::vector<std::uint16_t>>> placements;
  for (auto r : w.row_totals()) {
    auto [it, inserted] = placements.try_emplace(r);
    if (inserted) it->second = combinations(s, r);
    const auto& combos = it->second;
    const double weight = 1.0 / static_cast<double>(combos.size());
    std::map<State, double> next;
    for (const auto& [state, prob] : dist) {
      for (const auto& combo : combos) {
        State moved = state;
        for (auto c : combo) ++moved[c];
        std::sort(moved.begin(), moved.end(), std::greater<>());
        next[std::move(moved)] += prob * weight;
      }
    }
    dist = std::move(next);
  }

  double p = 0.0;
  for (const auto& [state, prob] : dist) {
    std::uint64_t squares = 0;
    for (auto d : state) squares += static_cast<std::uint64_t>(d) * d;
    if (squares >= observed) p += prob;
  }
  auto r = base_result(w, Method::Exact);
  r.q = stat.q;
  r.p_value = std::min(p, 1.0);
  return r;
}

QTestResult mc_permutation_p_serial(const WMatrix& w, const PermutationBudget& budget) {
  check_mc_budget(budget);
  const auto stat = q_statistic(w);
  if (stat.degenerate) return degenerate_result(w, Method::MonteCarlo);
  const auto problem = make_problem(w);
  std::vector<std::uint32_t> totals(problem.s);
  std::vector<std::uint16_t> perm(problem.s);
  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b < budget.mc_replicates; ++b)
    hits += replicate_reaches(problem, derive_seed(budget.seed, b), totals, perm) ? 1 : 0;
  return finish_mc(w, stat, hits, budget.mc_replicates);
}

QTestResult mc_permutation_p(const WMatrix& w, const PermutationBudget& budget) {
  check_mc_budget(budget);
  const auto stat = q_statistic(w);
  if (stat.degenerate) return degenerate_result(w, Method::MonteCarlo);
  const auto problem = make_problem(w);
  const auto replicates = static_cast<std::int64_t>(budget.mc_replicates);
  const int threads = budget.workers > 0 ? budget.workers : omp_get_max_threads();
  std::uint64_t hits = 0;
#pragma omp parallel num_threads(threads) reduction(+ : hits)
  {
    std::vector<std::uint32_t> totals(problem.s);
    std::vector<std::uint16_t> perm(problem.s);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < replicates; ++b)
      hits += replicate_reaches(problem, derive_seed(budget.seed, static_cast<std::uint64_t>(b)),
                                totals, perm)
                  ? 1
                  : 0;
  }
  return finish_mc(w, stat, hits, budget.mc_replicates);
}

QTestResult run_test(const WMatrix& w, Method method, const PermutationBudget& budget) {
  switch (method) {
    case Method::Exact:
      return exact_p(w, budget);
    case Method::MonteCarlo:
      return mc_permutation_p(w, budget);
    case Method::Asymptotic:
      return asymptotic_p(w);
    case Method::Auto:
      break;
  }
  require_testable(w);
  if (arrangement_count(w) <= budget.exact_cutoff) return exact_p(w, budget);
  if (w.n_items() >= kAutoAsymptoticItems) return asymptotic_p(w);
  return mc_permutation_p(w, budget);
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Auto:
      return "auto";
    case Method::Exact:
      return "exact";
    case Method::MonteCarlo:
      return "mc";
    case Method::Asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "auto") return Method::Auto;
  if (text == "exact") return Method::Exact;
  if (text == "mc" || text == "montecarlo") return Method::MonteCarlo;
  if (text == "asymptotic") return Method::Asymptotic;
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

}  // namespace cochranq
