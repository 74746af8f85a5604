#include "stopgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "stopgen/csv.hpp"

namespace stopgen::stats {

namespace {

// Number of size-m subsets of {1..n} per rank sum, by dynamic programming.
std::vector<std::uint64_t> rank_sum_counts(std::size_t m, std::size_t n) {
  const std::size_t max_sum = n * (n + 1) / 2;
  // ways[j][s]: subsets of size j with sum s over the ranks seen so far.
  std::vector<std::vector<std::uint64_t>> ways(m + 1, std::vector<std::uint64_t>(max_sum + 1, 0));
  ways[0][0] = 1;
  for (std::size_t rank = 1; rank <= n; ++rank) {
    for (std::size_t j = std::min(m, rank); j >= 1; --j) {
      for (std::size_t s = max_sum; s >= rank; --s) ways[j][s] += ways[j - 1][s - rank];
    }
  }
  return ways[m];
}

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("rank-sum test needs two nonempty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = average_ranks(pooled);

  const double n_a = static_cast<double>(a.size());
  const double n_b = static_cast<double>(b.size());
  const double n = n_a + n_b;
  TestResult result;
  result.rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  result.u = result.rank_sum - n_a * (n_a + 1.0) / 2.0;

  // Tie groups, for both the exact-branch guard and the variance correction.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  if (pooled.size() <= kExactLimit && !ties) {
    const auto counts = rank_sum_counts(a.size(), pooled.size());
    const auto w = static_cast<std::size_t>(std::llround(result.rank_sum));
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      total += counts[s];
      if (s <= w) lower += counts[s];
      if (s >= w) upper += counts[s];
    }
    result.method = TestMethod::Exact;
    result.tail_count = std::min(lower, upper);
    result.total_count = total;
    result.p_value = std::min(1.0, 2.0 * static_cast<double>(result.tail_count) / static_cast<double>(total));
    return result;
  }

  result.method = TestMethod::NormalApprox;
  const double mean = n_a * (n + 1.0) / 2.0;
  const double variance = n_a * n_b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  const double deviation = std::max(0.0, std::abs(result.rank_sum - mean) - 0.5);
  result.p_value = std::clamp(normal_two_sided(deviation / std::sqrt(variance)), 0.0, 1.0);
  return result;
}

Correlation spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("spearman needs equal lengths >= 2");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return {0.0, true};
  return {std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0), false};
}

Correlation kendall_concordance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("concordance needs equal lengths >= 2");
  long concordant = 0;
  long discordant = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double product = (a[i] - a[j]) * (b[i] - b[j]);
      if (product > 0.0) ++concordant;
      if (product < 0.0) ++discordant;
    }
  }
  const double pairs = static_cast<double>(a.size() * (a.size() - 1) / 2);
  const bool constant = std::adjacent_find(a.begin(), a.end(), std::not_equal_to<>()) == a.end() ||
                        std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) == b.end();
  return {static_cast<double>(concordant - discordant) / pairs, constant};
}

double median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  return sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

RankingReport ranking_groups(const std::vector<AlgorithmSample>& samples, double alpha) {
  if (samples.size() < 2) throw std::invalid_argument("ranking needs at least two algorithms");
  std::vector<double> medians;
  for (const auto& sample : samples) medians.push_back(median(sample.values));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return medians[l] < medians[r]; });

  RankingReport report;
  int group = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) {
      const double p = wilcoxon_rank_sum(samples[order[i - 1]].values, samples[order[i]].values).p_value;
      report.adjacent_p.push_back(p);
      if (p < alpha) ++group;
    }
    report.order.push_back({samples[order[i]].algorithm, medians[order[i]], group});
  }
  return report;
}

void write_ranking_csv(std::ostream& out, const RankingReport& report, const std::string& problem, bool header) {
  const bool with_problem = !problem.empty();
  if (header) {
    if (with_problem) {
      csv::write_row(out, {"problem", "rank", "algorithm", "median", "group_id"});
    } else {
      csv::write_row(out, {"rank", "algorithm", "median", "group_id"});
    }
  }
  for (std::size_t i = 0; i < report.order.size(); ++i) {
    const auto& entry = report.order[i];
    std::vector<std::string> row;
    if (with_problem) row.push_back(problem);
    row.push_back(std::to_string(i + 1));
    row.push_back(entry.algorithm);
    row.push_back(csv::format(entry.median));
    row.push_back(std::to_string(entry.group));
    csv::write_row(out, row);
  }
}

}  // namespace stopgen::stats
