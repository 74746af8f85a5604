#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace stopgen::stats {

enum class TestMethod { Exact, NormalApprox };

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test of `a` against `b`.
struct TestResult {
  double rank_sum = 0.0;   // sum of pooled ranks of `a`
  double u = 0.0;          // rank_sum - n_a (n_a + 1) / 2
  double p_value = 1.0;
  TestMethod method = TestMethod::NormalApprox;
  /// Exact branch only: arrangements at least as extreme (smaller tail) and
  /// the total C(n_a + n_b, n_a); p = min(1, 2 * tail / total).
  std::uint64_t tail_count = 0;
  std::uint64_t total_count = 0;
};

inline constexpr std::size_t kExactLimit = 20;
inline constexpr double kDefaultAlpha = 0.05;

/// Uses the exact null distribution when n_a + n_b <= 20 and the pooled data
/// has no ties; otherwise the normal approximation with tie-corrected
/// variance and continuity correction. Throws on an empty sample.
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Average (mid) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

struct Correlation {
  double value = 0.0;
  /// Set when an input is constant and the value is defined as 0.
  bool degenerate = false;
};

/// Pearson correlation of average ranks.
Correlation spearman(std::span<const double> a, std::span<const double> b);

/// (concordant - discordant) / total pairs; tied pairs count as neither.
Correlation kendall_concordance(std::span<const double> a, std::span<const double> b);

double median(std::span<const double> values);

struct RankedEntry {
  std::string algorithm;
  double median = 0.0;
  int group = 0;  // 1-based
};

/// Algorithms ordered by median (ascending, stable). A new group starts
/// whenever an adjacent pair differs at level alpha.
struct RankingReport {
  std::vector<RankedEntry> order;
  std::vector<double> adjacent_p;  // p-value between order[i] and order[i+1]
  int group_count() const { return order.empty() ? 0 : order.back().group; }
};

struct AlgorithmSample {
  std::string algorithm;
  std::vector<double> values;
};

RankingReport ranking_groups(const std::vector<AlgorithmSample>& samples, double alpha = kDefaultAlpha);

/// CSV columns: problem,rank,algorithm,median,group_id (problem omitted when empty).
void write_ranking_csv(std::ostream& out, const RankingReport& report, const std::string& problem = "",
                       bool header = true);

}  // namespace stopgen::stats
