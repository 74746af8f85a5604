#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "stopgen/random.hpp"
#include "stopgen/stats.hpp"

using namespace stopgen;
using namespace stopgen::stats;

namespace {

std::vector<double> distinct_values(std::size_t n, Rng& rng, std::set<double>& used) {
  std::vector<double> values;
  while (values.size() < n) {
    const double v = rng.uniform();
    if (used.insert(v).second) values.push_back(v);
  }
  return values;
}

}  // namespace

TEST(Stats, WilcoxonHandExamples) {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const TestResult r = wilcoxon_rank_sum(a, b);
  EXPECT_EQ(r.method, TestMethod::Exact);
  EXPECT_EQ(r.rank_sum, 6.0);
  EXPECT_EQ(r.u, 0.0);
  EXPECT_EQ(r.tail_count, 1u);
  EXPECT_EQ(r.total_count, 20u);
  EXPECT_DOUBLE_EQ(r.p_value, 0.1);

  const std::vector<double> c{1, 2}, d{3, 4};
  const TestResult q = wilcoxon_rank_sum(c, d);
  EXPECT_EQ(q.total_count, 6u);
  EXPECT_DOUBLE_EQ(q.p_value, 2.0 / 6.0);
}

TEST(Stats, WilcoxonIdenticalSamples) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const TestResult r = wilcoxon_rank_sum(a, a);
  EXPECT_EQ(r.method, TestMethod::NormalApprox);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(Stats, WilcoxonRejectsEmpty) {
  const std::vector<double> a{1.0}, empty;
  EXPECT_THROW(wilcoxon_rank_sum(a, empty), std::invalid_argument);
}

TEST(Stats, ExactBranchMatchesEnumeration) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t na = 1 + rng.index(6);
    const std::size_t nb = 1 + rng.index(10 - na);
    std::set<double> used;
    const std::vector<double> a = distinct_values(na, rng, used);
    const std::vector<double> b = distinct_values(nb, rng, used);
    const TestResult r = wilcoxon_rank_sum(a, b);
    const oracle::RankSumEnumeration e = oracle::enumerate_rank_sum(a, b);
    ASSERT_EQ(r.method, TestMethod::Exact);
    EXPECT_EQ(r.total_count, e.total);
    EXPECT_EQ(r.tail_count, std::min(e.at_most, e.at_least));
    EXPECT_DOUBLE_EQ(r.p_value, std::min(1.0, 2.0 * std::min(e.at_most, e.at_least) / double(e.total)));
  }
}

TEST(Stats, ExactBranchLimits) {
  std::vector<double> a(10), b(10), c(11);
  for (int i = 0; i < 10; ++i) {
    a[i] = i;
    b[i] = 10.5 + i;
  }
  for (int i = 0; i < 11; ++i) c[i] = 100.5 + i;
  EXPECT_EQ(wilcoxon_rank_sum(a, b).method, TestMethod::Exact);
  EXPECT_EQ(wilcoxon_rank_sum(a, c).method, TestMethod::NormalApprox);
  const std::vector<double> tied{0, 1, 1, 2};
  EXPECT_EQ(wilcoxon_rank_sum(tied, b).method, TestMethod::NormalApprox);
}

TEST(Stats, NormalApproximationAgreesWithExactAtModerateSize) {
  Rng rng(2);
  std::set<double> used;
  const std::vector<double> a = distinct_values(10, rng, used);
  std::vector<double> b = distinct_values(10, rng, used);
  for (double& v : b) v += 0.3;
  const double exact = wilcoxon_rank_sum(a, b).p_value;
  std::vector<double> a_big = a;
  a_big.push_back(-1.0);  // pushes it past the exact limit with a minimal change
  const double approx = wilcoxon_rank_sum(a_big, b).p_value;
  EXPECT_NEAR(std::log(exact), std::log(approx), 1.0);
}

TEST(Stats, PValueInvariantUnderMonotoneTransform) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(15), b(12);
    for (double& v : a) v = rng.uniform();
    for (double& v : b) v = rng.uniform() + 0.2;
    a[0] = b[0];  // force a tie so both branches are exercised across trials
    if (trial % 2) a[0] = 7.0;
    auto transform = [](double v) { return std::exp(3.0 * v) - 5.0; };
    std::vector<double> ta, tb;
    for (double v : a) ta.push_back(transform(v));
    for (double v : b) tb.push_back(transform(v));
    EXPECT_DOUBLE_EQ(wilcoxon_rank_sum(a, b).p_value, wilcoxon_rank_sum(ta, tb).p_value);
  }
}

TEST(Stats, PValueInRange) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + rng.index(40)), b(1 + rng.index(40));
    for (double& v : a) v = std::floor(rng.uniform() * 5);
    for (double& v : b) v = std::floor(rng.uniform() * 5);
    const double p = wilcoxon_rank_sum(a, b).p_value;
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(Stats, AverageRanks) {
  const std::vector<double> values{10, 20, 20, 5};
  EXPECT_EQ(average_ranks(values), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Stats, SpearmanExamples) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(spearman(a, a).value, 1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{4, 3, 2, 1}).value, -1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{1, 3, 2, 4}).value, 0.8);
  const Correlation flat = spearman(a, std::vector<double>{2, 2, 2, 2});
  EXPECT_TRUE(flat.degenerate);
  EXPECT_EQ(flat.value, 0.0);
}

TEST(Stats, KendallConcordance) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(kendall_concordance(a, a).value, 1.0);
  EXPECT_DOUBLE_EQ(kendall_concordance(a, std::vector<double>{4, 3, 2, 1}).value, -1.0);
  // One discordant pair out of six.
  EXPECT_DOUBLE_EQ(kendall_concordance(a, std::vector<double>{1, 3, 2, 4}).value, 4.0 / 6.0);
  // Tied pair contributes nothing.
  EXPECT_DOUBLE_EQ(kendall_concordance(a, std::vector<double>{1, 1, 2, 3}).value, 5.0 / 6.0);
}

TEST(Stats, Median) {
  EXPECT_EQ(median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_EQ(median(std::vector<double>{4, 1, 2, 3}), 2.5);
}

TEST(Stats, RankingGroupsIdenticalSamples) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  const RankingReport report = ranking_groups({{"A", v}, {"B", v}});
  EXPECT_EQ(report.group_count(), 1);
}

TEST(Stats, RankingGroupsSeparatedSamples) {
  Rng rng(10);
  std::vector<AlgorithmSample> samples{{"mid", {}}, {"low", {}}, {"high", {}}};
  const double centres[] = {100.0, 0.0, 200.0};
  for (int s = 0; s < 3; ++s) {
    for (int i = 0; i < 30; ++i) samples[s].values.push_back(centres[s] + 1e-3 * rng.uniform());
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) EXPECT_LT(wilcoxon_rank_sum(samples[i].values, samples[j].values).p_value, 0.05);
  }
  const RankingReport report = ranking_groups(samples);
  ASSERT_EQ(report.order.size(), 3u);
  EXPECT_EQ(report.order[0].algorithm, "low");
  EXPECT_EQ(report.order[1].algorithm, "mid");
  EXPECT_EQ(report.order[2].algorithm, "high");
  EXPECT_EQ(report.group_count(), 3);

  // Positive rescaling leaves the report unchanged.
  for (auto& sample : samples) {
    for (double& v : sample.values) v *= 1e6;
  }
  const RankingReport scaled = ranking_groups(samples);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(scaled.order[i].algorithm, report.order[i].algorithm);
    EXPECT_EQ(scaled.order[i].group, report.order[i].group);
  }
}

TEST(Stats, RankingGroupsChainAdjacentPairs) {
  std::vector<AlgorithmSample> samples{{"A", {}}, {"B", {}}, {"C", {}}};
  for (int i = 0; i < 30; ++i) {
    samples[0].values.push_back(i);
    samples[1].values.push_back(i + 0.5);
    samples[2].values.push_back(i + 1000);
  }
  const RankingReport report = ranking_groups(samples);
  EXPECT_EQ(report.order[0].group, 1);
  EXPECT_EQ(report.order[1].group, 1);
  EXPECT_EQ(report.order[2].group, 2);
  ASSERT_EQ(report.adjacent_p.size(), 2u);
  EXPECT_GE(report.adjacent_p[0], 0.05);
}

TEST(Stats, RankingCsv) {
  const RankingReport report = ranking_groups({{"A", {1, 2, 3}}, {"B", {1, 2, 3}}});
  std::ostringstream out;
  write_ranking_csv(out, report, "P");
  EXPECT_EQ(out.str(), "problem,rank,algorithm,median,group_id\nP,1,A,2,1\nP,2,B,2,1\n");
}
