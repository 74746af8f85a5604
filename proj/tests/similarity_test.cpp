#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "stopgen/similarity.hpp"

using namespace stopgen;

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST(Similarity, NamesParseBack) {
  for (SimilarityKind kind : kBuiltinSimilarities) EXPECT_EQ(parse_similarity_kind(similarity_name(kind)), kind);
  EXPECT_EQ(parse_similarity_kind("m4"), SimilarityKind::M4);
  EXPECT_EQ(parse_similarity_kind("H2L"), SimilarityKind::L2);
  EXPECT_FALSE(parse_similarity_kind("h5m"));
}

TEST(Similarity, CdfExamples) {
  EXPECT_DOUBLE_EQ(cdf(SimilaritySpec::builtin(SimilarityKind::M1), 0.5), 0.5);
  EXPECT_DOUBLE_EQ(cdf(SimilaritySpec::builtin(SimilarityKind::H2h), 0.75), 0.25);
  EXPECT_DOUBLE_EQ(cdf(SimilaritySpec::builtin(SimilarityKind::L2), 0.5), 1.0);
  EXPECT_DOUBLE_EQ(cdf(SimilaritySpec::builtin(SimilarityKind::H1h), 0.999), 0.0);
  EXPECT_DOUBLE_EQ(cdf(SimilaritySpec::builtin(SimilarityKind::H1h), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(cdf(SimilaritySpec::builtin(SimilarityKind::L1), 0.0), 1.0);
  EXPECT_THROW(cdf(SimilaritySpec::builtin(SimilarityKind::M1), 1.5), std::out_of_range);
}

TEST(Similarity, InverseExamples) {
  EXPECT_DOUBLE_EQ(inverse_cdf(SimilaritySpec::builtin(SimilarityKind::M1), 0.37), 0.37);
  EXPECT_DOUBLE_EQ(inverse_cdf(SimilaritySpec::builtin(SimilarityKind::M2), 0.25), 0.5);
  EXPECT_EQ(inverse_cdf(SimilaritySpec::builtin(SimilarityKind::H1h), 0.0), 1.0);
  EXPECT_EQ(inverse_cdf(SimilaritySpec::builtin(SimilarityKind::L1), 0.99), 0.0);
}

TEST(Similarity, InverseMatchesBisectionOracle) {
  for (SimilarityKind kind : kBuiltinSimilarities) {
    const SimilaritySpec spec = SimilaritySpec::builtin(kind);
    if (spec.is_point_mass()) continue;
    for (int i = 1; i < 100; ++i) {
      const double u = i / 100.0;
      const double expected = oracle::bisect_inverse([&](double s) { return cdf(spec, s); }, u);
      EXPECT_NEAR(inverse_cdf(spec, u), expected, 1e-9) << similarity_name(kind) << " u=" << u;
    }
  }
}

TEST(Similarity, InverseConsistency) {
  Rng rng(21);
  for (SimilarityKind kind : kBuiltinSimilarities) {
    const SimilaritySpec spec = SimilaritySpec::builtin(kind);
    if (spec.is_point_mass()) continue;
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      EXPECT_NEAR(cdf(spec, inverse_cdf(spec, u)), u, 1e-10) << similarity_name(kind);
    }
  }
}

TEST(Similarity, DensityIntegratesToCdf) {
  for (SimilarityKind kind : kBuiltinSimilarities) {
    const SimilaritySpec spec = SimilaritySpec::builtin(kind);
    if (spec.is_point_mass()) {
      EXPECT_THROW(pdf(spec, 0.5), std::domain_error);
      continue;
    }
    // Midpoint rule; densities are piecewise linear so this converges fast.
    const int steps = 20000;
    double integral = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double s = (i + 0.5) / steps;
      integral += pdf(spec, s) / steps;
      if (i % 2000 == 1999) EXPECT_NEAR(integral, cdf(spec, (i + 1.0) / steps), 1e-6) << similarity_name(kind);
    }
    EXPECT_NEAR(integral, 1.0, 1e-6);
  }
}

TEST(Similarity, SamplesMatchDistribution) {
  for (SimilarityKind kind : kBuiltinSimilarities) {
    const SimilaritySpec spec = SimilaritySpec::builtin(kind);
    Rng rng(1000 + static_cast<int>(kind));
    const Eigen::VectorXd sample = sample_similarities(spec, 10000, rng);
    ASSERT_EQ(sample.size(), 10000);
    EXPECT_GE(sample.minCoeff(), 0.0);
    EXPECT_LE(sample.maxCoeff(), 1.0);
    if (kind == SimilarityKind::H1h) {
      EXPECT_TRUE((sample.array() == 1.0).all());
    } else if (kind == SimilarityKind::L1) {
      EXPECT_TRUE((sample.array() == 0.0).all());
    } else {
      EXPECT_LT(ks_statistic(spec, to_vector(sample)), 0.02) << similarity_name(kind);
    }
  }
}

TEST(Similarity, ChebyshevExamples) {
  EXPECT_EQ(similarity(Eigen::Vector2d(0.3, 0.4), Eigen::Vector2d(0.3, 0.4)), 1.0);
  EXPECT_EQ(similarity(Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 0.0)), 0.0);
  EXPECT_EQ(similarity(Eigen::Vector2d(0.5, 0.75), Eigen::Vector2d(0.0, 0.5)), 0.5);
  EXPECT_THROW(similarity(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Similarity, ChebyshevSymmetricAndOneOnlyWhenEqual) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd a(4), b(4);
    for (int j = 0; j < 4; ++j) {
      a(j) = rng.uniform();
      b(j) = rng.uniform();
    }
    EXPECT_EQ(similarity(a, b), similarity(b, a));
    EXPECT_LT(similarity(a, b), 1.0);
    EXPECT_GE(similarity(a, b), 0.0);
  }
}

TEST(Similarity, HistogramBinning) {
  EXPECT_EQ(histogram_bin(0.0, 20), 0);
  EXPECT_EQ(histogram_bin(0.05, 20), 0);
  EXPECT_EQ(histogram_bin(0.0500001, 20), 1);
  EXPECT_EQ(histogram_bin(1.0, 20), 19);
  EXPECT_EQ(histogram_bin(-0.01, 20), -1);
  EXPECT_EQ(histogram_bin(1.01, 20), -1);
}

TEST(Similarity, HistogramExamples) {
  const std::vector<double> ones{1, 1, 1, 1};
  const HistogramEstimate all_last = estimate_density(ones, 20);
  EXPECT_EQ(all_last.mass(19), 1.0);
  EXPECT_EQ(all_last.mass.sum(), 1.0);

  const std::vector<double> mixed{0.1, 0.1, 0.6, 0.9};
  const HistogramEstimate h = estimate_density(mixed, 20);
  EXPECT_DOUBLE_EQ(h.mass(1), 0.5);   // (0.05, 0.1]
  EXPECT_DOUBLE_EQ(h.mass(11), 0.25);  // (0.55, 0.6]
  EXPECT_DOUBLE_EQ(h.mass(17), 0.25);  // (0.85, 0.9]
  EXPECT_DOUBLE_EQ(h.mass.sum(), 1.0);
  EXPECT_DOUBLE_EQ(h.density()(1), 10.0);
  EXPECT_DOUBLE_EQ(h.bin_low(1), 0.05);
  EXPECT_DOUBLE_EQ(h.bin_high(1), 0.1);
}

TEST(Similarity, HistogramOfPointMassAtZeroSumsToOne) {
  Rng rng(2);
  const Eigen::VectorXd sample = sample_similarities(SimilaritySpec::builtin(SimilarityKind::L1), 50, rng);
  const HistogramEstimate h = estimate_density(sample, 20);
  EXPECT_EQ(h.mass(0), 1.0);
}

TEST(Similarity, UniformHistogramConcentrates) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const HistogramEstimate h =
        estimate_density(sample_similarities(SimilaritySpec::builtin(SimilarityKind::M1), 10000, rng), 20);
    EXPECT_NEAR(h.mass.sum(), 1.0, 1e-12);
    EXPECT_LE((h.mass.array() - 0.05).abs().maxCoeff(), 0.01) << "seed " << seed;
  }
}

TEST(Similarity, AnalyticBinMass) {
  for (SimilarityKind kind : kBuiltinSimilarities) {
    const Eigen::VectorXd mass = analytic_bin_mass(SimilaritySpec::builtin(kind), 20);
    EXPECT_NEAR(mass.sum(), 1.0, 1e-12);
    EXPECT_GE(mass.minCoeff(), 0.0);
  }
  const Eigen::VectorXd m2 = analytic_bin_mass(SimilaritySpec::builtin(SimilarityKind::M2), 4);
  EXPECT_NEAR(m2(0), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(m2(3), 1.0 - 9.0 / 16.0, 1e-15);
  EXPECT_EQ(analytic_bin_mass(SimilaritySpec::builtin(SimilarityKind::L1), 20)(0), 1.0);
}

TEST(Similarity, CustomDensityAccepted) {
  // Same shape as M2.
  const SimilaritySpec spec = SimilaritySpec::custom({{0.0, 0.0}, {1.0, 2.0}});
  EXPECT_EQ(spec.kind(), SimilarityKind::CustomPiecewiseLinear);
  for (double s : {0.0, 0.1, 0.5, 0.9, 1.0}) EXPECT_NEAR(cdf(spec, s), s * s, 1e-12);
  for (double u : {0.0, 0.01, 0.25, 0.64, 1.0}) EXPECT_NEAR(inverse_cdf(spec, u), std::sqrt(u), 1e-12);
}

TEST(Similarity, CustomStepLikeDensity) {
  // Flat segment with zero density in the middle.
  const SimilaritySpec spec =
      SimilaritySpec::custom({{0.0, 2.0}, {0.24, 2.0}, {0.26, 0.0}, {0.74, 0.0}, {0.76, 2.0}, {1.0, 2.0}});
  Rng rng(9);
  const Eigen::VectorXd sample = sample_similarities(spec, 5000, rng);
  for (double s : to_vector(sample)) EXPECT_TRUE(s <= 0.26 || s >= 0.74) << s;
  for (int i = 1; i < 100; ++i) {
    const double u = i / 100.0;
    EXPECT_NEAR(cdf(spec, inverse_cdf(spec, u)), u, 1e-9);
  }
}

TEST(Similarity, CustomDensityRejected) {
  EXPECT_THROW(SimilaritySpec::custom({{0.0, 1.0}, {0.5, -0.5}, {1.0, 2.5}}), std::invalid_argument);
  EXPECT_THROW(SimilaritySpec::custom({{0.0, 1.0}, {1.0, 1.1}}), std::invalid_argument);
  EXPECT_THROW(SimilaritySpec::custom({{0.1, 1.0}, {1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SimilaritySpec::custom({{0.0, 1.0}, {0.5, 1.0}, {0.5, 1.0}, {1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SimilaritySpec::custom({{0.0, 1.0}}), std::invalid_argument);
}

TEST(Similarity, HistogramCsvLayout) {
  std::ostringstream out;
  write_histogram_csv(out, estimate_density(std::vector<double>{0.1, 0.9}, 2));
  EXPECT_EQ(out.str(), "bin_low,bin_high,mass,density\n0,0.5,0.5,1\n0.5,1,0.5,1\n");
}

TEST(Similarity, SamplingIsSeedDeterministic) {
  const SimilaritySpec spec = SimilaritySpec::builtin(SimilarityKind::M4);
  Rng a(77), b(77);
  EXPECT_EQ(sample_similarities(spec, 100, a), sample_similarities(spec, 100, b));
}
