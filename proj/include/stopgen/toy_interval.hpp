#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stopgen/random.hpp"
#include "stopgen/similarity.hpp"

namespace stopgen::toy {

/// Two stations on [0,1]; the task is to cover the interval with the
/// smallest total radius.
struct IntervalTask {
  double l1 = 0.0;
  double l2 = 0.0;
};

struct Radii {
  double x1 = 0.0;
  double x2 = 0.0;
  double sum() const { return x1 + x2; }
};

/// Box [0,u1] x [0,u2] of admissible radii.
struct DecisionSpace {
  double u1 = 1.0;
  double u2 = 1.0;
};

/// The three spaces of the coverage experiment: [0,1]^2, [0,1.4]^2, [0,6]^2.
inline constexpr std::array<DecisionSpace, 3> kDefaultSpaces = {{{1.0, 1.0}, {1.4, 1.4}, {6.0, 6.0}}};

struct FeatureDistribution {
  enum class Kind { Uniform, TruncatedGaussian };
  Kind kind = Kind::Uniform;
  double mean1 = 0.5;
  double mean2 = 0.5;
  double sigma = 0.15;

  static FeatureDistribution uniform() { return {}; }
  static FeatureDistribution gaussian(double mean1 = 0.5, double mean2 = 0.5, double sigma = 0.15) {
    return {Kind::TruncatedGaussian, mean1, mean2, sigma};
  }
};

/// Station locations drawn from `dist`; Gaussian draws are rejected until both lie in [0,1].
IntervalTask sample_task(const FeatureDistribution& dist, Rng& rng);

/// True when [l1 +- x1] and [l2 +- x2] together cover [0,1] (to within `tolerance`).
bool covers(const IntervalTask& task, const Radii& radii, double tolerance = 1e-12);

/// Minimal-sum radii. Candidates are the joint cover (each station holds one
/// end) and either station alone. Among minimal sums the most balanced pair
/// wins, then the one with the larger x1.
Radii solve(const IntervalTask& task);

struct CoverageResult {
  double gamma = 0.0;
  std::size_t occupied = 0;
  std::size_t total = 0;
  /// Optima that fell outside the space and were not counted.
  std::size_t outside = 0;
};

/// Fraction of grid x grid cells of `space` that hold at least one optimum.
CoverageResult optimum_coverage(const DecisionSpace& space, std::span<const Radii> optima, int grid);

/// Samples `samples` tasks from `dist`, solves them and measures coverage.
CoverageResult optimum_coverage(const DecisionSpace& space, std::size_t samples, int grid,
                                const FeatureDistribution& dist, std::uint64_t seed);

/// One target and k sources drawn from `dist`, solved exactly, mapped into
/// the unit square by dividing by the space bounds; returns the histogram of
/// source-target similarities.
HistogramEstimate toy_similarity_experiment(std::size_t k, const FeatureDistribution& dist, std::uint64_t seed,
                                            Eigen::Index bins = 20, const DecisionSpace& space = kDefaultSpaces[1]);

/// Similarity values behind toy_similarity_experiment.
Eigen::VectorXd toy_similarities(std::size_t k, const FeatureDistribution& dist, std::uint64_t seed,
                                 const DecisionSpace& space = kDefaultSpaces[1]);

/// CSV columns: l1,l2,x1,x2
void write_mapping_csv(std::ostream& out, std::span<const IntervalTask> tasks);

}  // namespace stopgen::toy
