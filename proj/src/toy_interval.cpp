#include "stopgen/toy_interval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "stopgen/csv.hpp"

namespace stopgen::toy {

namespace {

constexpr double kTieTolerance = 1e-12;

void validate(const IntervalTask& task) {
  if (!(task.l1 >= 0.0 && task.l1 <= 1.0 && task.l2 >= 0.0 && task.l2 <= 1.0)) {
    throw std::invalid_argument("station locations must lie in [0,1]");
  }
}

void validate(const DecisionSpace& space) {
  if (!(space.u1 > 0.0 && space.u2 > 0.0) || !std::isfinite(space.u1) || !std::isfinite(space.u2)) {
    throw std::invalid_argument("decision space bounds must be positive and finite");
  }
}

bool better(const Radii& candidate, const Radii& incumbent) {
  const double diff = candidate.sum() - incumbent.sum();
  if (diff < -kTieTolerance) return true;
  if (diff > kTieTolerance) return false;
  const double balance = std::abs(candidate.x1 - candidate.x2) - std::abs(incumbent.x1 - incumbent.x2);
  if (balance < -kTieTolerance) return true;
  if (balance > kTieTolerance) return false;
  return candidate.x1 > incumbent.x1 + kTieTolerance;
}

}  // namespace

IntervalTask sample_task(const FeatureDistribution& dist, Rng& rng) {
  if (dist.kind == FeatureDistribution::Kind::Uniform) {
    const double l1 = rng.uniform();
    return {l1, rng.uniform()};
  }
  auto draw = [&](double mean) {
    while (true) {
      const double value = mean + dist.sigma * rng.normal();
      if (value >= 0.0 && value <= 1.0) return value;
    }
  };
  const double l1 = draw(dist.mean1);
  return {l1, draw(dist.mean2)};
}

bool covers(const IntervalTask& task, const Radii& radii, double tolerance) {
  std::array<std::pair<double, double>, 2> pieces = {
      std::pair{task.l1 - radii.x1, task.l1 + radii.x1},
      std::pair{task.l2 - radii.x2, task.l2 + radii.x2},
  };
  std::sort(pieces.begin(), pieces.end());
  double reach = 0.0;
  for (const auto& [low, high] : pieces) {
    if (low > reach + tolerance) return false;
    reach = std::max(reach, high);
  }
  return reach >= 1.0 - tolerance;
}

Radii solve(const IntervalTask& task) {
  validate(task);
  const bool swapped = task.l1 > task.l2;
  const double left = swapped ? task.l2 : task.l1;
  const double right = swapped ? task.l1 : task.l2;

  // Joint cover: the left station reaches 0, the right one reaches 1, and the
  // two pieces meet: x_left >= left, x_right >= 1 - right, sum >= right - left.
  Radii joint;
  const double floor_sum = left + (1.0 - right);
  const double gap = right - left;
  if (floor_sum >= gap) {
    joint = {left, 1.0 - right};
  } else {
    const double upper = gap - (1.0 - right);
    const double x_left = std::clamp(0.5 * gap, left, upper);
    joint = {x_left, gap - x_left};
  }
  if (swapped) std::swap(joint.x1, joint.x2);

  const Radii solo_first{std::max(task.l1, 1.0 - task.l1), 0.0};
  const Radii solo_second{0.0, std::max(task.l2, 1.0 - task.l2)};

  Radii best = joint;
  for (const Radii& candidate : {solo_first, solo_second}) {
    if (better(candidate, best)) best = candidate;
  }
  return best;
}

CoverageResult optimum_coverage(const DecisionSpace& space, std::span<const Radii> optima, int grid) {
  validate(space);
  if (grid < 10) throw std::invalid_argument("coverage grid needs at least 10 cells per axis");
  const auto cells = static_cast<std::size_t>(grid);
  std::vector<bool> occupied(cells * cells, false);
  CoverageResult result;
  result.total = cells * cells;
  for (const Radii& x : optima) {
    if (x.x1 < 0.0 || x.x2 < 0.0 || x.x1 > space.u1 || x.x2 > space.u2) {
      ++result.outside;
      continue;
    }
    const auto i = std::min(cells - 1, static_cast<std::size_t>(x.x1 / space.u1 * grid));
    const auto j = std::min(cells - 1, static_cast<std::size_t>(x.x2 / space.u2 * grid));
    if (!occupied[i * cells + j]) {
      occupied[i * cells + j] = true;
      ++result.occupied;
    }
  }
  result.gamma = static_cast<double>(result.occupied) / static_cast<double>(result.total);
  return result;
}

CoverageResult optimum_coverage(const DecisionSpace& space, std::size_t samples, int grid,
                                const FeatureDistribution& dist, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("coverage needs at least one task");
  Rng rng(derive_seed(seed, SeedRole::ToyTasks));
  std::vector<Radii> optima;
  optima.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) optima.push_back(solve(sample_task(dist, rng)));
  return optimum_coverage(space, optima, grid);
}

Eigen::VectorXd toy_similarities(std::size_t k, const FeatureDistribution& dist, std::uint64_t seed,
                                 const DecisionSpace& space) {
  if (k < 1) throw std::invalid_argument("need at least one source task");
  validate(space);
  Rng rng(derive_seed(seed, SeedRole::ToyTasks));
  auto normalized = [&](const Radii& x) {
    return Eigen::Vector2d(std::min(1.0, x.x1 / space.u1), std::min(1.0, x.x2 / space.u2));
  };
  const Eigen::Vector2d target = normalized(solve(sample_task(dist, rng)));
  Eigen::VectorXd values(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values(i) = similarity(normalized(solve(sample_task(dist, rng))), target);
  }
  return values;
}

HistogramEstimate toy_similarity_experiment(std::size_t k, const FeatureDistribution& dist, std::uint64_t seed,
                                            Eigen::Index bins, const DecisionSpace& space) {
  return estimate_density(toy_similarities(k, dist, seed, space), bins);
}

void write_mapping_csv(std::ostream& out, std::span<const IntervalTask> tasks) {
  csv::write_row(out, {"l1", "l2", "x1", "x2"});
  for (const IntervalTask& task : tasks) {
    const Radii x = solve(task);
    csv::write_row(out, {csv::format(task.l1), csv::format(task.l2), csv::format(x.x1), csv::format(x.x2)});
  }
}

}  // namespace stopgen::toy
