#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stopgen/evolution.hpp"
#include "stopgen/families.hpp"
#include "stopgen/similarity.hpp"

namespace stopgen {

enum class TransferScenario { IntraFamily, InterFamily };

/// "Ta" / "Te".
std::string_view scenario_name(TransferScenario scenario);
/// Accepts intra/inter, ta/te and the enum spellings, case-insensitively.
std::optional<TransferScenario> parse_scenario(std::string_view text);

/// How source optima that leave the unit cube are handled.
///   Clamp:  coordinates are set to the nearest bound (realized similarity may exceed S_i).
///   Strict: the direction point r is redrawn (up to 100 times) until no clamping is needed.
enum class PlacementMode { Clamp, Strict };

inline constexpr int kStrictRetries = 100;

struct StopProblem {
  std::string name;
  TaskInstance target;
  std::vector<TaskInstance> sources;
  TransferScenario scenario;
  SimilaritySpec similarity_spec;
  Eigen::VectorXd assigned_similarities;
  std::vector<bool> clamped;
  std::vector<FamilyId> candidates;
  PlacementMode mode = PlacementMode::Clamp;
  std::uint64_t seed = 0;

  Eigen::Index dim() const { return target.dim(); }
  std::size_t k() const { return sources.size(); }
  /// similarity(source optimum, target optimum) for every source.
  Eigen::VectorXd realized_similarities() const;
};

/// F-T-h-d-k, e.g. "Levy-Te-h4m-30-5".
std::string problem_name(FamilyId target, TransferScenario scenario, SimilarityKind similarity, Eigen::Index dim,
                         std::size_t k);

/// Source optimum o_t + (1 - s) (r - o_t) / ||r - o_t||_inf, before any
/// clamping. Throws std::invalid_argument when r equals o_t.
Eigen::VectorXd place_source_optimum(const Eigen::VectorXd& target_optimum, const Eigen::VectorXd& direction_point,
                                     double similarity_value);

/// Uniform point of the unit cube with its smallest coordinate (first on
/// ties) set to zero.
Eigen::VectorXd sample_target_optimum(Eigen::Index dim, Rng& rng);

/// Builds a STOP: similarity values by inverse transform sampling, a target
/// optimum with a zero coordinate, and one source optimum per value. Sources
/// share the target family (IntraFamily) or draw uniformly, independently,
/// from the other candidates (InterFamily).
StopProblem generate_problem(std::span<const FamilyId> candidates, std::size_t target_index,
                             TransferScenario scenario, const SimilaritySpec& spec, Eigen::Index dim, std::size_t k,
                             std::uint64_t seed, PlacementMode mode = PlacementMode::Clamp);

struct SearchRecord {
  FamilyId family;
  std::vector<Generation> generations;
  Eigen::VectorXd best_solution;
  double best_fitness = 0.0;
};

struct KnowledgeBase {
  StopProblem problem;
  std::vector<SearchRecord> records;
  std::size_t source_budget = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultSourceBudget = 5000;

/// Optimizes every source with the backbone EA (source i uses the child seed
/// derive_seed(seed, SourceOptimization, i)) and stores its generations,
/// keeping every `keep_every`-th one plus the last. Sources run on up to
/// `threads` workers; records stay in source order.
KnowledgeBase build_knowledge_base(const StopProblem& problem, const EAConfig& optimizer,
                                   std::size_t source_budget, std::uint64_t seed, std::size_t keep_every = 1,
                                   unsigned threads = 1);

struct BenchmarkEntry {
  int id;
  FamilyId family;
  TransferScenario scenario;
  SimilarityKind similarity;
  Eigen::Index dim;
};

/// The twelve-problem suite (HS: 1-4, MS: 5-8, LS: 9-12).
const std::array<BenchmarkEntry, 12>& benchmark_suite();

/// Problem `id` of the suite with k sources, drawn from all eight families.
StopProblem make_benchmark(int id, std::size_t k, std::uint64_t seed, PlacementMode mode = PlacementMode::Clamp);

}  // namespace stopgen
