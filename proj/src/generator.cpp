#include "stopgen/generator.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "stopgen/parallel.hpp"

namespace stopgen {

std::string_view scenario_name(TransferScenario scenario) {
  return scenario == TransferScenario::IntraFamily ? "Ta" : "Te";
}

std::optional<TransferScenario> parse_scenario(std::string_view text) {
  std::string key(text);
  for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "intra" || key == "ta" || key == "t_a" || key == "intrafamily") return TransferScenario::IntraFamily;
  if (key == "inter" || key == "te" || key == "t_e" || key == "interfamily") return TransferScenario::InterFamily;
  return std::nullopt;
}

Eigen::VectorXd StopProblem::realized_similarities() const {
  Eigen::VectorXd values(static_cast<Eigen::Index>(sources.size()));
  for (std::size_t i = 0; i < sources.size(); ++i) {
    values(static_cast<Eigen::Index>(i)) = similarity(sources[i].optimum(), target.optimum());
  }
  return values;
}

std::string problem_name(FamilyId target, TransferScenario scenario, SimilarityKind kind, Eigen::Index dim,
                         std::size_t k) {
  std::string name(family_name(target));
  name += '-';
  name += scenario_name(scenario);
  name += '-';
  name += similarity_name(kind);
  name += '-' + std::to_string(dim) + '-' + std::to_string(k);
  return name;
}

Eigen::VectorXd place_source_optimum(const Eigen::VectorXd& target_optimum, const Eigen::VectorXd& direction_point,
                                     double similarity_value) {
  if (target_optimum.size() != direction_point.size()) throw std::invalid_argument("dimension mismatch");
  const Eigen::VectorXd step = direction_point - target_optimum;
  const double length = step.cwiseAbs().maxCoeff();
  if (!(length > 0.0)) throw std::invalid_argument("direction point coincides with the target optimum");
  return target_optimum + ((1.0 - similarity_value) / length) * step;
}

Eigen::VectorXd sample_target_optimum(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXd optimum(dim);
  for (Eigen::Index j = 0; j < dim; ++j) optimum(j) = rng.uniform();
  Eigen::Index smallest = 0;
  optimum.minCoeff(&smallest);  // first index on ties
  optimum(smallest) = 0.0;
  return optimum;
}

namespace {

Eigen::VectorXd uniform_point(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXd point(dim);
  for (Eigen::Index j = 0; j < dim; ++j) point(j) = rng.uniform();
  return point;
}

bool inside_unit_cube(const Eigen::VectorXd& point) {
  return (point.array() >= 0.0).all() && (point.array() <= 1.0).all();
}

}  // namespace

StopProblem generate_problem(std::span<const FamilyId> candidates, std::size_t target_index,
                             TransferScenario scenario, const SimilaritySpec& spec, Eigen::Index dim, std::size_t k,
                             std::uint64_t seed, PlacementMode mode) {
  if (k < 1) throw std::invalid_argument("a STOP needs at least one source task");
  if (dim < 1) throw std::invalid_argument("task dimension must be positive");
  if (target_index >= candidates.size()) throw std::invalid_argument("target family index out of range");
  if (scenario == TransferScenario::InterFamily && candidates.size() < 2) {
    throw std::invalid_argument("inter-family transfer needs at least two candidate families");
  }

  Rng similarity_rng(derive_seed(seed, SeedRole::Similarity));
  const Eigen::VectorXd assigned = sample_similarities(spec, k, similarity_rng);

  Rng target_rng(derive_seed(seed, SeedRole::TargetOptimum));
  const Eigen::VectorXd target_optimum = sample_target_optimum(dim, target_rng);
  const FamilyId target_family = candidates[target_index];

  std::vector<FamilyId> others;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i != target_index) others.push_back(candidates[i]);
  }

  std::vector<TaskInstance> sources;
  std::vector<bool> clamped(k, false);
  sources.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = assigned(static_cast<Eigen::Index>(i));
    Rng direction_rng(derive_seed(seed, SeedRole::SourceDirection, i));
    Eigen::VectorXd optimum;
    int attempts = 0;
    while (true) {
      const Eigen::VectorXd r = uniform_point(dim, direction_rng);
      if (!((r - target_optimum).cwiseAbs().maxCoeff() > 0.0)) continue;  // r == o_t
      optimum = place_source_optimum(target_optimum, r, s);
      if (inside_unit_cube(optimum)) break;
      if (mode == PlacementMode::Clamp) {
        optimum = optimum.cwiseMax(0.0).cwiseMin(1.0);
        clamped[i] = true;
        break;
      }
      if (++attempts >= kStrictRetries) {
        throw std::runtime_error("strict placement failed for source " + std::to_string(i) + " after " +
                                 std::to_string(kStrictRetries) + " direction draws");
      }
    }

    FamilyId family = target_family;
    if (scenario == TransferScenario::InterFamily) {
      Rng family_rng(derive_seed(seed, SeedRole::SourceFamily, i));
      family = others[family_rng.index(others.size())];
    }
    sources.emplace_back(family, std::move(optimum));
  }

  return StopProblem{
      problem_name(target_family, scenario, spec.kind(), dim, k),
      TaskInstance(target_family, target_optimum),
      std::move(sources),
      scenario,
      spec,
      assigned,
      std::move(clamped),
      std::vector<FamilyId>(candidates.begin(), candidates.end()),
      mode,
      seed,
  };
}

KnowledgeBase build_knowledge_base(const StopProblem& problem, const EAConfig& optimizer, std::size_t source_budget,
                                   std::uint64_t seed, std::size_t keep_every, unsigned threads) {
  if (problem.k() == 0) throw std::invalid_argument("knowledge base needs at least one source");
  EAConfig config = optimizer;
  config.max_evaluations = source_budget;
  config.validate();
  if (source_budget < static_cast<std::size_t>(config.pop_size)) {
    throw std::invalid_argument("source budget smaller than one population");
  }

  RecordOptions record;
  record.record_generations = true;
  record.keep_every = std::max<std::size_t>(1, keep_every);

  std::vector<SearchRecord> records(problem.k());
  parallel_for(problem.k(), threads, [&](std::size_t i) {
    const TaskInstance& source = problem.sources[i];
    RunResult run = optimize(source, config, derive_seed(seed, SeedRole::SourceOptimization, i), {}, record);
    SearchRecord entry;
    entry.family = source.family();
    entry.generations = std::move(run.generations);
    entry.best_fitness = std::numeric_limits<double>::infinity();
    for (const auto& generation : entry.generations) {
      Eigen::Index best = 0;
      const double value = generation.fitness.minCoeff(&best);
      if (value < entry.best_fitness) {
        entry.best_fitness = value;
        entry.best_solution = generation.population.row(best).transpose();
      }
    }
    records[i] = std::move(entry);
  });
  return KnowledgeBase{problem, std::move(records), source_budget, seed};
}

const std::array<BenchmarkEntry, 12>& benchmark_suite() {
  using F = FamilyId;
  using S = SimilarityKind;
  constexpr auto Ta = TransferScenario::IntraFamily;
  constexpr auto Te = TransferScenario::InterFamily;
  static const std::array<BenchmarkEntry, 12> suite = {{
      {1, F::Sphere, Ta, S::H1h, 50},
      {2, F::Ellipsoid, Te, S::H2h, 25},
      {3, F::Schwefel22, Ta, S::H2h, 30},
      {4, F::QuarticNoise, Te, S::H1h, 50},
      {5, F::Ackley, Ta, S::M1, 25},
      {6, F::Rastrigin, Te, S::M2, 50},
      {7, F::Griewank, Ta, S::M3, 25},
      {8, F::Levy, Te, S::M4, 30},
      {9, F::Sphere, Ta, S::L1, 25},
      {10, F::Rastrigin, Te, S::L2, 30},
      {11, F::Ackley, Ta, S::L2, 50},
      {12, F::Ellipsoid, Te, S::L1, 50},
  }};
  return suite;
}

StopProblem make_benchmark(int id, std::size_t k, std::uint64_t seed, PlacementMode mode) {
  if (id < 1 || id > 12) throw std::invalid_argument("benchmark id must be in 1..12");
  const BenchmarkEntry& entry = benchmark_suite()[static_cast<std::size_t>(id - 1)];
  const auto target = std::find(kAllFamilies.begin(), kAllFamilies.end(), entry.family);
  return generate_problem(kAllFamilies, static_cast<std::size_t>(target - kAllFamilies.begin()), entry.scenario,
                          SimilaritySpec::builtin(entry.similarity), entry.dim, k, seed, mode);
}

}  // namespace stopgen
