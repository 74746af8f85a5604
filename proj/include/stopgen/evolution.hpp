#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stopgen/families.hpp"
#include "stopgen/random.hpp"

namespace stopgen {

/// Backbone EA settings. Defaults: population 50, SBX (p_c = 1, eta_c = 15),
/// polynomial mutation (p_m = 1/d, eta_m = 15), 5000 evaluations.
struct EAConfig {
  int pop_size = 50;
  double crossover_probability = 1.0;
  double crossover_index = 15.0;
  std::optional<double> mutation_probability;  // unset means 1/d
  double mutation_index = 15.0;
  std::size_t max_evaluations = 5000;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  double mutation_probability_for(Eigen::Index dim) const;
};

/// Population (one individual per row, normalized coordinates) and fitness.
struct Generation {
  Eigen::MatrixXd population;
  Eigen::VectorXd fitness;
};

struct HistoryPoint {
  std::size_t generation = 0;
  std::size_t evals_used = 0;
  double best_so_far = 0.0;
  double best_so_far_noise_free = 0.0;
};

struct RunResult {
  std::vector<HistoryPoint> history;
  double final_best_value = 0.0;
  double final_best_noise_free = 0.0;
  Eigen::VectorXd final_best_solution;
  std::size_t evals_used = 0;
  std::uint64_t seed = 0;
  /// Set when the budget ran out inside an injection hook.
  bool truncated = false;
  /// Post-selection generations; only filled when recording is requested.
  std::vector<Generation> generations;
};

/// What an injection hook may touch: the evaluated initial population and a
/// budgeted evaluator for the target. The target's definition is not exposed.
class InjectionContext {
 public:
  InjectionContext(Eigen::MatrixXd& population, Eigen::VectorXd& fitness, std::function<double(const Eigen::VectorXd&)> evaluator,
                   const EvalBudget& budget)
      : population_(population), fitness_(fitness), evaluator_(std::move(evaluator)), budget_(budget) {}

  Eigen::MatrixXd& population() { return population_; }
  Eigen::VectorXd& fitness() { return fitness_; }
  /// Charges one evaluation; throws BudgetExhausted when none is left.
  double evaluate(const Eigen::VectorXd& z) { return evaluator_(z); }
  std::size_t evals_used() const { return budget_.used(); }
  std::size_t evals_remaining() const { return budget_.remaining(); }

 private:
  Eigen::MatrixXd& population_;
  Eigen::VectorXd& fitness_;
  std::function<double(const Eigen::VectorXd&)> evaluator_;
  const EvalBudget& budget_;
};

/// Called once, after the initial population is evaluated and before the
/// first variation step.
using InjectionHook = std::function<void(InjectionContext&)>;

struct RecordOptions {
  bool record_generations = false;
  /// Store every g-th generation (the last one is always stored).
  std::size_t keep_every = 1;
};

/// Runs the EA on `task` until another full generation would exceed the
/// budget. Throws std::invalid_argument when the budget cannot pay for the
/// initial population.
RunResult optimize(const TaskInstance& task, const EAConfig& config, std::uint64_t seed,
                   const InjectionHook& hook = {}, const RecordOptions& record = {});

/// Simulated binary crossover without the final clip to [0,1]. Every variable
/// gets its own spread factor, and the two child values of a variable are
/// exchanged with probability 1/2. The children's midpoint equals the
/// parents' midpoint in every coordinate.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover_unclipped(const Eigen::VectorXd& parent_a,
                                                                    const Eigen::VectorXd& parent_b,
                                                                    double eta, double probability, Rng& rng);

/// SBX followed by clipping to [0,1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover(const Eigen::VectorXd& parent_a,
                                                          const Eigen::VectorXd& parent_b, double eta,
                                                          double probability, Rng& rng);

/// Bounded polynomial mutation on [0,1]; each variable mutates with `probability`.
Eigen::VectorXd polynomial_mutation(const Eigen::VectorXd& x, double eta, double probability, Rng& rng);

/// CSV columns: generation,evals_used,best_so_far,best_so_far_noise_free
void write_history_csv(std::ostream& out, const RunResult& result);

}  // namespace stopgen
