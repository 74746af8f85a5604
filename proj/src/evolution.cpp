#include "stopgen/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "stopgen/csv.hpp"

namespace stopgen {

void EAConfig::validate() const {
  if (pop_size < 2 || pop_size % 2 != 0) throw std::invalid_argument("population size must be even and >= 2");
  if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
    throw std::invalid_argument("crossover probability must lie in [0,1]");
  }
  if (mutation_probability && !(*mutation_probability >= 0.0 && *mutation_probability <= 1.0)) {
    throw std::invalid_argument("mutation probability must lie in [0,1]");
  }
  if (!(crossover_index > 0.0) || !(mutation_index > 0.0)) {
    throw std::invalid_argument("distribution indices must be positive");
  }
}

double EAConfig::mutation_probability_for(Eigen::Index dim) const {
  return mutation_probability.value_or(1.0 / static_cast<double>(dim));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover_unclipped(const Eigen::VectorXd& parent_a,
                                                                    const Eigen::VectorXd& parent_b,
                                                                    double eta, double probability, Rng& rng) {
  if (parent_a.size() != parent_b.size()) throw std::invalid_argument("sbx: parent dimension mismatch");
  Eigen::VectorXd child_a = parent_a;
  Eigen::VectorXd child_b = parent_b;
  if (rng.uniform() >= probability) return {child_a, child_b};
  const double exponent = 1.0 / (eta + 1.0);
  for (Eigen::Index j = 0; j < parent_a.size(); ++j) {
    const double u = rng.uniform();
    const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent) : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
    // Written around the midpoint so identical parents reproduce exactly.
    const double mid = 0.5 * (parent_a(j) + parent_b(j));
    const double half_spread = 0.5 * beta * (parent_b(j) - parent_a(j));
    double first = mid - half_spread;
    double second = mid + half_spread;
    // Variable-wise exchange between the two children.
    if (rng.uniform() < 0.5) std::swap(first, second);
    child_a(j) = first;
    child_b(j) = second;
  }
  return {child_a, child_b};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover(const Eigen::VectorXd& parent_a,
                                                          const Eigen::VectorXd& parent_b, double eta,
                                                          double probability, Rng& rng) {
  auto children = sbx_crossover_unclipped(parent_a, parent_b, eta, probability, rng);
  children.first = children.first.cwiseMax(0.0).cwiseMin(1.0);
  children.second = children.second.cwiseMax(0.0).cwiseMin(1.0);
  return children;
}

Eigen::VectorXd polynomial_mutation(const Eigen::VectorXd& x, double eta, double probability, Rng& rng) {
  Eigen::VectorXd y = x;
  const double exponent = 1.0 / (eta + 1.0);
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (rng.uniform() >= probability) continue;
    const double value = y(j);
    const double u = rng.uniform();
    double delta;
    if (u <= 0.5) {
      const double xy = 1.0 - value;  // 1 - distance to the lower bound
      const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
      delta = std::pow(val, exponent) - 1.0;
    } else {
      const double xy = value;  // 1 - distance to the upper bound
      const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
      delta = 1.0 - std::pow(val, exponent);
    }
    y(j) = std::clamp(value + delta, 0.0, 1.0);
  }
  return y;
}

namespace {

class Evolution {
 public:
  Evolution(const TaskInstance& task, const EAConfig& config, std::uint64_t seed, const RecordOptions& record)
      : task_(task),
        config_(config),
        record_(record),
        budget_(config.max_evaluations),
        rng_(derive_seed(seed, SeedRole::Evolution)),
        noise_(derive_seed(seed, SeedRole::Noise)),
        mutation_probability_(config.mutation_probability_for(task.dim())) {
    result_.seed = seed;
  }

  RunResult run(const InjectionHook& hook) {
    const Eigen::Index n = config_.pop_size;
    const Eigen::Index d = task_.dim();
    population_.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) population_(i, j) = rng_.uniform();
    }
    fitness_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) fitness_(i) = evaluate(population_.row(i).transpose());

    if (hook) {
      InjectionContext context(population_, fitness_, [this](const Eigen::VectorXd& z) { return evaluate(z); },
                               budget_);
      try {
        hook(context);
      } catch (const BudgetExhausted&) {
        result_.truncated = true;
      }
    }
    record_generation(0, false);

    std::size_t generation = 0;
    while (!result_.truncated && budget_.remaining() >= static_cast<std::size_t>(n)) {
      step();
      ++generation;
      const bool last = budget_.remaining() < static_cast<std::size_t>(n);
      record_generation(generation, last);
    }

    const Eigen::Index best = best_index();
    result_.final_best_solution = population_.row(best).transpose();
    result_.final_best_value = fitness_(best);
    result_.final_best_noise_free = evaluate_noise_free(task_, result_.final_best_solution);
    result_.evals_used = budget_.used();
    return std::move(result_);
  }

 private:
  double evaluate(const Eigen::VectorXd& z) { return stopgen::evaluate(task_, z, budget_, noise_); }

  Eigen::Index best_index() const {
    Eigen::Index best = 0;
    fitness_.minCoeff(&best);
    return best;
  }

  void record_generation(std::size_t generation, bool last) {
    const Eigen::Index best = best_index();
    HistoryPoint point;
    point.generation = generation;
    point.evals_used = budget_.used();
    point.best_so_far = fitness_(best);
    point.best_so_far_noise_free = evaluate_noise_free(task_, population_.row(best).transpose());
    result_.history.push_back(point);
    if (record_.record_generations) {
      const std::size_t every = std::max<std::size_t>(1, record_.keep_every);
      if (generation % every == 0 || last) {
        result_.generations.push_back({population_, fitness_});
      }
    }
  }

  void step() {
    const Eigen::Index n = config_.pop_size;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng_.index(i + 1)]);
    }

    Eigen::MatrixXd offspring(n, population_.cols());
    for (Eigen::Index p = 0; p < n; p += 2) {
      const Eigen::VectorXd a = population_.row(order[static_cast<std::size_t>(p)]).transpose();
      const Eigen::VectorXd b = population_.row(order[static_cast<std::size_t>(p + 1)]).transpose();
      auto [child_a, child_b] =
          sbx_crossover(a, b, config_.crossover_index, config_.crossover_probability, rng_);
      offspring.row(p) = polynomial_mutation(child_a, config_.mutation_index, mutation_probability_, rng_).transpose();
      offspring.row(p + 1) =
          polynomial_mutation(child_b, config_.mutation_index, mutation_probability_, rng_).transpose();
    }
    Eigen::VectorXd offspring_fitness(n);
    for (Eigen::Index i = 0; i < n; ++i) offspring_fitness(i) = evaluate(offspring.row(i).transpose());

    // (mu + lambda) truncation: keep the best half of parents plus offspring.
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(2 * n));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    auto pool_fitness = [&](Eigen::Index i) { return i < n ? fitness_(i) : offspring_fitness(i - n); };
    std::stable_sort(pool.begin(), pool.end(),
                     [&](Eigen::Index lhs, Eigen::Index rhs) { return pool_fitness(lhs) < pool_fitness(rhs); });
    Eigen::MatrixXd next(n, population_.cols());
    Eigen::VectorXd next_fitness(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index src = pool[static_cast<std::size_t>(i)];
      next.row(i) = src < n ? population_.row(src) : offspring.row(src - n);
      next_fitness(i) = pool_fitness(src);
    }
    population_ = std::move(next);
    fitness_ = std::move(next_fitness);
  }

  const TaskInstance& task_;
  const EAConfig& config_;
  RecordOptions record_;
  EvalBudget budget_;
  Rng rng_;
  Rng noise_;
  double mutation_probability_;
  Eigen::MatrixXd population_;
  Eigen::VectorXd fitness_;
  RunResult result_;
};

}  // namespace

RunResult optimize(const TaskInstance& task, const EAConfig& config, std::uint64_t seed, const InjectionHook& hook,
                   const RecordOptions& record) {
  config.validate();
  if (config.max_evaluations < static_cast<std::size_t>(config.pop_size)) {
    throw std::invalid_argument("budget of " + std::to_string(config.max_evaluations) +
                                " evaluations cannot cover one population of " + std::to_string(config.pop_size));
  }
  return Evolution(task, config, seed, record).run(hook);
}

void write_history_csv(std::ostream& out, const RunResult& result) {
  csv::write_row(out, {"generation", "evals_used", "best_so_far", "best_so_far_noise_free"});
  for (const auto& point : result.history) {
    csv::write_row(out, {std::to_string(point.generation), std::to_string(point.evals_used),
                         csv::format(point.best_so_far), csv::format(point.best_so_far_noise_free)});
  }
}

}  // namespace stopgen
