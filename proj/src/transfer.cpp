#include "stopgen/transfer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stopgen/csv.hpp"
#include "stopgen/stats.hpp"

namespace stopgen {

std::string_view algorithm_name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::N: return "N";
    case AlgorithmId::R: return "R";
    case AlgorithmId::H: return "H";
    case AlgorithmId::E: return "E";
    case AlgorithmId::KLD: return "KLD";
    case AlgorithmId::WD: return "WD";
    case AlgorithmId::OC: return "OC";
    case AlgorithmId::ROC: return "ROC";
    case AlgorithmId::SA: return "SA";
  }
  throw std::logic_error("unknown algorithm");
}

std::optional<AlgorithmId> parse_algorithm(std::string_view text) {
  std::string key(text);
  for (char& c : key) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (AlgorithmId id : kAllAlgorithms) {
    if (key == algorithm_name(id)) return id;
  }
  return std::nullopt;
}

std::size_t argmax_lowest_index(const Eigen::VectorXd& scores) {
  if (scores.size() == 0) throw std::invalid_argument("argmax of an empty score vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(best)) best = i;
  }
  return static_cast<std::size_t>(best);
}

double hamming_score(const Eigen::VectorXd& source_elite, const Eigen::VectorXd& target_best) {
  if (source_elite.size() != target_best.size()) throw std::invalid_argument("dimension mismatch");
  const auto a = (source_elite.array() >= 0.5);
  const auto b = (target_best.array() >= 0.5);
  return -static_cast<double>((a != b).count());
}

double euclidean_score(const Eigen::VectorXd& source_elite, const Eigen::VectorXd& target_best) {
  if (source_elite.size() != target_best.size()) throw std::invalid_argument("dimension mismatch");
  return -(source_elite - target_best).norm();
}

DiagonalGaussian fit_diagonal_gaussian(const Eigen::MatrixXd& cloud) {
  if (cloud.rows() < 1) throw std::invalid_argument("cannot fit a Gaussian to an empty cloud");
  DiagonalGaussian fit;
  fit.mean = cloud.colwise().mean().transpose();
  const Eigen::MatrixXd centered = cloud.rowwise() - fit.mean.transpose();
  fit.variance = (centered.array().square().colwise().sum() / static_cast<double>(cloud.rows()))
                     .transpose()
                     .max(kVarianceFloor)
                     .matrix();
  return fit;
}

double diagonal_kl(const DiagonalGaussian& source, const DiagonalGaussian& target) {
  const Eigen::ArrayXd vs = source.variance.array();
  const Eigen::ArrayXd vt = target.variance.array();
  const Eigen::ArrayXd diff = (source.mean - target.mean).array();
  return 0.5 * ((vt / vs).log() + (vs + diff.square()) / vt - 1.0).sum();
}

double diagonal_w2_squared(const DiagonalGaussian& source, const DiagonalGaussian& target) {
  return (source.mean - target.mean).squaredNorm() +
         (source.variance.array().sqrt() - target.variance.array().sqrt()).square().sum();
}

PrincipalDirections principal_directions(const Eigen::MatrixXd& cloud, Eigen::Index p) {
  const Eigen::Index d = cloud.cols();
  if (p < 1 || p > d) throw std::invalid_argument("direction count must lie in [1, d]");
  if (cloud.rows() < p + 1) throw std::invalid_argument("cloud needs at least p + 1 points");
  const Eigen::MatrixXd centered = cloud.rowwise() - cloud.colwise().mean();
  const Eigen::MatrixXd covariance = centered.transpose() * centered / static_cast<double>(cloud.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) throw std::runtime_error("covariance eigen-decomposition failed");

  PrincipalDirections result;
  result.basis.resize(d, p);
  result.eigenvalues.resize(p);
  const double largest = std::max(solver.eigenvalues()(d - 1), 0.0);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::Index src = d - 1 - i;  // eigenvalues come ascending
    Eigen::VectorXd direction = solver.eigenvectors().col(src);
    Eigen::Index pivot = 0;
    direction.cwiseAbs().maxCoeff(&pivot);
    if (direction(pivot) < 0.0) direction = -direction;
    result.basis.col(i) = direction;
    result.eigenvalues(i) = solver.eigenvalues()(src);
    if (result.eigenvalues(i) <= 1e-12 * std::max(1.0, largest)) result.rank_deficient = true;
  }
  return result;
}

double subspace_alignment_score(const Eigen::MatrixXd& source_cloud, const Eigen::MatrixXd& target_cloud,
                                Eigen::Index p) {
  const PrincipalDirections source = principal_directions(source_cloud, p);
  const PrincipalDirections target = principal_directions(target_cloud, p);
  return (source.basis.transpose() * target.basis).norm() / std::sqrt(static_cast<double>(p));
}

namespace {

// Up to kCorrelationSampleSize distinct rows of `cloud`, by partial Fisher-Yates.
std::vector<Eigen::Index> sample_rows(Eigen::Index rows, Rng& rng) {
  std::vector<Eigen::Index> index(static_cast<std::size_t>(rows));
  std::iota(index.begin(), index.end(), Eigen::Index{0});
  const auto take = static_cast<std::size_t>(std::min(rows, kCorrelationSampleSize));
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(index.size() - i));
    std::swap(index[i], index[j]);
  }
  index.resize(take);
  return index;
}

class SourceSelector {
 public:
  SourceSelector(AlgorithmId algorithm, std::span<const SearchRecord> sources, std::uint64_t seed,
                 SelectionOutcome& outcome)
      : algorithm_(algorithm), sources_(sources), seed_(seed), outcome_(outcome) {}

  void operator()(InjectionContext& context) {
    const std::size_t start = context.evals_used();
    outcome_.scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sources_.size()));
    try {
      score(context);
    } catch (const BudgetExhausted&) {
      outcome_.extra_evals = context.evals_used() - start;
      throw;
    }
    outcome_.extra_evals = context.evals_used() - start;

    const std::size_t chosen = argmax_lowest_index(outcome_.scores);
    outcome_.chosen_source = chosen;
    const Eigen::VectorXd& elite = sources_[chosen].best_solution;
    const double value = context.evaluate(elite);
    Eigen::Index worst = 0;
    context.fitness().maxCoeff(&worst);
    context.population().row(worst) = elite.transpose();
    context.fitness()(worst) = value;
  }

 private:
  void score(InjectionContext& context) {
    const Eigen::MatrixXd& target_cloud = context.population();
    Eigen::Index best = 0;
    context.fitness().minCoeff(&best);
    const Eigen::VectorXd target_best = target_cloud.row(best).transpose();
    const DiagonalGaussian target_fit = fit_diagonal_gaussian(target_cloud);
    const Eigen::Index directions = std::min<Eigen::Index>(target_cloud.cols(), kAlignmentDirections);

    Rng random_scores(derive_seed(seed_, SeedRole::Selection));
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      const SearchRecord& record = sources_[i];
      if (record.generations.empty()) throw std::invalid_argument("source record without generations");
      const Generation& last = record.generations.back();
      double value = 0.0;
      switch (algorithm_) {
        case AlgorithmId::N: break;
        case AlgorithmId::R: value = random_scores.uniform(); break;
        case AlgorithmId::H: value = hamming_score(record.best_solution, target_best); break;
        case AlgorithmId::E: value = euclidean_score(record.best_solution, target_best); break;
        case AlgorithmId::KLD: value = -diagonal_kl(fit_diagonal_gaussian(last.population), target_fit); break;
        case AlgorithmId::WD:
          value = -diagonal_w2_squared(fit_diagonal_gaussian(last.population), target_fit);
          break;
        case AlgorithmId::OC:
        case AlgorithmId::ROC: value = correlation_score(context, last, i); break;
        case AlgorithmId::SA: value = subspace_alignment_score(last.population, target_cloud, directions); break;
      }
      outcome_.scores(static_cast<Eigen::Index>(i)) = value;
    }
  }

  double correlation_score(InjectionContext& context, const Generation& last, std::size_t source) {
    Rng rng(derive_seed(seed_, SeedRole::Selection, source + 1));
    const auto rows = sample_rows(last.population.rows(), rng);
    std::vector<double> stored;
    std::vector<double> observed;
    for (Eigen::Index row : rows) {
      stored.push_back(last.fitness(row));
      observed.push_back(context.evaluate(last.population.row(row).transpose()));
    }
    if (stored.size() < 2) return 0.0;
    return algorithm_ == AlgorithmId::OC ? stats::spearman(stored, observed).value
                                         : stats::kendall_concordance(stored, observed).value;
  }

  AlgorithmId algorithm_;
  std::span<const SearchRecord> sources_;
  std::uint64_t seed_;
  SelectionOutcome& outcome_;
};

}  // namespace

StoResult run_sto(AlgorithmId algorithm, const TaskInstance& target, std::span<const SearchRecord> sources,
                  const EAConfig& config, std::uint64_t seed) {
  StoResult result;
  if (algorithm == AlgorithmId::N) {
    result.run = optimize(target, config, seed);
    return result;
  }
  if (sources.empty()) throw std::invalid_argument("transfer algorithms need a nonempty knowledge base");
  for (const auto& record : sources) {
    if (record.best_solution.size() != target.dim()) {
      throw std::invalid_argument("knowledge base dimension does not match the target");
    }
  }
  SourceSelector selector(algorithm, sources, seed, result.selection);
  result.run = optimize(target, config, seed, std::ref(selector));
  return result;
}

void write_run_header(std::ostream& out) {
  csv::write_row(out, {"problem", "algorithm", "seed", "chosen_source", "extra_evals", "final_best",
                       "final_best_noise_free"});
}

void write_run_row(std::ostream& out, std::string_view problem, AlgorithmId algorithm, const StoResult& result) {
  const std::string chosen =
      result.selection.chosen_source ? std::to_string(*result.selection.chosen_source) : std::string("none");
  csv::write_row(out, {problem, algorithm_name(algorithm), std::to_string(result.run.seed), chosen,
                       std::to_string(result.selection.extra_evals), csv::format(result.run.final_best_value),
                       csv::format(result.run.final_best_noise_free)});
}

}  // namespace stopgen
