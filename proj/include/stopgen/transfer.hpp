#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "stopgen/evolution.hpp"
#include "stopgen/families.hpp"
#include "stopgen/generator.hpp"

namespace stopgen {

/// N: no transfer. R: random source. The rest pick the source with the best
/// similarity score: H (Hamming), E (Euclidean), KLD, WD (2-Wasserstein),
/// OC (rank correlation), ROC (pairwise concordance), SA (subspace alignment).
enum class AlgorithmId { N, R, H, E, KLD, WD, OC, ROC, SA };

inline constexpr std::array<AlgorithmId, 9> kAllAlgorithms = {
    AlgorithmId::N,   AlgorithmId::R,  AlgorithmId::H,   AlgorithmId::E, AlgorithmId::KLD,
    AlgorithmId::WD,  AlgorithmId::OC, AlgorithmId::ROC, AlgorithmId::SA};

std::string_view algorithm_name(AlgorithmId id);
std::optional<AlgorithmId> parse_algorithm(std::string_view text);

/// Solutions OC and ROC draw from each source's last generation.
inline constexpr Eigen::Index kCorrelationSampleSize = 10;
/// Number of principal directions compared by SA (capped by the dimension).
inline constexpr Eigen::Index kAlignmentDirections = 5;
inline constexpr double kVarianceFloor = 1e-12;

struct SelectionOutcome {
  std::optional<std::size_t> chosen_source;
  Eigen::VectorXd scores;
  /// Target evaluations spent on scoring (the injection itself is not included).
  std::size_t extra_evals = 0;
};

struct StoResult {
  RunResult run;
  SelectionOutcome selection;
};

/// Runs one sequential-transfer algorithm on `target`:
///   1. evaluate the random initial population;
///   2. score every source (target evaluations are charged to the budget);
///   3. pick the highest score, lowest index on ties;
///   4. evaluate that source's best solution and let it replace the worst individual;
///   5. continue the EA on the remaining budget.
/// N skips 2-4; R scores uniformly at random. Only the search records are
/// consulted. A run whose budget ends during selection comes back with
/// run.truncated set.
StoResult run_sto(AlgorithmId algorithm, const TaskInstance& target, std::span<const SearchRecord> sources,
                  const EAConfig& config, std::uint64_t seed);

/// Index of the largest score, lowest index among ties.
std::size_t argmax_lowest_index(const Eigen::VectorXd& scores);

/// -Hamming distance between the two points thresholded at 0.5.
double hamming_score(const Eigen::VectorXd& source_elite, const Eigen::VectorXd& target_best);
/// -Euclidean distance.
double euclidean_score(const Eigen::VectorXd& source_elite, const Eigen::VectorXd& target_best);

/// Per-coordinate Gaussian fit (mean, variance with floor) of a cloud (rows = points).
struct DiagonalGaussian {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};
DiagonalGaussian fit_diagonal_gaussian(const Eigen::MatrixXd& cloud);

/// sum_j KL(N(mu_s, var_s) || N(mu_t, var_t)).
double diagonal_kl(const DiagonalGaussian& source, const DiagonalGaussian& target);
/// ||mu_s - mu_t||^2 + sum_j (sigma_s - sigma_t)^2.
double diagonal_w2_squared(const DiagonalGaussian& source, const DiagonalGaussian& target);

struct PrincipalDirections {
  Eigen::MatrixXd basis;         // d x p, orthonormal columns
  Eigen::VectorXd eigenvalues;   // p values, descending
  /// Some requested directions carry (numerically) zero variance and come
  /// from the solver's orthonormal completion.
  bool rank_deficient = false;
};

/// Top-p eigenvectors of the sample covariance of `cloud` (rows = points).
/// Requires at least p + 1 rows.
PrincipalDirections principal_directions(const Eigen::MatrixXd& cloud, Eigen::Index p);

/// ||B_s^T B_t||_F / sqrt(p) for the top-p directions of each cloud.
double subspace_alignment_score(const Eigen::MatrixXd& source_cloud, const Eigen::MatrixXd& target_cloud,
                                Eigen::Index p);

/// CSV columns: problem,algorithm,seed,chosen_source,extra_evals,final_best,final_best_noise_free
void write_run_header(std::ostream& out);
void write_run_row(std::ostream& out, std::string_view problem, AlgorithmId algorithm, const StoResult& result);

}  // namespace stopgen
