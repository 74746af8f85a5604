#pragma once

#include <algorithm>
#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stopgen/random.hpp"

namespace stopgen {

/// Built-in similarity densities on [0,1] plus a user-supplied piecewise-linear one.
///   H1h: point mass at 1        H2h: ReLU(8s - 4)
///   M1:  1                      M2:  2s
///   M3:  2 - 2s                 M4:  triangle with mode 0.5 (4s, 4 - 4s)
///   L1:  point mass at 0        L2:  ReLU(4 - 8s)
enum class SimilarityKind { H1h, H2h, M1, M2, M3, M4, L1, L2, CustomPiecewiseLinear };

inline constexpr std::array<SimilarityKind, 8> kBuiltinSimilarities = {
    SimilarityKind::H1h, SimilarityKind::H2h, SimilarityKind::M1, SimilarityKind::M2,
    SimilarityKind::M3,  SimilarityKind::M4,  SimilarityKind::L1, SimilarityKind::L2};

struct Knot {
  double s;
  double density;
};

class SimilaritySpec {
 public:
  static SimilaritySpec builtin(SimilarityKind kind);

  /// Piecewise-linear density through `knots`. The knots must start at s = 0,
  /// end at s = 1, increase strictly, carry nonnegative densities and
  /// integrate (trapezoid rule) to 1 within 1e-9. Throws std::invalid_argument.
  static SimilaritySpec custom(std::vector<Knot> knots);

  SimilarityKind kind() const { return kind_; }
  const std::vector<Knot>& knots() const { return knots_; }
  bool is_point_mass() const { return kind_ == SimilarityKind::H1h || kind_ == SimilarityKind::L1; }

  /// Mass accumulated up to each knot (custom kind only).
  const std::vector<double>& cumulative() const { return cumulative_; }

 private:
  explicit SimilaritySpec(SimilarityKind kind) : kind_(kind) {}

  SimilarityKind kind_;
  std::vector<Knot> knots_;
  std::vector<double> cumulative_;
};

/// Name used in problem names and on the command line: h1h, h2h, h1m..h4m, h1l, h2l, custom.
std::string_view similarity_name(SimilarityKind kind);
/// Accepts the names above plus the short forms m1..m4 and the enum spellings.
std::optional<SimilarityKind> parse_similarity_kind(std::string_view text);

/// H(s) for s in [0,1]; H(0^-) = 0 and H(1) = 1. Throws std::out_of_range outside [0,1].
double cdf(const SimilaritySpec& spec, double s);

/// Generalized inverse inf{s : H(s) >= u}, u in [0,1].
double inverse_cdf(const SimilaritySpec& spec, double u);

/// h(s) for kinds that have a density; throws std::domain_error for point masses.
double pdf(const SimilaritySpec& spec, double s);

/// k inverse-transform draws S_i = H^{-1}(U_i).
Eigen::VectorXd sample_similarities(const SimilaritySpec& spec, std::size_t k, Rng& rng);

/// 1 - Chebyshev distance between two points of the unit cube.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar similarity(const Eigen::MatrixBase<DerivedA>& source,
                                     const Eigen::MatrixBase<DerivedB>& target) {
  if (source.size() != target.size()) throw std::invalid_argument("similarity: dimension mismatch");
  using Scalar = typename DerivedA::Scalar;
  if (source.size() == 0) return Scalar(1);
  return Scalar(1) - (source - target).cwiseAbs().maxCoeff();
}

/// Equal-width histogram on [0,1]. Bin b (1-based) covers ((b-1)/n, b/n];
/// bin 1 also takes s = 0.
struct HistogramEstimate {
  Eigen::VectorXd mass;

  Eigen::Index bins() const { return mass.size(); }
  double bin_low(Eigen::Index b) const { return static_cast<double>(b) / static_cast<double>(bins()); }
  double bin_high(Eigen::Index b) const { return static_cast<double>(b + 1) / static_cast<double>(bins()); }
  /// mass x n, comparable with a continuous density.
  Eigen::VectorXd density() const { return mass * static_cast<double>(bins()); }
};

/// Zero-based bin index of s, or -1 when s is outside [0,1].
Eigen::Index histogram_bin(double s, Eigen::Index bins);

/// Mass per bin is count / size(values); values outside [0,1] are not binned.
HistogramEstimate estimate_density(std::span<const double> values, Eigen::Index bins = 20);
HistogramEstimate estimate_density(const Eigen::VectorXd& values, Eigen::Index bins = 20);

/// Exact mass the density puts in each histogram bin.
Eigen::VectorXd analytic_bin_mass(const SimilaritySpec& spec, Eigen::Index bins);

/// Kolmogorov-Smirnov distance between the empirical CDF of `values` and H.
double ks_statistic(const SimilaritySpec& spec, std::span<const double> values);

/// CSV columns: bin_low,bin_high,mass,density
void write_histogram_csv(std::ostream& out, const HistogramEstimate& histogram);

/// Reads knots from a CSV with columns s,density.
std::vector<Knot> read_knots_csv(const std::string& path);

}  // namespace stopgen
