#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "stopgen/random.hpp"

namespace stopgen {

enum class FamilyId { Sphere, Ellipsoid, Schwefel22, QuarticNoise, Ackley, Rastrigin, Griewank, Levy };

inline constexpr std::array<FamilyId, 8> kAllFamilies = {
    FamilyId::Sphere,    FamilyId::Ellipsoid, FamilyId::Schwefel22, FamilyId::QuarticNoise,
    FamilyId::Ackley,    FamilyId::Rastrigin, FamilyId::Griewank,   FamilyId::Levy};

/// Per-coordinate native search box of a family.
struct Box {
  double lower;
  double upper;
  double width() const { return upper - lower; }
};

Box native_box(FamilyId family);

/// Short display name used in problem names ("Sphere", "Schwefel", "Quartic", ...).
std::string_view family_name(FamilyId family);

/// Case-insensitive; accepts display names, enum names and f1..f8.
std::optional<FamilyId> parse_family(std::string_view text);

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// Counts objective evaluations against a fixed limit.
class EvalBudget {
 public:
  explicit EvalBudget(std::size_t limit) : limit_(limit) {}

  std::size_t limit() const { return limit_; }
  std::size_t used() const { return used_; }
  std::size_t remaining() const { return limit_ - used_; }
  bool exhausted() const { return used_ >= limit_; }

  /// Consumes one evaluation or throws BudgetExhausted.
  void charge() {
    if (used_ >= limit_) throw BudgetExhausted();
    ++used_;
  }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

/// One optimization task: a family shifted so that its minimum sits at the
/// native image of `optimum()`, a point of the unit cube.
class TaskInstance {
 public:
  TaskInstance(FamilyId family, Eigen::VectorXd optimum_normalized);

  FamilyId family() const { return family_; }
  Eigen::Index dim() const { return optimum_.size(); }
  const Eigen::VectorXd& optimum() const { return optimum_; }
  Box bounds() const { return native_box(family_); }

 private:
  FamilyId family_;
  Eigen::VectorXd optimum_;
};

/// Noise-free objective of `family` as a function of the native displacement
/// z = x - o. Written against Eigen expressions so any scalar type works.
template <typename Derived>
typename Derived::Scalar shifted_objective(FamilyId family, const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const Eigen::Index d = z.size();
  const Scalar pi = Scalar(std::numbers::pi);
  switch (family) {
    case FamilyId::Sphere:
      return z.squaredNorm();
    case FamilyId::Ellipsoid: {
      Scalar sum(0);
      for (Eigen::Index i = 0; i < d; ++i) sum += Scalar(d - i) * z(i) * z(i);
      return sum;
    }
    case FamilyId::Schwefel22: {
      Scalar sum(0);
      Scalar product(1);
      for (Eigen::Index i = 0; i < d; ++i) {
        sum += abs(z(i));
        product *= abs(z(i));
      }
      return sum + product;
    }
    case FamilyId::QuarticNoise: {
      Scalar sum(0);
      for (Eigen::Index i = 0; i < d; ++i) {
        const Scalar sq = z(i) * z(i);
        sum += Scalar(i + 1) * sq * sq;
      }
      return sum;
    }
    case FamilyId::Ackley: {
      Scalar squares(0);
      Scalar cosines(0);
      for (Eigen::Index i = 0; i < d; ++i) {
        squares += z(i) * z(i);
        cosines += cos(Scalar(2) * pi * z(i));
      }
      const Scalar n = Scalar(d);
      // Grouped so the value at z = 0 is exactly zero.
      return (Scalar(20) - Scalar(20) * exp(Scalar(-0.2) * sqrt(squares / n))) +
             (Scalar(std::numbers::e) - exp(cosines / n));
    }
    case FamilyId::Rastrigin: {
      Scalar sum(0);
      for (Eigen::Index i = 0; i < d; ++i) {
        sum += z(i) * z(i) + Scalar(10) * (Scalar(1) - cos(Scalar(2) * pi * z(i)));
      }
      return sum;
    }
    case FamilyId::Griewank: {
      Scalar sum(0);
      Scalar product(1);
      for (Eigen::Index i = 0; i < d; ++i) {
        sum += z(i) * z(i);
        product *= cos(z(i) / sqrt(Scalar(i + 1)));
      }
      return (Scalar(1) - product) + sum / Scalar(4000);
    }
    case FamilyId::Levy: {
      auto omega = [&](Eigen::Index i) { return Scalar(1) + z(i) / Scalar(4); };
      const Scalar first = sin(pi * omega(0));
      Scalar sum = first * first;
      for (Eigen::Index i = 0; i + 1 < d; ++i) {
        const Scalar w = omega(i);
        const Scalar s = sin(pi * w + Scalar(1));
        sum += (w - Scalar(1)) * (w - Scalar(1)) * (Scalar(1) + Scalar(10) * s * s);
      }
      const Scalar last = omega(d - 1);
      const Scalar s = sin(Scalar(2) * pi * last);
      sum += (last - Scalar(1)) * (last - Scalar(1)) * (Scalar(1) + s * s);
      return sum;
    }
  }
  throw std::logic_error("unknown family");
}

/// x_j = lb + z_j (ub - lb). Throws on dimension mismatch or z outside [0,1].
Eigen::VectorXd to_native(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& z);
/// Inverse of to_native; throws if x leaves the native box.
Eigen::VectorXd from_native(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Black-box evaluation in normalized coordinates. Charges one unit of
/// `budget` (throws BudgetExhausted when none is left). QuarticNoise adds a
/// fresh U[0,1) draw from `noise` per call.
double evaluate(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& z, EvalBudget& budget,
                Rng& noise);

/// Deterministic objective (noise suppressed), not budgeted. Analysis only.
double evaluate_noise_free(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& z);

}  // namespace stopgen
