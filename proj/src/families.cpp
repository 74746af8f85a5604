#include "stopgen/families.hpp"

#include <algorithm>
#include <cctype>

namespace stopgen {

namespace {

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void check_unit(const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::Index dim) {
  if (z.size() != dim) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(dim) + ", got " +
                                std::to_string(z.size()));
  }
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (!(z(j) >= 0.0 && z(j) <= 1.0)) {
      throw std::invalid_argument("normalized coordinate outside [0,1]");
    }
  }
}

}  // namespace

Box native_box(FamilyId family) {
  switch (family) {
    case FamilyId::Sphere: return {-100.0, 100.0};
    case FamilyId::Ellipsoid: return {-50.0, 50.0};
    case FamilyId::Schwefel22: return {-30.0, 30.0};
    case FamilyId::QuarticNoise: return {-5.0, 5.0};
    case FamilyId::Ackley: return {-32.0, 32.0};
    case FamilyId::Rastrigin: return {-10.0, 10.0};
    case FamilyId::Griewank: return {-200.0, 200.0};
    case FamilyId::Levy: return {-20.0, 20.0};
  }
  throw std::logic_error("unknown family");
}

std::string_view family_name(FamilyId family) {
  switch (family) {
    case FamilyId::Sphere: return "Sphere";
    case FamilyId::Ellipsoid: return "Ellipsoid";
    case FamilyId::Schwefel22: return "Schwefel";
    case FamilyId::QuarticNoise: return "Quartic";
    case FamilyId::Ackley: return "Ackley";
    case FamilyId::Rastrigin: return "Rastrigin";
    case FamilyId::Griewank: return "Griewank";
    case FamilyId::Levy: return "Levy";
  }
  throw std::logic_error("unknown family");
}

std::optional<FamilyId> parse_family(std::string_view text) {
  const std::string key = lowercase(text);
  for (std::size_t i = 0; i < kAllFamilies.size(); ++i) {
    const FamilyId family = kAllFamilies[i];
    if (key == lowercase(family_name(family)) || key == "f" + std::to_string(i + 1)) return family;
  }
  if (key == "schwefel22" || key == "schwefel2.22" || key == "schwefel2.2") return FamilyId::Schwefel22;
  if (key == "quarticnoise" || key == "quartic_noise") return FamilyId::QuarticNoise;
  return std::nullopt;
}

TaskInstance::TaskInstance(FamilyId family, Eigen::VectorXd optimum_normalized)
    : family_(family), optimum_(std::move(optimum_normalized)) {
  if (optimum_.size() < 1) throw std::invalid_argument("task dimension must be positive");
  check_unit(optimum_, optimum_.size());
}

Eigen::VectorXd to_native(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& z) {
  check_unit(z, task.dim());
  const Box box = task.bounds();
  return (box.lower + box.width() * z.array()).matrix();
}

Eigen::VectorXd from_native(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != task.dim()) throw std::invalid_argument("dimension mismatch");
  const Box box = task.bounds();
  if ((x.array() < box.lower).any() || (x.array() > box.upper).any()) {
    throw std::invalid_argument("native coordinate outside the family box");
  }
  return ((x.array() - box.lower) / box.width()).matrix();
}

double evaluate_noise_free(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& z) {
  check_unit(z, task.dim());
  const Box box = task.bounds();
  // Displacement in native units; equals to_native(z) - to_native(o).
  const Eigen::VectorXd shift = box.width() * (z - task.optimum());
  return shifted_objective(task.family(), shift);
}

double evaluate(const TaskInstance& task, const Eigen::Ref<const Eigen::VectorXd>& z, EvalBudget& budget,
                Rng& noise) {
  check_unit(z, task.dim());
  budget.charge();
  double value = evaluate_noise_free(task, z);
  if (task.family() == FamilyId::QuarticNoise) value += noise.uniform();
  return value;
}

}  // namespace stopgen
