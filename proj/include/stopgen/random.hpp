#pragma once

#include <cstdint>
#include <random>

namespace stopgen {

/// Roles used to key child seeds. The numeric values are part of the
/// reproducibility contract: changing them changes every generated artifact.
enum class SeedRole : std::uint64_t {
  Similarity = 1,
  TargetOptimum = 2,
  SourceDirection = 3,
  SourceFamily = 4,
  SourceOptimization = 5,
  Evolution = 6,
  Noise = 7,
  Selection = 8,
  ExperimentRun = 9,
  ToyTasks = 10,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for (role, index) under `master`:
///   mix64(mix64(master + 0x9E3779B97F4A7C15 * role) ^ (index + 0xD1B54A32D192ED03)).
/// Children with different indices are independent of each other, so adding a
/// source never perturbs the draws of earlier sources.
std::uint64_t derive_seed(std::uint64_t master, SeedRole role, std::uint64_t index = 0) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role, std::uint64_t index) noexcept;

/// Seeded stream with portable uniform draws (std distributions are
/// implementation-defined, which would break byte-level reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t index(std::uint64_t n) noexcept;

  /// Standard normal via Box-Muller (no cached second value).
  double normal() noexcept;

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stopgen
