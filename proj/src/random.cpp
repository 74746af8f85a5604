#include "stopgen/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace stopgen {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role, std::uint64_t index) noexcept {
  const std::uint64_t keyed = mix64(master + 0x9E3779B97F4A7C15ULL * role);
  return mix64(keyed ^ (index + 0xD1B54A32D192ED03ULL));
}

std::uint64_t derive_seed(std::uint64_t master, SeedRole role, std::uint64_t index) noexcept {
  return derive_seed(master, static_cast<std::uint64_t>(role), index);
}

std::uint64_t Rng::index(std::uint64_t n) noexcept {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % n;
}

double Rng::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace stopgen
