#pragma once

#include <string>

#include <json.hpp>

#include "stopgen/generator.hpp"

namespace stopgen {

inline constexpr int kKnowledgeBaseVersion = 1;

/// Document layout (version 1):
///   version  integer, 1
///   problem  name, target_family, source_families, candidates, dim, k,
///            scenario, similarity {kind, knots}, placement, seed,
///            assigned_similarities, source_budget, kb_seed
///   oracle   target_optimum, source_optima, clamped (analysis only)
///   sources  [{family, best_fitness, best_solution, generations: [{population, fitness}]}]
/// Doubles are written in shortest round-trip form, so a load reproduces
/// every value bit for bit.
nlohmann::json to_json(const KnowledgeBase& kb);

/// Throws std::runtime_error on any schema violation.
KnowledgeBase knowledge_base_from_json(const nlohmann::json& document);

void save_knowledge_base(const KnowledgeBase& kb, const std::string& path);
KnowledgeBase load_knowledge_base(const std::string& path);

}  // namespace stopgen
