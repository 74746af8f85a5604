#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stopgen/knowledge_io.hpp"

using namespace stopgen;

namespace {

KnowledgeBase small_kb(std::uint64_t seed, PlacementMode mode = PlacementMode::Clamp) {
  const StopProblem p = make_benchmark(8, 3, seed, mode);  // Levy, inter-family, d = 30
  return build_knowledge_base(p, EAConfig{}, 300, seed);
}

void expect_same(const KnowledgeBase& a, const KnowledgeBase& b) {
  EXPECT_EQ(a.problem.name, b.problem.name);
  EXPECT_EQ(a.problem.target.family(), b.problem.target.family());
  EXPECT_EQ(a.problem.target.optimum(), b.problem.target.optimum());
  EXPECT_EQ(a.problem.assigned_similarities, b.problem.assigned_similarities);
  EXPECT_EQ(a.problem.clamped, b.problem.clamped);
  EXPECT_EQ(a.problem.scenario, b.problem.scenario);
  EXPECT_EQ(a.problem.mode, b.problem.mode);
  EXPECT_EQ(a.problem.seed, b.problem.seed);
  EXPECT_EQ(a.problem.candidates, b.problem.candidates);
  EXPECT_EQ(a.problem.similarity_spec.kind(), b.problem.similarity_spec.kind());
  EXPECT_EQ(a.source_budget, b.source_budget);
  EXPECT_EQ(a.seed, b.seed);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.problem.sources[i].family(), b.problem.sources[i].family());
    EXPECT_EQ(a.problem.sources[i].optimum(), b.problem.sources[i].optimum());
    const SearchRecord& ra = a.records[i];
    const SearchRecord& rb = b.records[i];
    EXPECT_EQ(ra.family, rb.family);
    EXPECT_EQ(ra.best_fitness, rb.best_fitness);
    EXPECT_EQ(ra.best_solution, rb.best_solution);
    ASSERT_EQ(ra.generations.size(), rb.generations.size());
    for (std::size_t g = 0; g < ra.generations.size(); ++g) {
      EXPECT_EQ(ra.generations[g].population, rb.generations[g].population);
      EXPECT_EQ(ra.generations[g].fitness, rb.generations[g].fitness);
    }
  }
}

}  // namespace

TEST(KnowledgeIo, JsonRoundTripIsBitExact) {
  const KnowledgeBase kb = small_kb(5);
  expect_same(kb, knowledge_base_from_json(nlohmann::json::parse(to_json(kb).dump())));
}

TEST(KnowledgeIo, TopLevelLayout) {
  const nlohmann::json doc = to_json(small_kb(6));
  EXPECT_EQ(doc.at("version"), 1);
  EXPECT_TRUE(doc.contains("problem"));
  EXPECT_TRUE(doc.contains("oracle"));
  EXPECT_EQ(doc.at("sources").size(), 3u);
  EXPECT_EQ(doc.at("problem").at("name"), "Levy-Te-h4m-30-3");
}

TEST(KnowledgeIo, FileRoundTripAndCustomSpec) {
  const SimilaritySpec spec = SimilaritySpec::custom({{0.0, 0.5}, {0.5, 1.5}, {1.0, 0.5}});
  const StopProblem p = generate_problem(kAllFamilies, 3, TransferScenario::IntraFamily, spec, 4, 2, 12,
                                         PlacementMode::Strict);
  const KnowledgeBase kb = build_knowledge_base(p, EAConfig{}, 200, 12, 2);
  const auto path = std::filesystem::temp_directory_path() / "stopgen_kb_roundtrip.json";
  save_knowledge_base(kb, path.string());
  const KnowledgeBase loaded = load_knowledge_base(path.string());
  std::filesystem::remove(path);
  expect_same(kb, loaded);
  ASSERT_EQ(loaded.problem.similarity_spec.knots().size(), 3u);
  EXPECT_EQ(loaded.problem.similarity_spec.knots()[1].density, 1.5);
}

TEST(KnowledgeIo, CorruptDocumentsRejected) {
  const nlohmann::json good = to_json(small_kb(7));

  nlohmann::json bad_version = good;
  bad_version["version"] = 2;
  EXPECT_THROW(knowledge_base_from_json(bad_version), std::runtime_error);

  nlohmann::json missing = good;
  missing.erase("sources");
  EXPECT_THROW(knowledge_base_from_json(missing), std::runtime_error);

  nlohmann::json wrong_width = good;
  wrong_width["sources"][0]["best_solution"].erase(0);
  EXPECT_THROW(knowledge_base_from_json(wrong_width), std::runtime_error);

  nlohmann::json bad_family = good;
  bad_family["sources"][1]["family"] = "Rosenbrock";
  EXPECT_THROW(knowledge_base_from_json(bad_family), std::runtime_error);

  nlohmann::json ragged = good;
  ragged["sources"][0]["generations"][0]["fitness"].erase(0);
  EXPECT_THROW(knowledge_base_from_json(ragged), std::runtime_error);

  nlohmann::json wrong_type = good;
  wrong_type["problem"]["dim"] = "thirty";
  EXPECT_THROW(knowledge_base_from_json(wrong_type), std::runtime_error);

  nlohmann::json count_mismatch = good;
  count_mismatch["sources"].erase(0);
  EXPECT_THROW(knowledge_base_from_json(count_mismatch), std::runtime_error);
}

TEST(KnowledgeIo, UnreadableFiles) {
  EXPECT_THROW(load_knowledge_base("/nonexistent/kb.json"), std::runtime_error);
  const auto path = std::filesystem::temp_directory_path() / "stopgen_kb_truncated.json";
  {
    std::ofstream out(path);
    out << "{\"version\": 1, \"problem\": {";
  }
  EXPECT_THROW(load_knowledge_base(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}
