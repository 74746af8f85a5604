#include "stopgen/knowledge_io.hpp"

#include <fstream>
#include <stdexcept>

namespace stopgen {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[noreturn]] void corrupt(const std::string& what) { throw std::runtime_error("corrupt knowledge base: " + what); }

const json& field(const json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) corrupt(std::string("missing '") + key + "'");
  return object.at(key);
}

Eigen::VectorXd read_vector(const json& node, const char* what) {
  if (!node.is_array()) corrupt(std::string(what) + " is not an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) corrupt(std::string(what) + " holds a non-number");
    v(static_cast<Eigen::Index>(i)) = node[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd read_matrix(const json& node, Eigen::Index cols, const char* what) {
  if (!node.is_array()) corrupt(std::string(what) + " is not an array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(node.size()), cols);
  for (std::size_t i = 0; i < node.size(); ++i) {
    const Eigen::VectorXd row = read_vector(node[i], what);
    if (row.size() != cols) corrupt(std::string(what) + " has a row of the wrong width");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

FamilyId read_family(const json& node) {
  if (!node.is_string()) corrupt("family is not a string");
  const auto family = parse_family(node.get<std::string>());
  if (!family) corrupt("unknown family '" + node.get<std::string>() + "'");
  return *family;
}

json similarity_json(const SimilaritySpec& spec) {
  json knots = json::array();
  for (const Knot& knot : spec.knots()) knots.push_back({knot.s, knot.density});
  return {{"kind", std::string(similarity_name(spec.kind()))}, {"knots", knots}};
}

SimilaritySpec read_similarity(const json& node) {
  const auto kind = parse_similarity_kind(field(node, "kind").get<std::string>());
  if (!kind) corrupt("unknown similarity kind");
  if (*kind != SimilarityKind::CustomPiecewiseLinear) return SimilaritySpec::builtin(*kind);
  std::vector<Knot> knots;
  for (const auto& pair : field(node, "knots")) {
    if (!pair.is_array() || pair.size() != 2) corrupt("knot is not an (s, density) pair");
    knots.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  try {
    return SimilaritySpec::custom(std::move(knots));
  } catch (const std::invalid_argument& error) {
    corrupt(error.what());
  }
}

}  // namespace

json to_json(const KnowledgeBase& kb) {
  const StopProblem& p = kb.problem;
  json source_families = json::array();
  json source_optima = json::array();
  for (const auto& source : p.sources) {
    source_families.push_back(std::string(family_name(source.family())));
    source_optima.push_back(vector_json(source.optimum()));
  }
  json candidates = json::array();
  for (FamilyId family : p.candidates) candidates.push_back(std::string(family_name(family)));
  json clamped = json::array();
  for (bool flag : p.clamped) clamped.push_back(flag);

  json problem = {
      {"name", p.name},
      {"target_family", std::string(family_name(p.target.family()))},
      {"source_families", source_families},
      {"candidates", candidates},
      {"dim", p.dim()},
      {"k", p.k()},
      {"scenario", std::string(scenario_name(p.scenario))},
      {"similarity", similarity_json(p.similarity_spec)},
      {"placement", p.mode == PlacementMode::Strict ? "strict" : "clamp"},
      {"seed", p.seed},
      {"assigned_similarities", vector_json(p.assigned_similarities)},
      {"source_budget", kb.source_budget},
      {"kb_seed", kb.seed},
  };
  json oracle = {
      {"target_optimum", vector_json(p.target.optimum())},
      {"source_optima", source_optima},
      {"clamped", clamped},
  };
  json sources = json::array();
  for (const SearchRecord& record : kb.records) {
    json generations = json::array();
    for (const Generation& g : record.generations) {
      generations.push_back({{"population", matrix_json(g.population)}, {"fitness", vector_json(g.fitness)}});
    }
    sources.push_back({{"family", std::string(family_name(record.family))},
                       {"best_fitness", record.best_fitness},
                       {"best_solution", vector_json(record.best_solution)},
                       {"generations", generations}});
  }
  return {{"version", kKnowledgeBaseVersion}, {"problem", problem}, {"oracle", oracle}, {"sources", sources}};
}

KnowledgeBase knowledge_base_from_json(const json& document) {
  try {
    if (field(document, "version").get<int>() != kKnowledgeBaseVersion) corrupt("unsupported version");
    const json& problem = field(document, "problem");
    const json& oracle = field(document, "oracle");
    const json& sources = field(document, "sources");

    const auto dim = field(problem, "dim").get<Eigen::Index>();
    const auto k = field(problem, "k").get<std::size_t>();
    const auto scenario = parse_scenario(field(problem, "scenario").get<std::string>());
    if (!scenario) corrupt("unknown scenario");

    const Eigen::VectorXd target_optimum = read_vector(field(oracle, "target_optimum"), "target_optimum");
    if (target_optimum.size() != dim) corrupt("target optimum has the wrong dimension");
    const json& source_families = field(problem, "source_families");
    const json& source_optima = field(oracle, "source_optima");
    if (source_families.size() != k || source_optima.size() != k || sources.size() != k) {
      corrupt("source count does not match k");
    }

    std::vector<TaskInstance> tasks;
    for (std::size_t i = 0; i < k; ++i) {
      Eigen::VectorXd optimum = read_vector(source_optima[i], "source optimum");
      if (optimum.size() != dim) corrupt("source optimum has the wrong dimension");
      tasks.emplace_back(read_family(source_families[i]), std::move(optimum));
    }
    std::vector<FamilyId> candidates;
    for (const auto& node : field(problem, "candidates")) candidates.push_back(read_family(node));
    std::vector<bool> clamped;
    for (const auto& node : field(oracle, "clamped")) clamped.push_back(node.get<bool>());
    if (clamped.size() != k) corrupt("clamped flags do not match k");

    const Eigen::VectorXd assigned = read_vector(field(problem, "assigned_similarities"), "assigned_similarities");
    if (assigned.size() != static_cast<Eigen::Index>(k)) corrupt("assigned similarities do not match k");

    StopProblem stop{
        field(problem, "name").get<std::string>(),
        TaskInstance(read_family(field(problem, "target_family")), target_optimum),
        std::move(tasks),
        *scenario,
        read_similarity(field(problem, "similarity")),
        assigned,
        std::move(clamped),
        std::move(candidates),
        field(problem, "placement").get<std::string>() == "strict" ? PlacementMode::Strict : PlacementMode::Clamp,
        field(problem, "seed").get<std::uint64_t>(),
    };

    std::vector<SearchRecord> records;
    for (const auto& node : sources) {
      SearchRecord record;
      record.family = read_family(field(node, "family"));
      record.best_fitness = field(node, "best_fitness").get<double>();
      record.best_solution = read_vector(field(node, "best_solution"), "best_solution");
      if (record.best_solution.size() != dim) corrupt("best solution has the wrong dimension");
      for (const auto& g : field(node, "generations")) {
        Generation generation;
        generation.population = read_matrix(field(g, "population"), dim, "population");
        generation.fitness = read_vector(field(g, "fitness"), "fitness");
        if (generation.fitness.size() != generation.population.rows()) corrupt("fitness/population size mismatch");
        record.generations.push_back(std::move(generation));
      }
      if (record.generations.empty()) corrupt("source record without generations");
      records.push_back(std::move(record));
    }
    return KnowledgeBase{std::move(stop), std::move(records), field(problem, "source_budget").get<std::size_t>(),
                         field(problem, "kb_seed").get<std::uint64_t>()};
  } catch (const json::exception& error) {
    corrupt(error.what());
  } catch (const std::invalid_argument& error) {
    corrupt(error.what());
  }
}

void save_knowledge_base(const KnowledgeBase& kb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_json(kb).dump() << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

KnowledgeBase load_knowledge_base(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::exception& error) {
    throw std::runtime_error("corrupt knowledge base: " + std::string(error.what()));
  }
  return knowledge_base_from_json(document);
}

}  // namespace stopgen
