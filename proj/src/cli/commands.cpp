#include "stopgen/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "stopgen/csv.hpp"
#include "stopgen/generator.hpp"
#include "stopgen/knowledge_io.hpp"
#include "stopgen/parallel.hpp"
#include "stopgen/similarity.hpp"
#include "stopgen/stats.hpp"
#include "stopgen/toy_interval.hpp"
#include "stopgen/transfer.hpp"

namespace stopgen::cli {

namespace {

constexpr const char* kSchemas = R"(CSV schemas (column order is fixed):
  run results        problem,algorithm,seed,chosen_source,extra_evals,final_best,final_best_noise_free
  run histories      problem,algorithm,run,seed,generation,evals_used,best_so_far,best_so_far_noise_free
  compare rankings   problem,rank,algorithm,median,group_id
  sample-similarity  bin_low,bin_high,mass,density,analytic_mass,analytic_density
  toy mapping        l1,l2,x1,x2
  toy coverage       space,u1,u2,grid,occupied,total,outside,gamma
  toy histogram      bin_low,bin_high,mass,density
Randomness: every command derives all streams from --seed.)";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

SimilaritySpec resolve_similarity(const std::string& name, const std::string& knots_path) {
  const auto kind = parse_similarity_kind(name);
  if (!kind) throw UsageError("unknown similarity distribution '" + name + "'");
  if (*kind != SimilarityKind::CustomPiecewiseLinear) return SimilaritySpec::builtin(*kind);
  if (knots_path.empty()) throw UsageError("--dist custom requires --knots");
  return SimilaritySpec::custom(read_knots_csv(knots_path));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  for (auto& item : csv::split(text)) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::string history_path_for(const std::string& results) {
  std::filesystem::path path(results);
  const std::string stem = path.stem().string();
  return (path.parent_path() / (stem + "_history.csv")).string();
}

struct GenerateOptions {
  int stop = 0;
  std::string family;
  std::string scenario;
  std::string dist;
  std::string knots;
  int dim = 0;
  std::size_t k = 0;
  std::uint64_t seed = 1;
  std::string out = "kb.json";
  bool strict = false;
  std::size_t budget = kDefaultSourceBudget;
  int pop = 50;
  std::size_t thin = 1;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  const PlacementMode mode = o.strict ? PlacementMode::Strict : PlacementMode::Clamp;
  StopProblem problem = [&] {
    if (o.stop != 0) {
      if (!o.family.empty() || !o.scenario.empty() || !o.dist.empty() || o.dim != 0) {
        throw UsageError("--stop cannot be combined with --family/--scenario/--dist/--dim");
      }
      return make_benchmark(o.stop, o.k, o.seed, mode);
    }
    if (o.family.empty() || o.scenario.empty() || o.dist.empty() || o.dim < 1) {
      throw UsageError("give either --stop ID or all of --family, --scenario, --dist, --dim");
    }
    const auto family = parse_family(o.family);
    if (!family) throw UsageError("unknown family '" + o.family + "'");
    const auto scenario = parse_scenario(o.scenario);
    if (!scenario) throw UsageError("unknown scenario '" + o.scenario + "'");
    const SimilaritySpec spec = resolve_similarity(o.dist, o.knots);
    const auto index = static_cast<std::size_t>(std::find(kAllFamilies.begin(), kAllFamilies.end(), *family) -
                                                kAllFamilies.begin());
    return generate_problem(kAllFamilies, index, *scenario, spec, o.dim, o.k, o.seed, mode);
  }();

  EAConfig optimizer;
  optimizer.pop_size = o.pop;
  const KnowledgeBase kb = build_knowledge_base(problem, optimizer, o.budget, o.seed, o.thin, worker_count());
  save_knowledge_base(kb, o.out);

  const Eigen::VectorXd realized = problem.realized_similarities();
  const auto clamped = std::count(problem.clamped.begin(), problem.clamped.end(), true);
  out << "problem " << problem.name << '\n'
      << "sources " << problem.k() << " (clamped " << clamped << ")\n"
      << "similarity min " << csv::format(realized.minCoeff()) << " mean " << csv::format(realized.mean())
      << " max " << csv::format(realized.maxCoeff()) << '\n'
      << "wrote " << o.out << '\n';
  return 0;
}

struct RunOptions {
  std::string kb;
  std::string algos = "N,R,H,E,KLD,WD,OC,ROC,SA";
  std::size_t runs = 30;
  std::uint64_t seed = 1;
  std::size_t budget = 5000;
  int pop = 50;
  std::string out = "results.csv";
  std::string histories;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  if (o.runs < 1) throw UsageError("--runs must be at least 1");
  std::vector<AlgorithmId> algorithms;
  for (const auto& name : split_list(o.algos)) {
    const auto id = parse_algorithm(name);
    if (!id) throw UsageError("unknown algorithm '" + name + "'");
    algorithms.push_back(*id);
  }
  if (algorithms.empty()) throw UsageError("no algorithms given");
  const KnowledgeBase kb = load_knowledge_base(o.kb);

  EAConfig config;
  config.pop_size = o.pop;
  config.max_evaluations = o.budget;
  config.validate();

  const std::size_t cells = algorithms.size() * o.runs;
  std::vector<StoResult> results(cells);
  parallel_for(cells, worker_count(), [&](std::size_t cell) {
    const std::size_t a = cell / o.runs;
    const std::size_t r = cell % o.runs;
    const auto algo_index = static_cast<std::size_t>(
        std::find(kAllAlgorithms.begin(), kAllAlgorithms.end(), algorithms[a]) - kAllAlgorithms.begin());
    results[cell] = run_sto(algorithms[a], kb.problem.target, kb.records, config, run_seed(o.seed, algo_index, r));
  });

  auto results_out = open_output(o.out);
  write_run_header(results_out);
  const std::string history_file = o.histories.empty() ? history_path_for(o.out) : o.histories;
  auto history_out = open_output(history_file);
  csv::write_row(history_out, {"problem", "algorithm", "run", "seed", "generation", "evals_used", "best_so_far",
                               "best_so_far_noise_free"});
  std::size_t truncated = 0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const AlgorithmId algorithm = algorithms[cell / o.runs];
    const StoResult& result = results[cell];
    write_run_row(results_out, kb.problem.name, algorithm, result);
    if (result.run.truncated) ++truncated;
    for (const auto& point : result.run.history) {
      csv::write_row(history_out,
                     {kb.problem.name, std::string(algorithm_name(algorithm)), std::to_string(cell % o.runs),
                      std::to_string(result.run.seed), std::to_string(point.generation),
                      std::to_string(point.evals_used), csv::format(point.best_so_far),
                      csv::format(point.best_so_far_noise_free)});
    }
  }
  out << "problem " << kb.problem.name << '\n'
      << "rows " << cells << '\n';
  if (truncated > 0) out << "warning: " << truncated << " runs exhausted the budget during source selection\n";
  out << "wrote " << o.out << " and " << history_file << '\n';
  return 0;
}

struct CompareOptions {
  std::vector<std::string> inputs;
  double alpha = stats::kDefaultAlpha;
  std::string column = "final_best_noise_free";
  std::string out = "ranking.csv";
};

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  // problem -> algorithm -> values, both in first-seen order.
  std::vector<std::string> problems;
  std::map<std::string, std::vector<stats::AlgorithmSample>> samples;
  for (const auto& path : o.inputs) {
    const csv::Table table = csv::read(path);
    const std::size_t problem_col = table.column("problem");
    const std::size_t algorithm_col = table.column("algorithm");
    const std::size_t value_col = table.column(o.column);
    for (const auto& row : table.rows) {
      const std::string& problem = row[problem_col];
      if (!samples.count(problem)) problems.push_back(problem);
      auto& entries = samples[problem];
      auto it = std::find_if(entries.begin(), entries.end(),
                             [&](const auto& entry) { return entry.algorithm == row[algorithm_col]; });
      if (it == entries.end()) {
        entries.push_back({row[algorithm_col], {}});
        it = entries.end() - 1;
      }
      it->values.push_back(csv::to_double(row[value_col]));
    }
  }
  if (problems.empty()) throw UsageError("no result rows found");

  auto ranking_out = open_output(o.out);
  bool header = true;
  for (const auto& problem : problems) {
    const auto& entries = samples[problem];
    if (entries.size() < 2) {
      throw UsageError("problem " + problem + " has a single algorithm; nothing to compare");
    }
    const auto mismatch = std::adjacent_find(entries.begin(), entries.end(), [](const auto& l, const auto& r) {
      return l.values.size() != r.values.size();
    });
    if (mismatch != entries.end()) {
      err << "warning: unequal run counts on " << problem << "; using unequal-size tests\n";
    }
    const stats::RankingReport report = stats::ranking_groups(entries, o.alpha);
    stats::write_ranking_csv(ranking_out, report, problem, header);
    header = false;
    out << problem << ": " << report.group_count() << " groups over " << entries.size() << " algorithms\n";
  }
  out << "wrote " << o.out << '\n';
  return 0;
}

struct ToyOptions {
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  int cells_per_unit = 20;
  std::string dist = "uniform";
  double mean1 = 0.5;
  double mean2 = 0.5;
  double sigma = 0.15;
  std::string spaces = "1,1.4,6";
  std::size_t histogram_space = 2;
  std::size_t k = 1000;
  int bins = 20;
  std::string out_dir = ".";
};

int cmd_toy(const ToyOptions& o, std::ostream& out) {
  toy::FeatureDistribution dist;
  if (o.dist == "uniform") {
    dist = toy::FeatureDistribution::uniform();
  } else if (o.dist == "gaussian") {
    if (!(o.sigma > 0.0)) throw UsageError("--sigma must be positive");
    dist = toy::FeatureDistribution::gaussian(o.mean1, o.mean2, o.sigma);
  } else {
    throw UsageError("unknown feature distribution '" + o.dist + "'");
  }
  if (o.cells_per_unit < 1) throw UsageError("--cells-per-unit must be positive");
  std::vector<toy::DecisionSpace> spaces;
  for (const auto& item : split_list(o.spaces)) {
    const double bound = csv::to_double(item);
    if (!(bound > 0.0) || !std::isfinite(bound)) throw UsageError("invalid space bound '" + item + "'");
    spaces.push_back({bound, bound});
  }
  if (spaces.empty()) throw UsageError("no decision spaces given");
  if (o.histogram_space < 1 || o.histogram_space > spaces.size()) throw UsageError("--histogram-space out of range");

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);

  Rng rng(derive_seed(o.seed, SeedRole::ToyTasks));
  std::vector<toy::IntervalTask> tasks;
  std::vector<toy::Radii> optima;
  for (std::size_t i = 0; i < o.samples; ++i) {
    tasks.push_back(toy::sample_task(dist, rng));
    optima.push_back(toy::solve(tasks.back()));
  }
  {
    auto mapping = open_output((dir / "toy_mapping.csv").string());
    toy::write_mapping_csv(mapping, tasks);
  }
  {
    auto coverage = open_output((dir / "toy_coverage.csv").string());
    csv::write_row(coverage, {"space", "u1", "u2", "grid", "occupied", "total", "outside", "gamma"});
    for (std::size_t s = 0; s < spaces.size(); ++s) {
      // Same absolute cell size in every space.
      const int grid = std::max(10, static_cast<int>(std::lround(spaces[s].u1 * o.cells_per_unit)));
      const toy::CoverageResult result = toy::optimum_coverage(spaces[s], optima, grid);
      csv::write_row(coverage, {std::to_string(s + 1), csv::format(spaces[s].u1), csv::format(spaces[s].u2),
                                std::to_string(grid), std::to_string(result.occupied), std::to_string(result.total),
                                std::to_string(result.outside), csv::format(result.gamma)});
      out << "space " << s + 1 << " [0," << csv::format(spaces[s].u1) << "]^2 gamma " << csv::format(result.gamma)
          << '\n';
    }
  }
  {
    const HistogramEstimate histogram =
        toy::toy_similarity_experiment(o.k, dist, o.seed, o.bins, spaces[o.histogram_space - 1]);
    auto hist = open_output((dir / "toy_histogram.csv").string());
    write_histogram_csv(hist, histogram);
  }
  out << "wrote toy_mapping.csv, toy_coverage.csv, toy_histogram.csv to " << dir.string() << '\n';
  return 0;
}

struct SampleOptions {
  std::string dist;
  std::string knots;
  std::size_t k = 0;
  int bins = 20;
  std::uint64_t seed = 1;
  std::string out = "similarity.csv";
};

int cmd_sample_similarity(const SampleOptions& o, std::ostream& out) {
  const SimilaritySpec spec = resolve_similarity(o.dist, o.knots);
  if (o.k < 1) throw UsageError("--k must be at least 1");
  if (o.bins < 1) throw UsageError("--bins must be at least 1");
  Rng rng(derive_seed(o.seed, SeedRole::Similarity));
  const Eigen::VectorXd values = sample_similarities(spec, o.k, rng);
  const HistogramEstimate histogram = estimate_density(values, o.bins);
  const Eigen::VectorXd analytic = analytic_bin_mass(spec, o.bins);
  const Eigen::VectorXd density = histogram.density();

  auto file = open_output(o.out);
  csv::write_row(file, {"bin_low", "bin_high", "mass", "density", "analytic_mass", "analytic_density"});
  for (Eigen::Index b = 0; b < histogram.bins(); ++b) {
    csv::write_row(file, {csv::format(histogram.bin_low(b)), csv::format(histogram.bin_high(b)),
                          csv::format(histogram.mass(b)), csv::format(density(b)), csv::format(analytic(b)),
                          csv::format(analytic(b) * static_cast<double>(o.bins))});
  }
  std::vector<double> sample(values.data(), values.data() + values.size());
  out << "distribution " << similarity_name(spec.kind()) << " k " << o.k << " ks "
      << csv::format(ks_statistic(spec, sample)) << '\n'
      << "wrote " << o.out << '\n';
  return 0;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master, std::size_t algorithm_index, std::size_t run_index) {
  return derive_seed(master, static_cast<std::uint64_t>(SeedRole::ExperimentRun) * 0x100 + algorithm_index,
                     run_index);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential transfer optimization problem generator and experiment harness", "stopgen"};
  app.footer(kSchemas);
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a STOP and its knowledge base (JSON)");
  generate->add_option("--stop", gen.stop, "Benchmark problem id (1-12)")->check(CLI::Range(1, 12));
  generate->add_option("--family", gen.family, "Target family (sphere, ellipsoid, schwefel, quartic, ackley, rastrigin, griewank, levy)");
  generate->add_option("--scenario", gen.scenario, "intra or inter");
  generate->add_option("--dist", gen.dist, "Similarity distribution (h1h h2h m1 m2 m3 m4 h1l h2l custom)");
  generate->add_option("--knots", gen.knots, "CSV with columns s,density for --dist custom");
  generate->add_option("--dim", gen.dim, "Task dimension");
  generate->add_option("--k", gen.k, "Number of source tasks")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_option("--out", gen.out, "Knowledge base path");
  generate->add_flag("--strict", gen.strict, "Redraw directions instead of clamping source optima");
  generate->add_option("--budget", gen.budget, "Evaluations per source optimization");
  generate->add_option("--pop", gen.pop, "Population size of the source optimizer");
  generate->add_option("--thin", gen.thin, "Store every g-th generation")->check(CLI::PositiveNumber);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run STO algorithms on a knowledge base");
  run_cmd->add_option("--kb", run_opts.kb, "Knowledge base path")->required();
  run_cmd->add_option("--algos", run_opts.algos, "Comma-separated algorithms (N R H E KLD WD OC ROC SA)");
  run_cmd->add_option("--runs", run_opts.runs, "Independent runs per algorithm");
  run_cmd->add_option("--seed", run_opts.seed, "Master seed");
  run_cmd->add_option("--budget", run_opts.budget, "Target evaluation budget");
  run_cmd->add_option("--pop", run_opts.pop, "Population size");
  run_cmd->add_option("--out", run_opts.out, "Results CSV path");
  run_cmd->add_option("--histories", run_opts.histories, "Convergence history CSV path (default <out>_history.csv)");

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Rank algorithms with Wilcoxon rank-sum groups");
  compare->add_option("--results", cmp.inputs, "Result CSV files")->required();
  compare->add_option("--alpha", cmp.alpha, "Significance level");
  compare->add_option("--column", cmp.column, "Result column to compare");
  compare->add_option("--out", cmp.out, "Ranking CSV path");

  ToyOptions toy_opts;
  auto* toy_cmd = app.add_subcommand("toy", "Interval-coverage toy experiments");
  toy_cmd->add_option("--seed", toy_opts.seed, "Master seed");
  toy_cmd->add_option("--samples", toy_opts.samples, "Tasks for the mapping and coverage");
  toy_cmd->add_option("--cells-per-unit", toy_opts.cells_per_unit, "Coverage cells per unit length");
  toy_cmd->add_option("--dist", toy_opts.dist, "Feature distribution: uniform or gaussian");
  toy_cmd->add_option("--mean1", toy_opts.mean1, "Gaussian mean of l1");
  toy_cmd->add_option("--mean2", toy_opts.mean2, "Gaussian mean of l2");
  toy_cmd->add_option("--sigma", toy_opts.sigma, "Gaussian standard deviation");
  toy_cmd->add_option("--spaces", toy_opts.spaces, "Comma-separated upper bounds of square decision spaces");
  toy_cmd->add_option("--histogram-space", toy_opts.histogram_space, "1-based space used for the similarity histogram");
  toy_cmd->add_option("--k", toy_opts.k, "Source tasks in the similarity experiment");
  toy_cmd->add_option("--bins", toy_opts.bins, "Histogram bins");
  toy_cmd->add_option("--out-dir", toy_opts.out_dir, "Output directory");

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample-similarity", "Sample a similarity distribution and histogram it");
  sample_cmd->add_option("--dist", sample.dist, "Distribution (h1h h2h m1 m2 m3 m4 h1l h2l custom)")->required();
  sample_cmd->add_option("--knots", sample.knots, "CSV with columns s,density for --dist custom");
  sample_cmd->add_option("--k", sample.k, "Number of samples")->required();
  sample_cmd->add_option("--bins", sample.bins, "Histogram bins");
  sample_cmd->add_option("--seed", sample.seed, "Master seed");
  sample_cmd->add_option("--out", sample.out, "Histogram CSV path");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("stopgen");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& arg : argv_storage) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (run_cmd->parsed()) return cmd_run(run_opts, out);
    if (compare->parsed()) return cmd_compare(cmp, out, err);
    if (toy_cmd->parsed()) return cmd_toy(toy_opts, out);
    if (sample_cmd->parsed()) return cmd_sample_similarity(sample, out);
  } catch (const UsageError& error) {
    err << "usage error: " << error.what() << '\n';
    return 2;
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace stopgen::cli
