#include "tilekl/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "tilekl/analysis.hpp"
#include "tilekl/csv.hpp"
#include "tilekl/divergence.hpp"
#include "tilekl/error.hpp"
#include "tilekl/evolve.hpp"
#include "tilekl/level_io.hpp"
#include "tilekl/patterns.hpp"

namespace tilekl::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  double epsilon = kDefaultEpsilon;
  std::string filter = "4x4";
  double weight = kDefaultWeight;
  std::optional<std::uint64_t> seed;
  std::string out;
  int verbosity = 0;
  unsigned jobs = 1;

  DivergenceConfig divergence() const
  {
    DivergenceConfig c{epsilon, parse_filter_dims(filter), weight};
    c.validate();
    return c;
  }
};

void write_output(const std::string& path, const std::string& content, std::ostream& out)
{
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  file << content;
  if (!file) throw Error(ErrorCode::IoError, "write failed: " + path);
}

std::vector<fs::path> to_paths(const std::vector<std::string>& v)
{
  return {v.begin(), v.end()};
}

int exit_code_for(ErrorCode code)
{
  switch (code) {
    case ErrorCode::IoError: return kIoError;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidK: return kUsage;
    default: return kDataError;
  }
}

double seconds(std::chrono::nanoseconds d)
{
  return std::chrono::duration<double>(d).count();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Tile-pattern KL divergence: level analysis and evolutionary generation", "tilekl"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--epsilon", g.epsilon, "Back-off estimation constant")->capture_default_str();
  app.add_option("--filter", g.filter, "Filter size WxH")->capture_default_str();
  app.add_option("--weight", g.weight, "Weight of D(P||Q) in [0,1]")->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed (drawn from entropy when omitted)");
  app.add_option("-o,--out", g.out, "Output path (default: stdout)");
  app.add_option("-j,--jobs", g.jobs, "Worker threads for cluster/compare")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbosity, "More diagnostics on stderr");

  // patterns
  std::vector<std::string> pattern_levels;
  auto* patterns = app.add_subcommand("patterns", "Pattern frequency table (pattern_key,count)");
  patterns->add_option("levels", pattern_levels, "Level files ('-' for stdin)")->required();

  // analyze
  std::vector<std::string> analyze_levels;
  std::size_t top = 0;
  std::string contributions_path;
  auto* analyze = app.add_subcommand("analyze", "Divergence report of a candidate against training levels");
  analyze->add_option("levels", analyze_levels, "TRAINING... CANDIDATE")->required()->expected(2, -1);
  analyze->add_option("--top", top, "Rows of the contribution CSV (0 = all)");
  analyze->add_option("--contributions", contributions_path, "Write per-pattern contributions CSV");

  // evolve
  std::vector<std::string> evolve_levels;
  std::size_t budget = kDefaultBudget;
  std::size_t width = kDefaultTargetWidth;
  std::size_t height = 0;
  std::string mutation = "conv";
  double flip_rate = kDefaultFlipRate;
  bool accept_equal = true;
  std::string trace_path;
  auto* evolve = app.add_subcommand("evolve", "Evolve a level with the (1+1) EA");
  evolve->add_option("levels", evolve_levels, "Training level files")->required();
  evolve->add_option("--budget", budget, "Fitness evaluations")->capture_default_str();
  evolve->add_option("--width", width, "Target width in tiles")->capture_default_str();
  evolve->add_option("--height", height, "Target height (default: training height)");
  evolve->add_option("--mutation", mutation, "flip or conv")
      ->check(CLI::IsMember({"flip", "conv"}))
      ->capture_default_str();
  evolve->add_option("--flip-rate", flip_rate, "Expected flips per flip mutation")->capture_default_str();
  evolve->add_option("--accept-equal", accept_equal, "Accept children with equal fitness")
      ->capture_default_str();
  evolve->add_option("--trace", trace_path, "Write the evaluation trace CSV");

  // cluster
  std::vector<std::string> cluster_levels;
  std::size_t cut = 3;
  std::string dendrogram_path;
  std::string newick_path;
  std::string labels_path;
  auto* cluster = app.add_subcommand("cluster", "Pairwise divergence matrix and average-linkage clustering");
  cluster->add_option("levels", cluster_levels, "Level files")->required()->expected(2, -1);
  cluster->add_option("--cut", cut, "Number of clusters for the label output")->capture_default_str();
  cluster->add_option("--dendrogram", dendrogram_path, "Write merge list JSON");
  cluster->add_option("--newick", newick_path, "Write Newick tree");
  cluster->add_option("--labels", labels_path, "Write cut labels CSV ('-' for stdout)");

  // compare
  std::vector<std::string> training_paths;
  std::vector<std::string> generator_dirs;
  std::vector<std::string> filters;
  std::vector<double> weights;
  std::string detail_path;
  auto* compare = app.add_subcommand("compare", "Mean divergence of generated level sets (heatmap CSV)");
  compare->add_option("--training", training_paths, "Training level file (repeatable)")->required()->allow_extra_args(false);
  compare->add_option("dirs", generator_dirs, "Directories of generated levels")->required();
  compare->add_option("--filters", filters, "Filter size (repeatable)")->allow_extra_args(false);
  compare->add_option("--weights", weights, "Weight (repeatable)")->allow_extra_args(false);
  compare->add_option("--detail", detail_path, "Write mean/stddev/count per cell");

  // snippets
  std::vector<std::string> snippet_levels;
  std::size_t snippet_width = kDefaultTargetWidth;
  auto* snippets = app.add_subcommand("snippets", "Fitness of every fixed-width slice of the training levels");
  snippets->add_option("levels", snippet_levels, "Training level files")->required();
  snippets->add_option("--width", snippet_width, "Snippet width in tiles")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (patterns->parsed()) {
      const auto levels = load_level_set(to_paths(pattern_levels));
      const auto dist = training_distribution(levels, parse_filter_dims(g.filter));
      write_output(g.out, frequency_csv(frequency_report(dist)), out);
      if (g.verbosity > 0) {
        err << "distinct: " << dist.distinct() << "\ntotal: " << dist.total() << '\n';
      }
    } else if (analyze->parsed()) {
      const auto config = g.divergence();
      std::vector<std::string> training(analyze_levels.begin(), analyze_levels.end() - 1);
      const auto p = training_distribution(load_level_set(to_paths(training)), config.dims);
      const auto q = extract_distribution(load_level(analyze_levels.back()), config.dims);
      const auto r = fitness(p, q, config);
      std::string report;
      report += "filter: " + config.dims.label() + "\n";
      report += "epsilon: " + format_double(config.epsilon) + "\n";
      report += "weight: " + format_double(config.weight) + "\n";
      report += "kl_p_q: " + format_double(r.kl_p_q) + "\n";
      report += "kl_q_p: " + format_double(r.kl_q_p) + "\n";
      report += "fitness: " + format_double(r.fitness) + "\n";
      write_output(g.out, report, out);
      if (!contributions_path.empty()) {
        write_output(contributions_path, contributions_csv(contributions(p, q, config.epsilon), top), out);
      }
    } else if (evolve->parsed()) {
      EvolutionConfig config;
      config.divergence = g.divergence();
      config.budget = budget;
      config.target_width = width;
      config.target_height = height;
      config.accept_equal = accept_equal;
      if (mutation == "flip") {
        config.mutation = FlipMutation{flip_rate};
      } else {
        config.mutation = ConvMutation{};
      }
      config.seed = g.seed ? *g.seed : entropy_seed();
      err << "seed: " << config.seed << '\n';

      const auto training = load_level_set(to_paths(evolve_levels));
      const auto result = hill_climb(training, config);
      write_output(g.out, serialize_level(result.best) + "\n", out);
      if (!trace_path.empty()) write_output(trace_path, trace_csv(result.trace), out);
      err << "initial_fitness: " << format_double(result.initial_fitness) << '\n'
          << "best_fitness: " << format_double(result.best_fitness) << '\n';
      if (g.verbosity > 0) {
        err << "training_seconds: " << seconds(result.training_time) << '\n'
            << "elapsed_seconds: " << seconds(result.elapsed) << '\n';
      }
    } else if (cluster->parsed()) {
      const auto config = g.divergence();
      const auto levels = load_level_set(to_paths(cluster_levels));
      const auto matrix = pairwise_matrix(levels, config, g.jobs);
      const auto dendrogram = average_linkage(matrix);
      const auto labels = cut_dendrogram(dendrogram, cut);
      write_output(g.out, matrix_csv(matrix), out);
      if (!dendrogram_path.empty()) write_output(dendrogram_path, dendrogram_json(dendrogram), out);
      if (!newick_path.empty()) write_output(newick_path, dendrogram_newick(dendrogram) + "\n", out);
      if (!labels_path.empty()) write_output(labels_path, labels_csv(dendrogram, labels), out);
    } else if (compare->parsed()) {
      std::vector<FilterDims> dims;
      for (const auto& f : filters) dims.push_back(parse_filter_dims(f));
      if (dims.empty()) dims.push_back(parse_filter_dims(g.filter));
      if (weights.empty()) weights.push_back(g.weight);
      const auto training = load_level_set(to_paths(training_paths));
      const auto dirs = to_paths(generator_dirs);
      const auto table = compare_dirs(training, dirs, dims, weights, g.epsilon, g.jobs);
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.skipped[r] > 0) {
          err << "warning: " << table.rows[r] << ": skipped " << table.skipped[r]
              << " unusable file(s)\n";
        }
      }
      write_output(g.out, heatmap_csv(table), out);
      if (!detail_path.empty()) write_output(detail_path, heatmap_detail_csv(table), out);
    } else if (snippets->parsed()) {
      const auto config = g.divergence();
      const auto training = load_level_set(to_paths(snippet_levels));
      write_output(g.out, snippets_csv(snippet_fitness(training, snippet_width, config)), out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace tilekl::cli
