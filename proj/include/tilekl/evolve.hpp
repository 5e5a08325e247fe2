#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tilekl/divergence.hpp"
#include "tilekl/level_io.hpp"
#include "tilekl/patterns.hpp"
#include "tilekl/rng.hpp"

namespace tilekl {

inline constexpr std::size_t kDefaultBudget = 10000;
inline constexpr std::size_t kDefaultTargetWidth = 30;
inline constexpr double kDefaultFlipRate = 3.0;

// Scans every cell and replaces it with probability rate / cell count.
struct FlipMutation {
  double rate = kDefaultFlipRate;  // expected flips per application
};

// Copies a filter-sized patch from a training level to the candidate.
struct ConvMutation {};

using MutationKind = std::variant<FlipMutation, ConvMutation>;

std::string to_string(const MutationKind& kind);

struct EvolutionConfig {
  DivergenceConfig divergence;
  std::size_t target_width = kDefaultTargetWidth;
  std::size_t target_height = 0;  // 0: height of the first training level
  std::size_t budget = kDefaultBudget;
  MutationKind mutation = ConvMutation{};
  std::uint64_t seed = 0;
  bool accept_equal = true;
};

struct TraceEntry {
  std::size_t eval_index;
  double candidate_fitness;
  double best_fitness;
};

using Trace = std::vector<TraceEntry>;

// "eval_index,candidate_fitness,best_fitness" with header.
std::string trace_csv(const Trace& trace);

struct EvolutionResult {
  TileGrid best;
  double best_fitness = 0.0;
  double initial_fitness = 0.0;
  Trace trace;
  std::chrono::nanoseconds elapsed{0};
  std::chrono::nanoseconds training_time{0};
};

struct CellEdit {
  std::size_t x;
  std::size_t y;
  char symbol;
};

// Each cell uniform over the alphabet.
TileGrid random_init(const TileAlphabet& alphabet, std::size_t width, std::size_t height, Rng& rng);

// Cell edits of one flip mutation; every edit changes its cell.
std::vector<CellEdit> sample_flip(const TileGrid& grid, double rate, const TileAlphabet& alphabet,
                                  Rng& rng);

// Cell edits of one convolutional mutation (a whole patch, including cells
// that already hold the copied symbol).
std::vector<CellEdit> sample_conv(const TileGrid& grid, const LevelSet& training, FilterDims dims,
                                  Rng& rng);

TileGrid flip_mutate(const TileGrid& grid, double rate, const TileAlphabet& alphabet, Rng& rng);
TileGrid conv_mutate(const TileGrid& grid, const LevelSet& training, FilterDims dims, Rng& rng);

// Pattern counts of a grid kept in step with cell edits: only windows that
// overlap an edited cell are removed and re-added.
class IncrementalCounts {
 public:
  IncrementalCounts(TileGrid grid, FilterDims dims);

  const TileGrid& grid() const { return grid_; }
  const PatternDistribution& distribution() const { return dist_; }

  // Applies the edits and returns the number of windows recounted. Returns the
  // previous symbols of the edited cells through `undo` when non-null, in an
  // order that restores the grid when applied.
  std::size_t apply(std::span<const CellEdit> edits, std::vector<CellEdit>* undo = nullptr);

 private:
  TileGrid grid_;
  FilterDims dims_;
  PatternDistribution dist_;
  std::vector<std::size_t> scratch_;
};

// Random Mutation Hill Climber, (1+1) EA, maximising the weighted fitness
// against the merged training distribution.
EvolutionResult hill_climb(const LevelSet& training, const EvolutionConfig& config);

struct SnippetFitness {
  std::string level;
  std::size_t offset;
  double fitness;
};

// Fitness of every full-height `width`-wide slice of each training level
// against the merged training distribution.
std::vector<SnippetFitness> snippet_fitness(const LevelSet& training, std::size_t width,
                                            const DivergenceConfig& config);

std::string snippets_csv(const std::vector<SnippetFitness>& rows);

// Fraction of the grid's windows whose pattern never occurs in `training`.
double novel_window_fraction(const PatternDistribution& training, const PatternDistribution& level);

// Number of distinct training patterns that occur in the level.
std::size_t training_pattern_coverage(const PatternDistribution& training,
                                      const PatternDistribution& level);

}  // namespace tilekl
