#include "tilekl/evolve.hpp"

#include <algorithm>

#include "tilekl/csv.hpp"
#include "tilekl/error.hpp"

namespace tilekl {

namespace {

using Clock = std::chrono::steady_clock;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_fits(std::size_t width, std::size_t height, FilterDims dims, const std::string& what)
{
  if (width < dims.width || height < dims.height) {
    throw Error(ErrorCode::FilterTooLarge, what + " (" + std::to_string(width) + "x" +
                                               std::to_string(height) + ") is smaller than filter " +
                                               dims.label());
  }
}

TileGrid with_edits(TileGrid grid, std::span<const CellEdit> edits)
{
  for (const auto& e : edits) grid.at(e.x, e.y) = e.symbol;
  return grid;
}

}  // namespace

std::string to_string(const MutationKind& kind)
{
  return std::visit(Overloaded{[](const FlipMutation& f) { return "flip(" + format_double(f.rate) + ")"; },
                               [](const ConvMutation&) { return std::string("conv"); }},
                    kind);
}

std::string trace_csv(const Trace& trace)
{
  std::string out = "eval_index,candidate_fitness,best_fitness\n";
  for (const auto& e : trace) {
    out += std::to_string(e.eval_index) + ',' + format_double(e.candidate_fitness) + ',' +
           format_double(e.best_fitness) + '\n';
  }
  return out;
}

TileGrid random_init(const TileAlphabet& alphabet, std::size_t width, std::size_t height, Rng& rng)
{
  if (alphabet.empty()) throw Error(ErrorCode::EmptyInput, "cannot initialise from an empty alphabet");
  std::string cells(width * height, ' ');
  for (auto& c : cells) c = alphabet[rng.below(alphabet.size())];
  return TileGrid(width, height, std::move(cells));
}

std::vector<CellEdit> sample_flip(const TileGrid& grid, double rate, const TileAlphabet& alphabet,
                                  Rng& rng)
{
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "flip rate must be positive");
  std::vector<CellEdit> edits;
  if (alphabet.size() < 2) return edits;
  const double p = rate / static_cast<double>(grid.size());
  const std::string& symbols = alphabet.symbols();
  for (std::size_t y = 0; y < grid.height(); ++y) {
    for (std::size_t x = 0; x < grid.width(); ++x) {
      if (rng.unit() >= p) continue;
      const char current = grid.at(x, y);
      const auto pos = symbols.find(current);
      char next;
      if (pos == std::string::npos) {
        next = symbols[rng.below(symbols.size())];
      } else {
        // Skip over the current symbol so the cell always changes.
        auto r = rng.below(symbols.size() - 1);
        if (r >= pos) ++r;
        next = symbols[r];
      }
      edits.push_back({x, y, next});
    }
  }
  return edits;
}

std::vector<CellEdit> sample_conv(const TileGrid& grid, const LevelSet& training, FilterDims dims,
                                  Rng& rng)
{
  if (training.empty()) throw Error(ErrorCode::EmptyInput, "no training levels");
  require_fits(grid.width(), grid.height(), dims, "candidate");
  const auto& source = training[rng.below(training.size())];
  require_fits(source.grid.width(), source.grid.height(), dims, "training level " + source.name);

  const std::size_t sx = rng.below(source.grid.width() - dims.width + 1);
  const std::size_t sy = rng.below(source.grid.height() - dims.height + 1);
  const std::size_t dx = rng.below(grid.width() - dims.width + 1);
  const std::size_t dy = rng.below(grid.height() - dims.height + 1);

  std::vector<CellEdit> edits;
  edits.reserve(dims.area());
  for (std::size_t j = 0; j < dims.height; ++j) {
    for (std::size_t i = 0; i < dims.width; ++i) {
      edits.push_back({dx + i, dy + j, source.grid.at(sx + i, sy + j)});
    }
  }
  return edits;
}

TileGrid flip_mutate(const TileGrid& grid, double rate, const TileAlphabet& alphabet, Rng& rng)
{
  return with_edits(grid, sample_flip(grid, rate, alphabet, rng));
}

TileGrid conv_mutate(const TileGrid& grid, const LevelSet& training, FilterDims dims, Rng& rng)
{
  return with_edits(grid, sample_conv(grid, training, dims, rng));
}

IncrementalCounts::IncrementalCounts(TileGrid grid, FilterDims dims)
    : grid_(std::move(grid)), dims_(dims), dist_(extract_distribution(grid_, dims))
{
}

std::size_t IncrementalCounts::apply(std::span<const CellEdit> edits, std::vector<CellEdit>* undo)
{
  const std::size_t cols = grid_.width() - dims_.width + 1;
  const std::size_t rows = grid_.height() - dims_.height + 1;

  scratch_.clear();
  for (const auto& e : edits) {
    if (e.x >= grid_.width() || e.y >= grid_.height()) {
      throw Error(ErrorCode::InvalidArgument, "edit outside the grid");
    }
    if (grid_.at(e.x, e.y) == e.symbol) continue;
    const std::size_t x0 = e.x + 1 >= dims_.width ? e.x + 1 - dims_.width : 0;
    const std::size_t y0 = e.y + 1 >= dims_.height ? e.y + 1 - dims_.height : 0;
    const std::size_t x1 = std::min(e.x, cols - 1);
    const std::size_t y1 = std::min(e.y, rows - 1);
    for (std::size_t y = y0; y <= y1; ++y) {
      for (std::size_t x = x0; x <= x1; ++x) scratch_.push_back(y * cols + x);
    }
  }
  std::sort(scratch_.begin(), scratch_.end());
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());

  for (std::size_t w : scratch_) dist_.remove(window_at(grid_, w % cols, w / cols, dims_));

  if (undo) undo->reserve(undo->size() + edits.size());
  std::vector<CellEdit> previous;
  for (const auto& e : edits) {
    if (undo) previous.push_back({e.x, e.y, grid_.at(e.x, e.y)});
    grid_.at(e.x, e.y) = e.symbol;
  }
  if (undo) undo->insert(undo->end(), previous.rbegin(), previous.rend());

  for (std::size_t w : scratch_) dist_.add(window_at(grid_, w % cols, w / cols, dims_));
  return scratch_.size();
}

EvolutionResult hill_climb(const LevelSet& training, const EvolutionConfig& config)
{
  const auto start = Clock::now();
  config.divergence.validate();
  if (training.empty()) throw Error(ErrorCode::EmptyInput, "no training levels");
  if (config.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1");
  const FilterDims dims = config.divergence.dims;
  const std::size_t width = config.target_width;
  const std::size_t height = config.target_height ? config.target_height : training[0].grid.height();
  require_fits(width, height, dims, "target level");
  if (const auto* flip = std::get_if<FlipMutation>(&config.mutation); flip && !(flip->rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "flip rate must be positive");
  }

  const PatternDistribution target = training_distribution(training, dims);
  EvolutionResult result;
  result.training_time = Clock::now() - start;

  Rng rng(config.seed);
  IncrementalCounts state(random_init(training.alphabet(), width, height, rng), dims);
  double parent_fitness = fitness(target, state.distribution(), config.divergence).fitness;
  result.initial_fitness = parent_fitness;
  result.trace.reserve(config.budget + 1);
  result.trace.push_back({0, parent_fitness, parent_fitness});

  std::vector<CellEdit> edits;
  std::vector<CellEdit> undo;
  for (std::size_t eval = 1; eval <= config.budget; ++eval) {
    edits = std::visit(
        Overloaded{[&](const FlipMutation& f) { return sample_flip(state.grid(), f.rate, training.alphabet(), rng); },
                   [&](const ConvMutation&) { return sample_conv(state.grid(), training, dims, rng); }},
        config.mutation);
    undo.clear();
    state.apply(edits, &undo);
    const double child = fitness(target, state.distribution(), config.divergence).fitness;
    if (child > parent_fitness || (config.accept_equal && child >= parent_fitness)) {
      parent_fitness = child;
    } else {
      state.apply(undo);
    }
    result.trace.push_back({eval, child, parent_fitness});
  }

  result.best = state.grid();
  result.best_fitness = parent_fitness;
  result.elapsed = Clock::now() - start;
  return result;
}

std::vector<SnippetFitness> snippet_fitness(const LevelSet& training, std::size_t width,
                                            const DivergenceConfig& config)
{
  config.validate();
  if (training.empty()) throw Error(ErrorCode::EmptyInput, "no training levels");
  const FilterDims dims = config.dims;
  for (const auto& level : training) {
    if (width > level.grid.width()) {
      throw Error(ErrorCode::SnippetTooWide, "snippet width " + std::to_string(width) +
                                                 " exceeds level " + level.name + " (" +
                                                 std::to_string(level.grid.width()) + ")");
    }
    require_fits(width, level.grid.height(), dims, "snippet of " + level.name);
  }
  const PatternDistribution target = training_distribution(training, dims);

  std::vector<SnippetFitness> rows;
  for (const auto& level : training) {
    for (std::size_t offset = 0; offset + width <= level.grid.width(); ++offset) {
      const auto q = extract_distribution(level.grid.columns(offset, width), dims);
      rows.push_back({level.name, offset, fitness(target, q, config).fitness});
    }
  }
  return rows;
}

std::string snippets_csv(const std::vector<SnippetFitness>& rows)
{
  const bool several = std::any_of(rows.begin(), rows.end(),
                                   [&](const SnippetFitness& r) { return r.level != rows.front().level; });
  std::string out = several ? "level,offset,fitness\n" : "offset,fitness\n";
  for (const auto& r : rows) {
    if (several) out += csv_field(r.level) + ',';
    out += std::to_string(r.offset) + ',' + format_double(r.fitness) + '\n';
  }
  return out;
}

double novel_window_fraction(const PatternDistribution& training, const PatternDistribution& level)
{
  if (level.total() == 0) return 0.0;
  std::uint64_t novel = 0;
  for (const auto& [cells, n] : level.counts()) {
    if (training.count(cells) == 0) novel += n;
  }
  return static_cast<double>(novel) / static_cast<double>(level.total());
}

std::size_t training_pattern_coverage(const PatternDistribution& training,
                                      const PatternDistribution& level)
{
  std::size_t covered = 0;
  for (const auto& [cells, n] : training.counts()) {
    if (level.count(cells) > 0) ++covered;
  }
  return covered;
}

}  // namespace tilekl
