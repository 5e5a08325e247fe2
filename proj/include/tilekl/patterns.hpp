#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tilekl/level_io.hpp"

namespace tilekl {

struct FilterDims {
  std::size_t width = 4;
  std::size_t height = 4;

  FilterDims() = default;
  // Throws InvalidArgument when either side is zero.
  FilterDims(std::size_t w, std::size_t h);

  std::size_t area() const { return width * height; }
  // "WxH", e.g. "4x4".
  std::string label() const;

  bool operator==(const FilterDims&) const = default;
  auto operator<=>(const FilterDims&) const = default;
};

// Parses "WxH" (also accepts "WXH").
FilterDims parse_filter_dims(std::string_view text);

struct Pattern {
  FilterDims dims;
  std::string cells;  // row-major, dims.area() symbols

  // "WxH:" followed by the row-major cells.
  std::string key() const;

  bool operator==(const Pattern&) const = default;
};

// Empirical pattern counts. Keys are the row-major cell strings; all patterns
// share `dims`, so ordering by cells is ordering by key.
class PatternDistribution {
 public:
  using Counts = std::map<std::string, std::uint64_t, std::less<>>;

  explicit PatternDistribution(FilterDims dims) : dims_(dims) {}

  const FilterDims& dims() const { return dims_; }
  const Counts& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  // Zero when absent.
  std::uint64_t count(std::string_view cells) const;

  void add(std::string_view cells, std::uint64_t n = 1);
  // Decrements; the entry disappears when its count reaches zero.
  void remove(std::string_view cells, std::uint64_t n = 1);

  bool operator==(const PatternDistribution&) const = default;

 private:
  FilterDims dims_;
  Counts counts_;
  std::uint64_t total_ = 0;
};

// (1 + T_W - F_W)(1 + T_H - F_H); FilterTooLarge when the filter does not fit.
std::uint64_t window_count(std::size_t grid_width, std::size_t grid_height, FilterDims dims);

// Row-major cells of the window whose top-left corner is (x, y).
std::string window_at(const TileGrid& grid, std::size_t x, std::size_t y, FilterDims dims);

// Stride-1 windows fully inside the grid.
PatternDistribution extract_distribution(const TileGrid& grid, FilterDims dims);

PatternDistribution merge_distributions(std::span<const PatternDistribution> dists);

// Distribution of every level in the set, merged.
PatternDistribution training_distribution(const LevelSet& levels, FilterDims dims);

struct PatternCount {
  Pattern pattern;
  std::uint64_t count;
};

// Most to least frequent; equal counts ordered by cell string.
std::vector<PatternCount> frequency_report(const PatternDistribution& dist);

// "pattern_key,count" with header.
std::string frequency_csv(std::span<const PatternCount> report);

}  // namespace tilekl
