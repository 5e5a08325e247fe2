#include "tilekl/patterns.hpp"

#include <algorithm>
#include <charconv>

#include "tilekl/csv.hpp"
#include "tilekl/error.hpp"

namespace tilekl {

FilterDims::FilterDims(std::size_t w, std::size_t h) : width(w), height(h)
{
  if (w == 0 || h == 0) throw Error(ErrorCode::InvalidArgument, "filter sides must be at least 1");
}

std::string FilterDims::label() const
{
  return std::to_string(width) + "x" + std::to_string(height);
}

FilterDims parse_filter_dims(std::string_view text)
{
  const auto sep = text.find_first_of("xX");
  std::size_t w = 0;
  std::size_t h = 0;
  auto parse = [](std::string_view s, std::size_t& v) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
  };
  if (sep == std::string_view::npos || !parse(text.substr(0, sep), w) ||
      !parse(text.substr(sep + 1), h) || w == 0 || h == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "filter must look like WxH with positive sides, got '" + std::string(text) + "'");
  }
  return FilterDims(w, h);
}

std::string Pattern::key() const
{
  return dims.label() + ":" + cells;
}

std::uint64_t PatternDistribution::count(std::string_view cells) const
{
  auto it = counts_.find(cells);
  return it == counts_.end() ? 0 : it->second;
}

void PatternDistribution::add(std::string_view cells, std::uint64_t n)
{
  if (n == 0) return;
  auto it = counts_.find(cells);
  if (it == counts_.end()) {
    counts_.emplace(std::string(cells), n);
  } else {
    it->second += n;
  }
  total_ += n;
}

void PatternDistribution::remove(std::string_view cells, std::uint64_t n)
{
  auto it = counts_.find(cells);
  if (it == counts_.end() || it->second < n) {
    throw Error(ErrorCode::InvalidArgument, "removing a pattern that is not counted");
  }
  it->second -= n;
  total_ -= n;
  if (it->second == 0) counts_.erase(it);
}

std::uint64_t window_count(std::size_t grid_width, std::size_t grid_height, FilterDims dims)
{
  if (grid_width < dims.width || grid_height < dims.height) {
    throw Error(ErrorCode::FilterTooLarge,
                "filter " + dims.label() + " does not fit a " + std::to_string(grid_width) + "x" +
                    std::to_string(grid_height) + " grid");
  }
  return static_cast<std::uint64_t>(1 + grid_width - dims.width) * (1 + grid_height - dims.height);
}

std::string window_at(const TileGrid& grid, std::size_t x, std::size_t y, FilterDims dims)
{
  std::string cells;
  cells.reserve(dims.area());
  for (std::size_t dy = 0; dy < dims.height; ++dy) cells.append(grid.row(y + dy).substr(x, dims.width));
  return cells;
}

PatternDistribution extract_distribution(const TileGrid& grid, FilterDims dims)
{
  window_count(grid.width(), grid.height(), dims);
  PatternDistribution dist(dims);
  for (std::size_t y = 0; y + dims.height <= grid.height(); ++y) {
    for (std::size_t x = 0; x + dims.width <= grid.width(); ++x) dist.add(window_at(grid, x, y, dims));
  }
  return dist;
}

PatternDistribution merge_distributions(std::span<const PatternDistribution> dists)
{
  if (dists.empty()) throw Error(ErrorCode::EmptyInput, "nothing to merge");
  PatternDistribution merged(dists.front().dims());
  for (const auto& d : dists) {
    if (d.dims() != merged.dims()) {
      throw Error(ErrorCode::DimsMismatch,
                  "cannot merge " + d.dims().label() + " with " + merged.dims().label() + " patterns");
    }
    for (const auto& [cells, n] : d.counts()) merged.add(cells, n);
  }
  return merged;
}

PatternDistribution training_distribution(const LevelSet& levels, FilterDims dims)
{
  std::vector<PatternDistribution> dists;
  dists.reserve(levels.size());
  for (const auto& level : levels) {
    try {
      dists.push_back(extract_distribution(level.grid, dims));
    } catch (const Error& e) {
      throw Error(e.code(), level.name + ": " + e.what());
    }
  }
  return merge_distributions(dists);
}

std::vector<PatternCount> frequency_report(const PatternDistribution& dist)
{
  std::vector<PatternCount> report;
  report.reserve(dist.distinct());
  for (const auto& [cells, n] : dist.counts()) report.push_back({Pattern{dist.dims(), cells}, n});
  // The map is already in cell order, so a stable sort on count keeps ties by key.
  std::stable_sort(report.begin(), report.end(),
                   [](const PatternCount& a, const PatternCount& b) { return a.count > b.count; });
  return report;
}

std::string frequency_csv(std::span<const PatternCount> report)
{
  std::string out = "pattern_key,count\n";
  for (const auto& row : report) {
    out += csv_field(row.pattern.key());
    out += ',';
    out += std::to_string(row.count);
    out += '\n';
  }
  return out;
}

}  // namespace tilekl
