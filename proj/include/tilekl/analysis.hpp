#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tilekl/divergence.hpp"
#include "tilekl/level_io.hpp"
#include "tilekl/patterns.hpp"

namespace tilekl {

struct DistanceMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // values[i][j] = d(i, j)
  DivergenceConfig config;

  std::size_t size() const { return names.size(); }
};

// d(i, j) = w D(i||j) + (1 - w) D(j||i) from each level's own distribution.
// Cells are computed on up to `jobs` threads.
DistanceMatrix pairwise_matrix(const LevelSet& levels, const DivergenceConfig& config,
                               unsigned jobs = 1);

std::string matrix_csv(const DistanceMatrix& matrix);

struct Merge {
  std::size_t a;
  std::size_t b;
  double height;
  std::size_t id;  // leaves are 0..n-1, merge k creates n + k
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
};

// Unweighted average linkage on (d + d^T) / 2. Ties go to the lowest index
// pair among the active clusters (leaves first, then merges in creation order).
Dendrogram average_linkage(const DistanceMatrix& matrix);

// Labels per leaf after undoing the last k - 1 merges; numbered by first leaf.
std::vector<std::size_t> cut_dendrogram(const Dendrogram& dendrogram, std::size_t k);

std::string dendrogram_json(const Dendrogram& dendrogram);
std::string dendrogram_newick(const Dendrogram& dendrogram);
std::string labels_csv(const Dendrogram& dendrogram, std::span<const std::size_t> labels);

struct HeatmapColumn {
  FilterDims dims;
  double weight;

  // "FwxFh_w", e.g. "4x4_0.5".
  std::string label() const;
};

struct HeatmapCell {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single level
  std::size_t count = 0;
};

struct HeatmapTable {
  std::vector<std::string> rows;
  std::vector<HeatmapColumn> columns;
  std::vector<std::vector<HeatmapCell>> cells;  // [row][column]
  std::vector<std::size_t> skipped;              // unusable files per row
};

struct GeneratorSet {
  std::string name;
  std::vector<TileGrid> levels;
  std::size_t skipped = 0;
};

// Every regular file of `dir` in name order; files that fail to parse or are
// smaller than `min_dims` are counted in `skipped`. Empty result is an error.
GeneratorSet load_generator_dir(const std::filesystem::path& dir, FilterDims min_dims);

HeatmapTable compare_sets(const LevelSet& training, std::span<const GeneratorSet> generators,
                          std::span<const FilterDims> filters, std::span<const double> weights,
                          double epsilon, unsigned jobs = 1);

HeatmapTable compare_dirs(const LevelSet& training,
                          std::span<const std::filesystem::path> generated_dirs,
                          std::span<const FilterDims> filters, std::span<const double> weights,
                          double epsilon, unsigned jobs = 1);

// Means, one row per generator.
std::string heatmap_csv(const HeatmapTable& table);
// generator,column,mean,stddev,count
std::string heatmap_detail_csv(const HeatmapTable& table);

}  // namespace tilekl
