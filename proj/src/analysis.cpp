#include "tilekl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "parallel.hpp"
#include "tilekl/csv.hpp"
#include "tilekl/error.hpp"

namespace tilekl {

namespace fs = std::filesystem;

DistanceMatrix pairwise_matrix(const LevelSet& levels, const DivergenceConfig& config, unsigned jobs)
{
  config.validate();
  const std::size_t n = levels.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "a distance matrix needs at least two levels");

  std::vector<PatternDistribution> dists;
  dists.reserve(n);
  for (const auto& level : levels) {
    try {
      dists.push_back(extract_distribution(level.grid, config.dims));
    } catch (const Error& e) {
      throw Error(e.code(), level.name + ": " + e.what());
    }
  }

  // kl[i][j] = D(i||j)
  std::vector<std::vector<double>> kl(n, std::vector<double>(n, 0.0));
  detail::parallel_for(n, jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) kl[i][j] = kl_div(dists[i], dists[j], config.epsilon);
    }
  });

  DistanceMatrix m;
  m.config = config;
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m.names.push_back(levels[i].name);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m.values[i][j] = config.weight * kl[i][j] + (1.0 - config.weight) * kl[j][i];
    }
  }
  return m;
}

std::string matrix_csv(const DistanceMatrix& matrix)
{
  std::string out = "level";
  for (const auto& name : matrix.names) out += ',' + csv_field(name);
  out += '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += csv_field(matrix.names[i]);
    for (double v : matrix.values[i]) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

Dendrogram average_linkage(const DistanceMatrix& matrix)
{
  const std::size_t n = matrix.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "clustering needs at least two levels");

  std::vector<std::vector<double>> sym(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sym[i][j] = (matrix.values[i][j] + matrix.values[j][i]) / 2.0;
      if (sym[i][j] < -1e-9) {
        throw Error(ErrorCode::NegativeDistance,
                    "negative dissimilarity " + format_double(sym[i][j]) + " between " +
                        matrix.names[i] + " and " + matrix.names[j] + "; try a smaller epsilon");
      }
    }
  }

  struct Cluster {
    std::size_t id;
    std::vector<std::size_t> members;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}});

  auto linkage = [&](const Cluster& a, const Cluster& b) {
    double sum = 0.0;
    for (std::size_t x : a.members) {
      for (std::size_t y : b.members) sum += sym[x][y];
    }
    return sum / static_cast<double>(a.members.size() * b.members.size());
  };

  Dendrogram d;
  d.leaves = matrix.names;
  while (active.size() > 1) {
    std::size_t bi = 0;
    std::size_t bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double dist = linkage(active[i], active[j]);
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    }
    Cluster merged{n + d.merges.size(), active[bi].members};
    merged.members.insert(merged.members.end(), active[bj].members.begin(), active[bj].members.end());
    d.merges.push_back({active[bi].id, active[bj].id, best, merged.id});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
    active.push_back(std::move(merged));
  }
  return d;
}

std::vector<std::size_t> cut_dendrogram(const Dendrogram& dendrogram, std::size_t k)
{
  const std::size_t n = dendrogram.leaves.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidK, "cluster count " + std::to_string(k) + " outside [1, " +
                                         std::to_string(n) + "]");
  }
  std::vector<std::size_t> parent(n + dendrogram.merges.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  for (std::size_t m = 0; m + k < n; ++m) {
    const auto& merge = dendrogram.merges[m];
    parent[merge.a] = merge.id;
    parent[merge.b] = merge.id;
  }
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  std::vector<std::size_t> labels(n);
  std::vector<std::size_t> roots;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t r = root(leaf);
    auto it = std::find(roots.begin(), roots.end(), r);
    labels[leaf] = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }
  return labels;
}

std::string dendrogram_json(const Dendrogram& dendrogram)
{
  nlohmann::ordered_json j;
  j["leaves"] = dendrogram.leaves;
  j["merges"] = nlohmann::ordered_json::array();
  for (const auto& m : dendrogram.merges) {
    j["merges"].push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}, {"id", m.id}});
  }
  j["newick"] = dendrogram_newick(dendrogram);
  return j.dump(2) + '\n';
}

namespace {

std::string newick_label(const std::string& name)
{
  if (name.find_first_of(" \t()[]':;,") == std::string::npos && !name.empty()) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  return out + "'";
}

}  // namespace

std::string dendrogram_newick(const Dendrogram& dendrogram)
{
  const std::size_t n = dendrogram.leaves.size();
  if (n == 1) return newick_label(dendrogram.leaves.front()) + ";";
  auto height = [&](std::size_t id) { return id < n ? 0.0 : dendrogram.merges[id - n].height; };
  std::function<std::string(std::size_t)> node = [&](std::size_t id) -> std::string {
    if (id < n) return newick_label(dendrogram.leaves[id]);
    const auto& m = dendrogram.merges[id - n];
    return "(" + node(m.a) + ":" + format_double(m.height - height(m.a)) + "," + node(m.b) + ":" +
           format_double(m.height - height(m.b)) + ")";
  };
  return node(dendrogram.merges.back().id) + ";";
}

std::string labels_csv(const Dendrogram& dendrogram, std::span<const std::size_t> labels)
{
  std::string out = "level,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += csv_field(dendrogram.leaves[i]) + ',' + std::to_string(labels[i]) + '\n';
  }
  return out;
}

std::string HeatmapColumn::label() const
{
  return dims.label() + "_" + format_double(weight);
}

GeneratorSet load_generator_dir(const fs::path& dir, FilterDims min_dims)
{
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  GeneratorSet set;
  set.name = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
  for (const auto& file : files) {
    try {
      TileGrid grid = load_level(file);
      if (grid.width() < min_dims.width || grid.height() < min_dims.height) {
        ++set.skipped;
        continue;
      }
      set.levels.push_back(std::move(grid));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      ++set.skipped;
    }
  }
  if (set.levels.empty()) {
    throw Error(ErrorCode::EmptyInput, "no usable levels in " + dir.string());
  }
  return set;
}

HeatmapTable compare_sets(const LevelSet& training, std::span<const GeneratorSet> generators,
                          std::span<const FilterDims> filters, std::span<const double> weights,
                          double epsilon, unsigned jobs)
{
  if (filters.empty() || weights.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one filter and one weight are required");
  }
  if (generators.empty()) throw Error(ErrorCode::EmptyInput, "no generated level sets");
  for (double w : weights) DivergenceConfig{epsilon, filters.front(), w}.validate();

  std::vector<PatternDistribution> targets;
  for (const auto& dims : filters) targets.push_back(training_distribution(training, dims));

  HeatmapTable table;
  for (const auto& dims : filters) {
    for (double w : weights) table.columns.push_back({dims, w});
  }
  for (const auto& g : generators) {
    table.rows.push_back(g.name);
    table.skipped.push_back(g.skipped);
  }
  table.cells.assign(generators.size(), std::vector<HeatmapCell>(table.columns.size()));

  const std::size_t tasks = generators.size() * filters.size();
  detail::parallel_for(tasks, jobs, [&](std::size_t task) {
    const std::size_t g = task / filters.size();
    const std::size_t f = task % filters.size();
    const auto& levels = generators[g].levels;
    std::vector<std::vector<double>> values(weights.size());
    for (const auto& grid : levels) {
      const auto q = extract_distribution(grid, filters[f]);
      const double pq = kl_div(targets[f], q, epsilon);
      const double qp = kl_div(q, targets[f], epsilon);
      for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        values[wi].push_back(weights[wi] * pq + (1.0 - weights[wi]) * qp);
      }
    }
    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
      const auto& v = values[wi];
      HeatmapCell cell;
      cell.count = v.size();
      double sum = 0.0;
      for (double x : v) sum += x;
      cell.mean = sum / static_cast<double>(v.size());
      if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - cell.mean) * (x - cell.mean);
        cell.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
      }
      table.cells[g][f * weights.size() + wi] = cell;
    }
  });
  return table;
}

HeatmapTable compare_dirs(const LevelSet& training, std::span<const fs::path> generated_dirs,
                          std::span<const FilterDims> filters, std::span<const double> weights,
                          double epsilon, unsigned jobs)
{
  if (filters.empty()) throw Error(ErrorCode::InvalidArgument, "at least one filter is required");
  FilterDims largest(1, 1);
  for (const auto& f : filters) {
    largest.width = std::max(largest.width, f.width);
    largest.height = std::max(largest.height, f.height);
  }
  std::vector<GeneratorSet> sets;
  for (const auto& dir : generated_dirs) sets.push_back(load_generator_dir(dir, largest));
  return compare_sets(training, sets, filters, weights, epsilon, jobs);
}

std::string heatmap_csv(const HeatmapTable& table)
{
  std::string out = "generator";
  for (const auto& c : table.columns) out += ',' + c.label();
  out += '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += csv_field(table.rows[r]);
    for (const auto& cell : table.cells[r]) out += ',' + format_double(cell.mean);
    out += '\n';
  }
  return out;
}

std::string heatmap_detail_csv(const HeatmapTable& table)
{
  std::string out = "generator,column,mean,stddev,count\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = table.cells[r][c];
      out += csv_field(table.rows[r]) + ',' + table.columns[c].label() + ',' +
             format_double(cell.mean) + ',' + format_double(cell.stddev) + ',' +
             std::to_string(cell.count) + '\n';
    }
  }
  return out;
}

}  // namespace tilekl
