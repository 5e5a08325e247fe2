#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tilekl {

// Ordered set of tile symbols. Order is the order of first occurrence.
class TileAlphabet {
 public:
  TileAlphabet() = default;
  explicit TileAlphabet(std::string_view symbols);

  // Adds `symbol` if it is not present yet. Returns true when inserted.
  bool insert(char symbol);
  void merge(const TileAlphabet& other);

  bool contains(char symbol) const;
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  char operator[](std::size_t i) const { return symbols_[i]; }
  const std::string& symbols() const { return symbols_; }

  void set_name(char symbol, std::string name);
  // Empty string when no display name was registered.
  std::string name(char symbol) const;

  bool operator==(const TileAlphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::string symbols_;
  std::map<char, std::string> names_;
};

// The tile types of Super Mario Bros. in VGLC encoding, with display names.
TileAlphabet mario_alphabet();

// Rectangular, row-major grid of tile symbols.
class TileGrid {
 public:
  TileGrid() = default;
  TileGrid(std::size_t width, std::size_t height, char fill);
  TileGrid(std::size_t width, std::size_t height, std::string cells);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  char at(std::size_t x, std::size_t y) const { return cells_[y * width_ + x]; }
  char& at(std::size_t x, std::size_t y) { return cells_[y * width_ + x]; }
  std::string_view row(std::size_t y) const {
    return std::string_view(cells_).substr(y * width_, width_);
  }
  const std::string& cells() const { return cells_; }

  TileAlphabet alphabet() const;

  // Columns [x0, x0 + w) at full height.
  TileGrid columns(std::size_t x0, std::size_t w) const;

  bool operator==(const TileGrid& other) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::string cells_;
};

struct NamedLevel {
  std::string name;
  TileGrid grid;
};

class LevelSet {
 public:
  LevelSet() = default;

  // Throws InvalidArgument on a duplicate name.
  void add(std::string name, TileGrid grid);

  std::size_t size() const { return levels_.size(); }
  bool empty() const { return levels_.empty(); }
  const NamedLevel& operator[](std::size_t i) const { return levels_[i]; }
  auto begin() const { return levels_.begin(); }
  auto end() const { return levels_.end(); }

  const TileAlphabet& alphabet() const { return alphabet_; }

 private:
  std::vector<NamedLevel> levels_;
  TileAlphabet alphabet_;
};

// VGLC text: one character per tile, one row per line. CR LF is accepted and a
// single trailing newline is stripped.
TileGrid parse_level(std::string_view text);

// Rows joined with '\n', no trailing newline.
std::string serialize_level(const TileGrid& grid);

// Reads and parses one file. The path "-" reads standard input.
TileGrid load_level(const std::filesystem::path& path);

// Names are file stems (or "stdin" for "-"). Stems that collide get a numeric
// suffix so that a path can be given twice.
LevelSet load_level_set(std::span<const std::filesystem::path> paths);

void save_level(const std::filesystem::path& path, const TileGrid& grid);

}  // namespace tilekl
