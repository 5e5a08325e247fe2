#include "tilekl/level_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "tilekl/error.hpp"

namespace tilekl {

namespace {

bool printable(char c)
{
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x20 && u < 0x7f;
}

std::string read_all(std::istream& in)
{
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TileAlphabet::TileAlphabet(std::string_view symbols)
{
  for (char c : symbols) insert(c);
}

bool TileAlphabet::insert(char symbol)
{
  if (contains(symbol)) return false;
  symbols_.push_back(symbol);
  return true;
}

void TileAlphabet::merge(const TileAlphabet& other)
{
  for (char c : other.symbols_) insert(c);
  for (const auto& [c, n] : other.names_) names_.try_emplace(c, n);
}

bool TileAlphabet::contains(char symbol) const
{
  return symbols_.find(symbol) != std::string::npos;
}

void TileAlphabet::set_name(char symbol, std::string name)
{
  insert(symbol);
  names_[symbol] = std::move(name);
}

std::string TileAlphabet::name(char symbol) const
{
  auto it = names_.find(symbol);
  return it == names_.end() ? std::string() : it->second;
}

TileAlphabet mario_alphabet()
{
  TileAlphabet a;
  a.set_name('X', "Solid/Ground");
  a.set_name('S', "Breakable");
  a.set_name('-', "Empty (passable)");
  a.set_name('?', "Full question block");
  a.set_name('Q', "Empty question block");
  a.set_name('E', "Enemy");
  a.set_name('<', "Top-left pipe");
  a.set_name('>', "Top-right pipe");
  a.set_name('[', "Left pipe");
  a.set_name(']', "Right pipe");
  a.set_name('o', "Coin");
  return a;
}

TileGrid::TileGrid(std::size_t width, std::size_t height, char fill)
    : TileGrid(width, height, std::string(width * height, fill))
{
}

TileGrid::TileGrid(std::size_t width, std::size_t height, std::string cells)
    : width_(width), height_(height), cells_(std::move(cells))
{
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::EmptyInput, "grid must be at least 1x1");
  }
  if (cells_.size() != width * height) {
    throw Error(ErrorCode::InvalidArgument, "cell count does not match grid dimensions");
  }
}

TileAlphabet TileGrid::alphabet() const
{
  return TileAlphabet(cells_);
}

TileGrid TileGrid::columns(std::size_t x0, std::size_t w) const
{
  if (w == 0 || x0 + w > width_) {
    throw Error(ErrorCode::InvalidArgument, "column slice outside grid");
  }
  std::string cells;
  cells.reserve(w * height_);
  for (std::size_t y = 0; y < height_; ++y) cells.append(row(y).substr(x0, w));
  return TileGrid(w, height_, std::move(cells));
}

void LevelSet::add(std::string name, TileGrid grid)
{
  for (const auto& l : levels_) {
    if (l.name == name) throw Error(ErrorCode::InvalidArgument, "duplicate level name: " + name);
  }
  alphabet_.merge(grid.alphabet());
  levels_.push_back({std::move(name), std::move(grid)});
}

TileGrid parse_level(std::string_view text)
{
  std::string normalized;
  normalized.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    normalized.push_back(text[i]);
  }
  if (!normalized.empty() && normalized.back() == '\n') normalized.pop_back();
  if (normalized.empty()) throw Error(ErrorCode::EmptyInput, "level text is empty");

  std::size_t width = 0;
  std::size_t height = 0;
  std::string cells;
  cells.reserve(normalized.size());
  std::size_t start = 0;
  while (true) {
    const std::size_t end = normalized.find('\n', start);
    const std::string_view line =
        std::string_view(normalized).substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (height == 0) {
      width = line.size();
    } else if (line.size() != width) {
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(height + 1) + " has " +
                                             std::to_string(line.size()) + " tiles, expected " +
                                             std::to_string(width));
    }
    for (std::size_t x = 0; x < line.size(); ++x) {
      if (!printable(line[x])) {
        throw Error(ErrorCode::InvalidCharacter,
                    "non-printable character at row " + std::to_string(height + 1) + ", column " +
                        std::to_string(x + 1));
      }
    }
    cells.append(line);
    ++height;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (width == 0) throw Error(ErrorCode::RaggedRows, "first row is empty");
  return TileGrid(width, height, std::move(cells));
}

std::string serialize_level(const TileGrid& grid)
{
  std::string out;
  out.reserve(grid.size() + grid.height());
  for (std::size_t y = 0; y < grid.height(); ++y) {
    if (y > 0) out.push_back('\n');
    out.append(grid.row(y));
  }
  return out;
}

TileGrid load_level(const std::filesystem::path& path)
{
  std::string text;
  if (path == "-") {
    text = read_all(std::cin);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    text = read_all(in);
    if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + path.string());
  }
  try {
    return parse_level(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

LevelSet load_level_set(std::span<const std::filesystem::path> paths)
{
  if (paths.empty()) throw Error(ErrorCode::EmptyInput, "no level files given");
  LevelSet set;
  for (const auto& path : paths) {
    const std::string stem = path == "-" ? std::string("stdin") : path.stem().string();
    std::string name = stem;
    for (int k = 2; std::any_of(set.begin(), set.end(), [&](const NamedLevel& l) { return l.name == name; }); ++k) {
      name = stem + "#" + std::to_string(k);
    }
    set.add(std::move(name), load_level(path));
  }
  return set;
}

void save_level(const std::filesystem::path& path, const TileGrid& grid)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << serialize_level(grid) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace tilekl
