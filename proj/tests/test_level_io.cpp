#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracle.hpp"
#include "tilekl/error.hpp"
#include "tilekl/level_io.hpp"

using namespace tilekl;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TILEKL_DATA_DIR;

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ErrorCode code_of(auto&& fn)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("parse_level reads rows and columns")
{
  const auto g = parse_level("XX\nXX");
  CHECK(g.width() == 2);
  CHECK(g.height() == 2);
  CHECK(g.cells() == "XXXX");

  const auto h = parse_level("ab-\ncde\n");
  CHECK(h.width() == 3);
  CHECK(h.height() == 2);
  CHECK(h.at(2, 0) == '-');
  CHECK(h.at(0, 1) == 'c');
}

TEST_CASE("parse_level errors")
{
  CHECK(code_of([] { parse_level("XX\nX"); }) == ErrorCode::RaggedRows);
  CHECK(code_of([] { parse_level(""); }) == ErrorCode::EmptyInput);
  CHECK(code_of([] { parse_level("\n"); }) == ErrorCode::EmptyInput);
  CHECK(code_of([] { parse_level("XX\n\nXX"); }) == ErrorCode::RaggedRows);
  CHECK(code_of([] { parse_level("X\tX"); }) == ErrorCode::InvalidCharacter);
}

TEST_CASE("CR LF is normalised")
{
  CHECK(parse_level("ab\r\ncd\r\n") == parse_level("ab\ncd"));
}

TEST_CASE("serialize_level")
{
  CHECK(serialize_level(parse_level("XX\nXX")) == "XX\nXX");
  CHECK(serialize_level(TileGrid(1, 1, '-')) == "-");
}

TEST_CASE("bundled level 1-1 is 202 x 14 and round-trips")
{
  const auto text = slurp(kData / "mario-1-1.txt");
  const auto g = load_level(kData / "mario-1-1.txt");
  CHECK(g.height() == 14);
  CHECK(g.width() == 202);
  std::string expected = text;
  if (!expected.empty() && expected.back() == '\n') expected.pop_back();
  CHECK(serialize_level(g) == expected);
}

TEST_CASE("round trip and alphabet closure on random grids")
{
  std::mt19937 gen(7);
  const std::string printable = "X-S?QE<>[]o#.,\"' ";
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> side(1, 12);
    const auto rows = oracle::random_rows(gen, side(gen), side(gen), printable.substr(0, 1 + trial % printable.size()));
    const auto g = parse_level(oracle::join(rows));
    REQUIRE(parse_level(serialize_level(g)) == g);

    std::string distinct;
    for (const auto& r : rows) {
      for (char c : r) {
        if (distinct.find(c) == std::string::npos) distinct.push_back(c);
      }
    }
    CHECK(g.alphabet().symbols() == distinct);
  }
}

TEST_CASE("load_level_set")
{
  SUBCASE("level 1-1 covers the Mario tile types it uses")
  {
    const std::vector<fs::path> paths{kData / "mario-1-1.txt"};
    const auto set = load_level_set(paths);
    REQUIRE(set.size() == 1);
    CHECK(set[0].name == "mario-1-1");
    for (char c : std::string("X-SQ?E<>[]")) CHECK(set.alphabet().contains(c));
  }
  SUBCASE("empty list")
  {
    CHECK(code_of([] { load_level_set(std::vector<fs::path>{}); }) == ErrorCode::EmptyInput);
  }
  SUBCASE("duplicates under different names")
  {
    const auto dir = fs::temp_directory_path() / "tilekl_level_io";
    fs::create_directories(dir);
    save_level(dir / "a.txt", parse_level("ab\nba"));
    save_level(dir / "a_copy.txt", parse_level("ab\nba"));
    const std::vector<fs::path> paths{dir / "a.txt", dir / "a_copy.txt", dir / "a.txt"};
    const auto set = load_level_set(paths);
    CHECK(set.size() == 3);
    CHECK(set[0].name == "a");
    CHECK(set[1].name == "a_copy");
    CHECK(set[2].name == "a#2");
    CHECK(set.alphabet().symbols() == "ab");
  }
  SUBCASE("unreadable and malformed files name the path")
  {
    const auto dir = fs::temp_directory_path() / "tilekl_level_io";
    fs::create_directories(dir);
    std::ofstream(dir / "bad.txt") << "XX\nX\n";
    try {
      const std::vector<fs::path> paths{dir / "bad.txt"};
      load_level_set(paths);
      FAIL("expected RaggedRows");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RaggedRows);
      CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
    }
    CHECK(code_of([&] { load_level(dir / "missing.txt"); }) == ErrorCode::IoError);
  }
}

TEST_CASE("alphabet keeps first-occurrence order and names")
{
  TileAlphabet a("ba");
  CHECK_FALSE(a.insert('a'));
  CHECK(a.insert('c'));
  CHECK(a.symbols() == "bac");
  const auto mario = mario_alphabet();
  CHECK(mario.size() == 11);
  CHECK(mario.symbols() == "XS-?QE<>[]o");
  CHECK(mario.name('o') == "Coin");
}
