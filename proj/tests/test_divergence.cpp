#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "tilekl/divergence.hpp"
#include "tilekl/error.hpp"
#include "tilekl/level_io.hpp"

using namespace tilekl;

namespace {

const std::filesystem::path kData = TILEKL_DATA_DIR;

PatternDistribution dist_of(const oracle::Rows& rows, FilterDims dims)
{
  return extract_distribution(parse_level(oracle::join(rows)), dims);
}

bool close_rel(double a, double b, double rel)
{
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) || a == b;
}

}  // namespace

TEST_CASE("smoothed_prob")
{
  // 1e-5 / (100.00001 * 1.00001), evaluated with 40-digit arithmetic.
  CHECK(close_rel(smoothed_prob(0, 100, 1e-5), 9.999899001010089899091009e-8, 1e-15));
  CHECK(smoothed_prob(1, 1, 1e-5) == doctest::Approx(1.0 / 1.00001).epsilon(1e-15));
  // (2100 + 1e-5) / ((2613 + 1e-5)(1 + 1e-5)), 40-digit reference.
  CHECK(close_rel(smoothed_prob(2100, 2613, 1e-5), 0.8036659020946187830366636, 1e-15));
}

TEST_CASE("kl_div of a distribution with itself is exactly zero")
{
  std::mt19937 gen(1);
  for (double eps : {1e-9, 1e-5, 0.1, 1.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = dist_of(oracle::random_rows(gen, 8, 8, "ABCD"), FilterDims(2, 2));
      CHECK(kl_div(d, d, eps) == 0.0);
      const auto r = fitness(d, d, DivergenceConfig{eps, FilterDims(2, 2), 0.3});
      CHECK(r.kl_p_q == 0.0);
      CHECK(r.kl_q_p == 0.0);
      CHECK(r.fitness == 0.0);
      CHECK_FALSE(std::signbit(r.fitness));
    }
  }
}

TEST_CASE("kl_div matches the extended-precision oracle")
{
  std::mt19937 gen(2024);
  const FilterDims dims(2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_rows(gen, 8, 8, "ABC");
    const auto b = oracle::random_rows(gen, 8, 8, "ABC");
    const double got = kl_div(dist_of(a, dims), dist_of(b, dims), 1e-5);
    const long double want = oracle::kl(oracle::count_windows(a, 2, 2), oracle::count_windows(b, 2, 2), 1e-5L);
    CHECK(std::abs(got - static_cast<double>(want)) <= 1e-9);
  }
}

TEST_CASE("fitness matches the oracle on random small instances")
{
  std::mt19937 gen(99);
  std::uniform_int_distribution<std::size_t> side(3, 10);
  std::uniform_int_distribution<std::size_t> fside(1, 3);
  std::uniform_int_distribution<int> nsym(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string symbols = std::string("ABCD").substr(0, nsym(gen));
    const auto a = oracle::random_rows(gen, side(gen), side(gen), symbols);
    const auto b = oracle::random_rows(gen, side(gen), side(gen), symbols);
    const std::size_t fw = fside(gen);
    const std::size_t fh = fside(gen);
    const double w = (trial % 5) / 4.0;
    const DivergenceConfig config{1e-5, FilterDims(fw, fh), w};
    const auto r = fitness(dist_of(a, config.dims), dist_of(b, config.dims), config);
    const auto ca = oracle::count_windows(a, fw, fh);
    const auto cb = oracle::count_windows(b, fw, fh);
    CHECK(std::abs(r.kl_p_q - static_cast<double>(oracle::kl(ca, cb, 1e-5L))) <= 1e-9);
    CHECK(std::abs(r.kl_q_p - static_cast<double>(oracle::kl(cb, ca, 1e-5L))) <= 1e-9);
    CHECK(std::abs(r.fitness - static_cast<double>(oracle::fitness(ca, cb, 1e-5L, w))) <= 1e-9);
  }
}

TEST_CASE("level 1-1 against an all-sky grid diverges")
{
  const auto p = extract_distribution(load_level(kData / "mario-1-1.txt"), FilterDims(2, 2));
  const auto q = extract_distribution(TileGrid(30, 14, '-'), FilterDims(2, 2));
  CHECK(kl_div(p, q, 1e-5) > 0.0);
}

TEST_CASE("weight extremes and linearity")
{
  std::mt19937 gen(8);
  const FilterDims dims(2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = dist_of(oracle::random_rows(gen, 7, 6, "ABC"), dims);
    const auto q = dist_of(oracle::random_rows(gen, 6, 7, "ABC"), dims);
    const auto f0 = fitness(p, q, {1e-5, dims, 0.0});
    const auto f1 = fitness(p, q, {1e-5, dims, 1.0});
    CHECK(f0.fitness == -f0.kl_q_p);
    CHECK(f1.fitness == -f1.kl_p_q);
    const double w = (trial + 1) / 101.0;
    const auto fw = fitness(p, q, {1e-5, dims, w});
    CHECK(fw.fitness == w * f1.fitness + (1.0 - w) * f0.fitness);

    const auto pq = fitness(p, q, {1e-5, dims, 0.5});
    const auto qp = fitness(q, p, {1e-5, dims, 0.5});
    CHECK(close_rel(pq.fitness, qp.fitness, 1e-12));
  }
}

TEST_CASE("errors")
{
  const auto a = extract_distribution(parse_level("AB\nBA"), FilterDims(1, 1));
  const auto b = extract_distribution(parse_level("AB\nBA"), FilterDims(2, 1));
  try {
    kl_div(a, b, 1e-5);
    FAIL("expected DimsMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimsMismatch);
  }
  try {
    kl_div(PatternDistribution(FilterDims(1, 1)), a, 1e-5);
    FAIL("expected EmptyDistribution");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDistribution);
  }
  CHECK_THROWS_AS((DivergenceConfig{0.0, FilterDims(1, 1), 0.5}.validate()), Error);
  CHECK_THROWS_AS((DivergenceConfig{1e-5, FilterDims(1, 1), 1.5}.validate()), Error);
  CHECK_NOTHROW((DivergenceConfig{1.0, FilterDims(1, 1), 0.0}.validate()));
}

TEST_CASE("contributions")
{
  std::mt19937 gen(4);
  const FilterDims dims(2, 2);
  SUBCASE("identical distributions contribute nothing")
  {
    const auto d = dist_of(oracle::random_rows(gen, 9, 9, "AB-"), dims);
    for (const auto& c : contributions(d, d, 1e-5)) CHECK(c.summand == 0.0);
  }
  SUBCASE("summands add up to kl_div")
  {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = dist_of(oracle::random_rows(gen, 4 + trial % 7, 5, "ABCD"), dims);
      const auto q = dist_of(oracle::random_rows(gen, 6, 3 + trial % 6, "ABCD"), dims);
      const auto report = contributions(p, q, 1e-5);
      CHECK(report.size() == p.distinct());
      double sum = 0.0;
      for (const auto& c : report) sum += c.summand;
      CHECK(close_rel(sum, kl_div(p, q, 1e-5), 1e-12));
      for (std::size_t i = 1; i < report.size(); ++i) CHECK(report[i - 1].summand >= report[i].summand);
    }
  }
  SUBCASE("removing the pipes surfaces pipe patterns")
  {
    const auto level = load_level(kData / "mario-1-1.txt");
    std::string cells = level.cells();
    std::replace_if(cells.begin(), cells.end(), [](char c) { return std::string("<>[]").find(c) != std::string::npos; }, '-');
    const auto p = extract_distribution(level, dims);
    const auto q = extract_distribution(TileGrid(level.width(), level.height(), cells), dims);
    const auto report = contributions(p, q, 1e-5);
    const auto is_pipe = [](const Contribution& c) { return c.pattern.cells.find_first_of("<>[]") != std::string::npos; };
    CHECK(is_pipe(report.front()));
    CHECK(std::count_if(report.begin(), report.begin() + 5, is_pipe) >= 4);
    const auto csv = contributions_csv(report, 3);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind("pattern_key,p_prime,q_prime,summand\n", 0) == 0);
  }
}
