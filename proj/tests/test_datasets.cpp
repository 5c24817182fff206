#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "modecenter/datasets.hpp"
#include "modecenter/sim.hpp"

using namespace modecenter;

TEST_CASE("Newcomb table") {
  const auto table = newcomb_table();
  CHECK(table.size() == 23);
  int total = 0;
  for (const ValueCount& vc : table) total += vc.count;
  CHECK(total == 66);
  CHECK(table.front().value == -44);
  CHECK(table.back().value == 40);
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].value > table[i - 1].value);
}

TEST_CASE("Newcomb expansion is pinned") {
  const auto x = newcomb_data();
  REQUIRE(x.size() == 66);
  CHECK(*std::min_element(x.begin(), x.end()) == -44.0);
  CHECK(*std::max_element(x.begin(), x.end()) == 40.0);
  CHECK(std::set<double>(x.begin(), x.end()).size() == 23);
  CHECK(std::accumulate(x.begin(), x.end(), 0.0) == 1730.0);
  double sq = 0.0;
  for (double v : x) sq += v * v;
  CHECK(sq == 52852.0);
  CHECK(std::count(x.begin(), x.end(), 28.0) == 7);
  CHECK(sample_checksum(x) == sample_checksum(newcomb_data()));
}

TEST_CASE("synthetic example") {
  CHECK(synthetic_example() == std::vector<double>{-2, -1, 0, 1, 2, 10, 11});
}
