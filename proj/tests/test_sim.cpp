#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "modecenter/error.hpp"
#include "modecenter/parallel.hpp"
#include "modecenter/sim.hpp"

using namespace modecenter;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.testbeds = {TestbedId::StudentT3, TestbedId::Outlier};
  cfg.sample_sizes = {40, 20};
  cfg.replications = 12;
  for (const char* name : {"kme", "mean", "median", "trimmed", "winsorized@0.1", "tukey", "andrews"}) {
    cfg.estimators.push_back(EstimatorSpec::parse(name));
  }
  cfg.options.bootstrap_resamples = 20;
  cfg.master_seed = 42;
  return cfg;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("mean-only study") {
  SimConfig cfg;
  cfg.testbeds = {TestbedId::Normal};
  cfg.sample_sizes = {100};
  cfg.replications = 50;
  cfg.estimators = {EstimatorSpec::parse("mean")};
  const SimTable t = run_simulation(cfg);
  REQUIRE(t.cells.size() == 1);
  const double v = t.cells[0].mse.at("mean");
  CHECK(v > 0.005);
  CHECK(v < 0.02);
  CHECK(t.rows.empty());
  std::ostringstream csv;
  write_csv(t, csv);
  CHECK(csv.str() == "testbed,n,pair,mse_ratio,win_prop,p_value,mean_beta,mean_h\n");
}

TEST_CASE("thread count does not change results") {
  SimConfig cfg = small_config();
  cfg.parallelism = 1;
  const SimTable one = run_simulation(cfg);
  cfg.parallelism = 8;
  const SimTable eight = run_simulation(cfg);
  CHECK(one == eight);
  cfg.master_seed = 43;
  CHECK_FALSE(run_simulation(cfg) == one);
}

TEST_CASE("table shape and serialization") {
  const SimConfig cfg = small_config();
  const SimTable t = run_simulation(cfg);
  CHECK(t.cells.size() == 4);
  CHECK(t.rows.size() == 4 * 6);
  // rows follow the test-bed order, then ascending n
  CHECK(t.rows.front().testbed == TestbedId::StudentT3);
  CHECK(t.rows.front().n == 20);
  CHECK(t.rows.back().testbed == TestbedId::Outlier);
  CHECK(t.rows.back().n == 40);
  for (const SimRow& r : t.rows) {
    CHECK(r.self == "kme");
    CHECK(r.mean_beta.has_value());
    CHECK(r.cmp.m == cfg.replications);
  }
  CHECK(t.rows[3].pair() == "kme_vs_winsorized@0.1");

  std::ostringstream csv;
  write_csv(t, csv);
  CHECK(count_lines(csv.str()) == 1 + t.rows.size());

  std::stringstream js;
  write_json(t, js);
  CHECK(read_json(js) == t);

  const auto dir = std::filesystem::temp_directory_path() / "modecenter_sim_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "table.json").string();
  emit(t, SimFormat::Json, path);
  std::ifstream in(path);
  CHECK(read_json(in) == t);
  try {
    emit(t, SimFormat::Csv, (dir / "missing" / "x.csv").string());
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("matched samples and seed keys") {
  const SimConfig cfg = small_config();
  const SimTable a = run_simulation(cfg);
  for (const SimCell& c : a.cells) {
    REQUIRE(c.sample_checksums.size() == cfg.replications);
    for (std::size_t r = 0; r < c.sample_checksums.size(); ++r) {
      Rng rng(replication_seed(cfg.master_seed, c.testbed, c.n, r));
      std::vector<double> x;
      sample_into(Testbed{c.testbed}, c.n, rng, x);
      CHECK(c.sample_checksums[r] == sample_checksum(x));
    }
  }

  SimConfig swapped = cfg;
  std::swap(swapped.testbeds[0], swapped.testbeds[1]);
  const SimTable b = run_simulation(swapped);
  for (const SimCell& cb : b.cells) {
    for (const SimCell& ca : a.cells) {
      if (ca.testbed == cb.testbed && ca.n == cb.n) CHECK(ca == cb);
    }
  }
  for (const SimRow& rb : b.rows) {
    for (const SimRow& ra : a.rows) {
      if (ra.testbed == rb.testbed && ra.n == rb.n && ra.other == rb.other) CHECK(ra == rb);
    }
  }
}

TEST_CASE("configuration checks") {
  SimConfig cfg = small_config();
  cfg.replications = 1;
  CHECK_THROWS_AS(run_simulation(cfg), ConfigError);
  cfg = small_config();
  cfg.sample_sizes = {5};
  CHECK_THROWS_AS(run_simulation(cfg), ConfigError);

  const SimConfig desk = SimConfig::desk_scale();
  CHECK(desk.replications == 200);
  CHECK(desk.sample_sizes == std::vector<std::size_t>{100, 1000});
  CHECK(desk.estimators.size() == 7);
  CHECK(desk.testbeds.size() == 9);
  CHECK(desk.options.bootstrap_resamples == 100);
  const SimConfig full = SimConfig::full_scale();
  CHECK(full.replications == 1000);
  CHECK(full.sample_sizes.back() == 10000);
}

TEST_CASE("checksums") {
  CHECK(sample_checksum({}) == 0xCBF29CE484222325ULL);
  CHECK(sample_checksum({1.0}) != sample_checksum({-1.0}));
  CHECK(replication_seed(1, TestbedId::Normal, 100, 0) != replication_seed(1, TestbedId::Normal, 100, 1));
  CHECK(replication_seed(1, TestbedId::Normal, 100, 0) != replication_seed(1, TestbedId::Laplace, 100, 0));
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 7, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(default_threads() >= 1);
}

TEST_CASE("tuned shape at large n") {
  // heavy tails favour beta < 1, light tails beta > 1; three master seeds
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SimConfig cfg;
    cfg.testbeds = {TestbedId::StudentT3, TestbedId::Normal, TestbedId::Outlier};
    cfg.sample_sizes = {10000};
    cfg.replications = 4;
    cfg.estimators = {EstimatorSpec::parse("kme")};
    cfg.master_seed = seed;
    const SimTable t = run_simulation(cfg);
    CAPTURE(seed);
    CHECK(*t.cells[0].mean_beta < 1.0);
    CHECK(*t.cells[1].mean_beta > 1.0);
    CHECK(*t.cells[2].mean_beta > 1.0);
  }
}
