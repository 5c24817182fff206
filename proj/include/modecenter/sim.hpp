#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modecenter/registry.hpp"
#include "modecenter/stats.hpp"
#include "modecenter/testbeds.hpp"

namespace modecenter {

struct SimConfig {
  std::vector<TestbedId> testbeds;
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 200;
  std::vector<EstimatorSpec> estimators;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 0;  // 0 = default_threads()
  EstimatorOptions options;
  double max_failure_rate = 0.01;

  /// Desk-scale defaults: every test-bed, n in {100, 1000}, m = 200, all
  /// estimators with bootstrap alpha at B = 100.
  static SimConfig desk_scale();
  /// m = 1000, n in {100, 1000, 10000}, B = 200.
  static SimConfig full_scale();
};

/// One (test-bed, n) configuration.
struct SimCell {
  TestbedId testbed = TestbedId::Normal;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::map<std::string, double> mse;               // per estimator label
  std::map<std::string, std::size_t> failures;     // per estimator label
  std::optional<double> mean_beta;                 // KME only
  std::optional<double> mean_h;
  std::vector<std::uint64_t> sample_checksums;     // per replication
  bool operator==(const SimCell&) const = default;
};

/// A paired comparison of the KME ("self") against one competitor.
struct SimRow {
  TestbedId testbed = TestbedId::Normal;
  std::size_t n = 0;
  std::string self;
  std::string other;
  PairedComparison cmp;
  std::optional<double> mean_beta;
  std::optional<double> mean_h;

  std::string pair() const { return self + "_vs_" + other; }
  bool operator==(const SimRow&) const = default;
};

struct SimTable {
  std::vector<SimCell> cells;
  std::vector<SimRow> rows;
  bool operator==(const SimTable&) const = default;
};

/// FNV-1a over the bytes of the sample.
std::uint64_t sample_checksum(const std::vector<double>& sample);

/// Seed of replication `rep` of (tb, n): keyed by names, not positions.
std::uint64_t replication_seed(std::uint64_t master, TestbedId tb, std::size_t n, std::size_t rep);

/// Runs the study. Results do not depend on the thread count. Throws
/// NumericError when an estimator fails on more than max_failure_rate of
/// the replications of a configuration.
SimTable run_simulation(const SimConfig& cfg);

enum class SimFormat { Csv, Json };

void write_csv(const SimTable& table, std::ostream& os);
void write_json(const SimTable& table, std::ostream& os);
SimTable read_json(std::istream& is);

/// Writes to a file; I/O failures raise Error naming the path.
void emit(const SimTable& table, SimFormat format, const std::string& path);

}  // namespace modecenter
