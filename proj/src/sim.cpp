#include "modecenter/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modecenter/error.hpp"
#include "modecenter/parallel.hpp"
#include "modecenter/rng.hpp"

namespace modecenter {
namespace {

using json = nlohmann::json;

struct RepResult {
  std::vector<std::optional<double>> estimates;  // per estimator
  std::optional<double> beta;
  std::optional<double> h;
  std::uint64_t checksum = 0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> json_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

SimConfig SimConfig::desk_scale() {
  SimConfig cfg;
  cfg.testbeds.assign(kAllTestbeds.begin(), kAllTestbeds.end());
  cfg.sample_sizes = {100, 1000};
  cfg.replications = 200;
  for (const char* name : {"kme", "mean", "median", "trimmed", "winsorized", "tukey", "andrews"}) {
    cfg.estimators.push_back(EstimatorSpec::parse(name));
  }
  cfg.options.bootstrap_resamples = 100;
  return cfg;
}

SimConfig SimConfig::full_scale() {
  SimConfig cfg = desk_scale();
  cfg.sample_sizes = {100, 1000, 10000};
  cfg.replications = 1000;
  cfg.options.bootstrap_resamples = 200;
  return cfg;
}

std::uint64_t sample_checksum(const std::vector<double>& sample) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(sample.data());
  for (std::size_t i = 0; i < sample.size() * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t replication_seed(std::uint64_t master, TestbedId tb, std::size_t n, std::size_t rep) {
  std::uint64_t s = derive_seed(master, testbed_name(tb));
  s = derive_seed(s, static_cast<std::uint64_t>(n));
  return derive_seed(s, static_cast<std::uint64_t>(rep));
}

SimTable run_simulation(const SimConfig& cfg) {
  if (cfg.replications < 2) throw ConfigError("simulation needs at least 2 replications");
  for (std::size_t n : cfg.sample_sizes) {
    if (n < 10) throw ConfigError("simulation sample sizes must be >= 10");
  }
  std::vector<std::size_t> sizes = cfg.sample_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  struct CellKey {
    TestbedId tb;
    std::size_t n;
  };
  std::vector<CellKey> keys;
  for (TestbedId tb : cfg.testbeds) {
    for (std::size_t n : sizes) keys.push_back({tb, n});
  }
  const std::size_t m = cfg.replications;
  const std::size_t E = cfg.estimators.size();
  std::vector<RepResult> results(keys.size() * m);

  parallel_for(results.size(), cfg.parallelism, [&](std::size_t task) {
    const CellKey& key = keys[task / m];
    const std::size_t rep = task % m;
    const std::uint64_t seed = replication_seed(cfg.master_seed, key.tb, key.n, rep);
    Rng rng(seed);
    std::vector<double> sample;
    sample_into(Testbed{key.tb, 0.0}, key.n, rng, sample);
    RepResult& out = results[task];
    out.checksum = sample_checksum(sample);
    out.estimates.resize(E);
    const std::span<const double> view(sample);
    for (std::size_t e = 0; e < E; ++e) {
      const EstimatorSpec& spec = cfg.estimators[e];
      try {
        EstimateOutcome r =
            run_estimator(spec, view, cfg.options, derive_seed(seed, "estimator/" + spec.label()));
        out.estimates[e] = r.estimate;
        if (spec.kind == EstimatorKind::Kme && !out.beta) {
          out.beta = r.beta;
          out.h = r.h;
        }
      } catch (const Error&) {
        // counted as a failure below
      }
    }
    if (sample_checksum(sample) != out.checksum) {
      throw Error("simulation: an estimator modified its input sample");
    }
  });

  const auto kme_it = std::find_if(cfg.estimators.begin(), cfg.estimators.end(),
                                   [](const EstimatorSpec& s) { return s.kind == EstimatorKind::Kme; });
  const std::size_t kme = static_cast<std::size_t>(kme_it - cfg.estimators.begin());

  SimTable table;
  for (std::size_t c = 0; c < keys.size(); ++c) {
    SimCell cell;
    cell.testbed = keys[c].tb;
    cell.n = keys[c].n;
    cell.replications = m;
    const RepResult* reps = &results[c * m];
    for (std::size_t r = 0; r < m; ++r) cell.sample_checksums.push_back(reps[r].checksum);

    for (std::size_t e = 0; e < E; ++e) {
      const std::string label = cfg.estimators[e].label();
      std::vector<double> ok;
      for (std::size_t r = 0; r < m; ++r) {
        if (reps[r].estimates[e]) ok.push_back(*reps[r].estimates[e]);
      }
      const std::size_t failed = m - ok.size();
      cell.failures[label] = failed;
      if (static_cast<double>(failed) > cfg.max_failure_rate * static_cast<double>(m)) {
        std::ostringstream os;
        os << "simulation: estimator " << label << " failed on " << failed << " of " << m
           << " replications for " << testbed_name(cell.testbed) << ", n = " << cell.n;
        throw NumericError(os.str(), static_cast<double>(failed) / static_cast<double>(m));
      }
      if (!ok.empty()) cell.mse[label] = mse(ok, 0.0);
    }

    if (kme < E) {
      double sb = 0.0, sh = 0.0;
      std::size_t cnt = 0;
      for (std::size_t r = 0; r < m; ++r) {
        if (reps[r].beta && reps[r].h) {
          sb += *reps[r].beta;
          sh += *reps[r].h;
          ++cnt;
        }
      }
      if (cnt > 0) {
        cell.mean_beta = sb / static_cast<double>(cnt);
        cell.mean_h = sh / static_cast<double>(cnt);
      }
      for (std::size_t e = 0; e < E; ++e) {
        if (e == kme) continue;
        std::vector<double> a, b;
        for (std::size_t r = 0; r < m; ++r) {
          if (reps[r].estimates[kme] && reps[r].estimates[e]) {
            a.push_back(*reps[r].estimates[kme]);
            b.push_back(*reps[r].estimates[e]);
          }
        }
        if (a.empty()) continue;
        SimRow row;
        row.testbed = cell.testbed;
        row.n = cell.n;
        row.self = cfg.estimators[kme].label();
        row.other = cfg.estimators[e].label();
        row.cmp = compare(a, b, 0.0);
        row.mean_beta = cell.mean_beta;
        row.mean_h = cell.mean_h;
        table.rows.push_back(std::move(row));
      }
    }
    table.cells.push_back(std::move(cell));
  }
  return table;
}

void write_csv(const SimTable& table, std::ostream& os) {
  os << "testbed,n,pair,mse_ratio,win_prop,p_value,mean_beta,mean_h\n";
  for (const SimRow& r : table.rows) {
    os << testbed_name(r.testbed) << ',' << r.n << ',' << r.pair() << ',' << fmt(r.cmp.mse_ratio)
       << ',' << fmt(r.cmp.win_proportion) << ',' << fmt(r.cmp.p_value) << ','
       << fmt(r.mean_beta) << ',' << fmt(r.mean_h) << '\n';
  }
}

void write_json(const SimTable& table, std::ostream& os) {
  json j;
  j["cells"] = json::array();
  for (const SimCell& c : table.cells) {
    json jc;
    jc["testbed"] = testbed_name(c.testbed);
    jc["n"] = c.n;
    jc["replications"] = c.replications;
    jc["mse"] = c.mse;
    jc["failures"] = c.failures;
    jc["mean_beta"] = opt_json(c.mean_beta);
    jc["mean_h"] = opt_json(c.mean_h);
    jc["sample_checksums"] = c.sample_checksums;
    j["cells"].push_back(std::move(jc));
  }
  j["rows"] = json::array();
  for (const SimRow& r : table.rows) {
    json jr;
    jr["testbed"] = testbed_name(r.testbed);
    jr["n"] = r.n;
    jr["self"] = r.self;
    jr["other"] = r.other;
    jr["mse_ratio"] = r.cmp.mse_ratio;
    jr["win_prop"] = r.cmp.win_proportion;
    jr["p_value"] = r.cmp.p_value;
    jr["m"] = r.cmp.m;
    jr["mean_beta"] = opt_json(r.mean_beta);
    jr["mean_h"] = opt_json(r.mean_h);
    j["rows"].push_back(std::move(jr));
  }
  os << j.dump(2) << '\n';
}

SimTable read_json(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError(std::string("simulation JSON: ") + e.what());
  }
  SimTable t;
  try {
    for (const json& jc : j.at("cells")) {
      SimCell c;
      c.testbed = parse_testbed(jc.at("testbed").get<std::string>());
      c.n = jc.at("n").get<std::size_t>();
      c.replications = jc.at("replications").get<std::size_t>();
      c.mse = jc.at("mse").get<std::map<std::string, double>>();
      c.failures = jc.at("failures").get<std::map<std::string, std::size_t>>();
      c.mean_beta = json_opt(jc.at("mean_beta"));
      c.mean_h = json_opt(jc.at("mean_h"));
      c.sample_checksums = jc.at("sample_checksums").get<std::vector<std::uint64_t>>();
      t.cells.push_back(std::move(c));
    }
    for (const json& jr : j.at("rows")) {
      SimRow r;
      r.testbed = parse_testbed(jr.at("testbed").get<std::string>());
      r.n = jr.at("n").get<std::size_t>();
      r.self = jr.at("self").get<std::string>();
      r.other = jr.at("other").get<std::string>();
      r.cmp.mse_ratio = jr.at("mse_ratio").get<double>();
      r.cmp.win_proportion = jr.at("win_prop").get<double>();
      r.cmp.p_value = jr.at("p_value").get<double>();
      r.cmp.m = jr.at("m").get<std::size_t>();
      r.mean_beta = json_opt(jr.at("mean_beta"));
      r.mean_h = json_opt(jr.at("mean_h"));
      t.rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("simulation JSON: ") + e.what());
  }
  return t;
}

void emit(const SimTable& table, SimFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  if (format == SimFormat::Csv) {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace modecenter
