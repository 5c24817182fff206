#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modecenter/cli.hpp"
#include "modecenter/datasets.hpp"
#include "modecenter/descriptive.hpp"
#include "modecenter/error.hpp"
#include "modecenter/registry.hpp"
#include "modecenter/sim.hpp"
#include "modecenter/variance.hpp"

namespace modecenter::cli {
namespace {

using ojson = nlohmann::ordered_json;

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson trace_json(const IrwTrace& t) {
  ojson j;
  j["iterates"] = t.iterates;
  j["weights_final"] = t.weights_final;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["isolated"] = t.isolated;
  if (!t.weights_history.empty()) j["weights_history"] = t.weights_history;
  return j;
}

struct EstimateArgs {
  std::string input;
  std::optional<std::string> column;
  std::string estimator = "kme";
  std::optional<double> alpha;
  bool adaptive_alpha = false;
  std::uint64_t seed = 1;
  bool trace = false;
  std::optional<double> pilot_bandwidth;
  std::size_t pilot_grid = PilotConfig{}.grid_size;
  std::optional<double> beta0;
  std::optional<double> h0;
  double tuner_tol = TunerConfig{}.tol;
  int tuner_max_evals = TunerConfig{}.max_evals;
  bool tuner_multistart = false;
  double epsilon = IrwConfig{}.epsilon;
  int max_iter = IrwConfig{}.max_iter;
  std::string init = "median";
  int bootstrap_resamples = 200;
};

struct CurveArgs {
  std::string testbed;
  std::string kernel = "bump";
  double beta = 8.0;
  double h_min = 1e-2;
  double h_max = 1e3;
  std::size_t points = 200;
  bool linear = false;
  std::string out = "-";
};

struct SimArgs {
  std::vector<std::string> testbeds;
  std::vector<std::size_t> sizes;
  std::optional<std::size_t> reps;
  std::vector<std::string> estimators;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format = "csv";
  bool full_scale = false;
  std::optional<int> bootstrap_resamples;
  unsigned threads = 0;
};

struct CaseArgs {
  bool text = false;
  bool multistart = false;
};

EstimatorOptions estimator_options(const EstimateArgs& a) {
  EstimatorOptions o;
  o.pilot.grid_size = a.pilot_grid;
  o.pilot.bandwidth = a.pilot_bandwidth;
  o.tuner.beta0 = a.beta0;
  o.tuner.h0 = a.h0;
  o.tuner.tol = a.tuner_tol;
  o.tuner.max_evals = a.tuner_max_evals;
  o.tuner.multistart = a.tuner_multistart;
  o.irw.epsilon = a.epsilon;
  o.irw.max_iter = a.max_iter;
  if (a.init == "median") {
    o.irw.init = IrwInit::Median;
  } else if (a.init == "densest") {
    o.irw.init = IrwInit::DensestPoint;
  } else {
    throw ConfigError("--irw-init must be 'median' or 'densest'");
  }
  o.bootstrap_resamples = a.bootstrap_resamples;
  return o;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  std::vector<double> data;
  if (a.input == "-") {
    data = read_values(std::cin, a.column, "<stdin>");
  } else {
    std::ifstream in(a.input);
    if (!in) throw DataError("cannot open input file '" + a.input + "'");
    data = read_values(in, a.column, a.input);
  }

  EstimatorSpec spec;
  spec.kind = parse_estimator(a.estimator);
  const bool trim = spec.kind == EstimatorKind::Trimmed || spec.kind == EstimatorKind::Winsorized;
  if (trim) {
    if (a.adaptive_alpha && a.alpha) throw ConfigError("--alpha and --adaptive-alpha are exclusive");
    if (!a.adaptive_alpha) spec.alpha = a.alpha.value_or(0.1);
    if (spec.alpha && !(*spec.alpha >= 0.0 && *spec.alpha < 0.5)) {
      throw ConfigError("--alpha must lie in [0, 0.5)");
    }
  } else if (a.alpha || a.adaptive_alpha) {
    throw ConfigError("--alpha/--adaptive-alpha apply only to trimmed and winsorized");
  }

  const EstimatorOptions opts = estimator_options(a);
  EstimatorOptions run_opts = opts;
  run_opts.irw.record_weights = a.trace;
  const EstimateOutcome r = run_estimator(spec, data, run_opts, a.seed);

  ojson j;
  j["estimate"] = r.estimate;
  j["estimator"] = std::string(estimator_name(spec.kind));
  j["beta"] = opt(r.beta);
  j["h"] = opt(r.h);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["alpha"] = opt(r.alpha);
  j["n"] = data.size();
  j["achieved_variance"] = r.kme ? ojson(r.kme->params.achieved_variance) : ojson(nullptr);
  j["warnings"] = r.kme ? r.kme->warnings : std::vector<std::string>{};
  if (a.trace) {
    if (r.kme) {
      j["trace"] = trace_json(r.kme->trace);
    } else if (r.trace) {
      j["trace"] = trace_json(*r.trace);
    } else {
      j["trace"] = nullptr;
    }
  }
  out << j.dump(2) << '\n';
  return kOk;
}

KernelShape parse_kernel(const std::string& name, double beta) {
  if (name == "bump") return KernelShape::bump(beta);
  if (name == "epanechnikov") return KernelShape::epanechnikov();
  if (name == "triweight") return KernelShape::triweight();
  if (name == "raised_cosine") return KernelShape::raised_cosine();
  throw ConfigError("unknown kernel '" + name +
                    "'; valid kernels: bump, epanechnikov, triweight, raised_cosine");
}

std::string csv_num(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  std::ostringstream os;
  os << std::setprecision(12) << *v;
  return os.str();
}

int cmd_variance_curve(const CurveArgs& a, std::ostream& out) {
  const TestbedId id = parse_testbed(a.testbed);
  if (!(a.beta > 0.0)) throw ConfigError("--beta must be positive");
  const KernelShape shape = parse_kernel(a.kernel, a.beta);
  const VarianceCurve curve =
      variance_curve(Testbed{id, 0.0}, shape, a.h_min, a.h_max, a.points, !a.linear);

  std::ofstream file;
  std::ostream* os = &out;
  if (a.out != "-") {
    file.open(a.out);
    if (!file) throw Error("cannot open '" + a.out + "' for writing");
    os = &file;
  }
  *os << "h,V,sigma2_ref,median_ref\n";
  for (std::size_t i = 0; i < curve.h_grid.size(); ++i) {
    *os << csv_num(curve.h_grid[i]) << ',' << csv_num(curve.values[i]) << ','
        << csv_num(curve.sigma2_ref) << ',' << csv_num(curve.median_ref) << '\n';
  }
  os->flush();
  if (!*os) throw Error("failed writing variance curve to '" + a.out + "'");
  return kOk;
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  SimConfig cfg = a.full_scale ? SimConfig::full_scale() : SimConfig::desk_scale();
  if (!a.testbeds.empty()) {
    cfg.testbeds.clear();
    for (const std::string& t : a.testbeds) cfg.testbeds.push_back(parse_testbed(t));
  }
  if (!a.sizes.empty()) cfg.sample_sizes = a.sizes;
  if (a.reps) cfg.replications = *a.reps;
  if (!a.estimators.empty()) {
    cfg.estimators.clear();
    for (const std::string& e : a.estimators) cfg.estimators.push_back(EstimatorSpec::parse(e));
  }
  if (a.bootstrap_resamples) cfg.options.bootstrap_resamples = *a.bootstrap_resamples;
  cfg.master_seed = a.seed;
  cfg.parallelism = a.threads;
  SimFormat format = SimFormat::Csv;
  if (a.format == "json") {
    format = SimFormat::Json;
  } else if (a.format != "csv") {
    throw ConfigError("--format must be csv or json");
  }

  const SimTable table = run_simulation(cfg);
  if (a.out == "-") {
    if (format == SimFormat::Csv) {
      write_csv(table, out);
    } else {
      write_json(table, out);
    }
  } else {
    emit(table, format, a.out);
  }
  return kOk;
}

int cmd_case_study(const CaseArgs& a, std::ostream& out) {
  const std::vector<double> data = newcomb_data();
  EstimatorOptions opts;
  opts.tuner.multistart = a.multistart;
  const KmeResult r = kme_tuned(data, opts.pilot, opts.tuner, opts.irw);
  const KernelProfile kernel = KernelProfile::make(KernelShape::bump(r.params.beta));
  const double alpha = 2.0 / 66.0;
  const double trimmed = trimmed_mean(data, alpha);

  ojson rows = ojson::array();
  std::size_t offset = 0;
  for (const ValueCount& vc : newcomb_table()) {
    const double unit = r.trace.weights_final.empty() ? 0.0 : r.trace.weights_final[offset];
    ojson row;
    row["value"] = vc.value;
    row["count"] = vc.count;
    row["unit_weight"] = unit;
    row["total_weight"] = unit * vc.count;
    row["density"] = kernel_density(data, kernel, r.params.h, vc.value);
    rows.push_back(std::move(row));
    offset += static_cast<std::size_t>(vc.count);
  }

  if (a.text) {
    out << "Newcomb speed-of-light data (n = " << data.size() << ")\n";
    out << std::setprecision(7) << "KME estimate " << r.estimate << "  beta " << r.params.beta
        << "  h " << r.params.h << "  iterations " << r.trace.iterations << '\n';
    out << "mean " << mean(data) << "  median " << median(data) << "  trimmed mean (alpha = 2/66) "
        << trimmed << "\n\n";
    out << std::setw(6) << "value" << std::setw(7) << "count" << std::setw(14) << "unit weight"
        << std::setw(14) << "total weight" << std::setw(14) << "density" << '\n';
    out << std::scientific << std::setprecision(5);
    for (const ojson& row : rows) {
      out << std::setw(6) << row["value"].get<int>() << std::setw(7) << row["count"].get<int>()
          << std::setw(14) << row["unit_weight"].get<double>() << std::setw(14)
          << row["total_weight"].get<double>() << std::setw(14) << row["density"].get<double>()
          << '\n';
    }
    out << std::defaultfloat;
    return kOk;
  }

  ojson j;
  j["dataset"] = "newcomb";
  j["n"] = data.size();
  j["estimate"] = r.estimate;
  j["beta"] = r.params.beta;
  j["h"] = r.params.h;
  j["achieved_variance"] = r.params.achieved_variance;
  j["iterations"] = r.trace.iterations;
  j["converged"] = r.trace.converged;
  j["mean"] = mean(data);
  j["median"] = median(data);
  j["trimmed_mean"] = {{"alpha", alpha}, {"value", trimmed}};
  j["table"] = std::move(rows);
  j["warnings"] = r.warnings;
  out << j.dump(2) << '\n';
  return kOk;
}

template <class F>
int guarded(std::ostream& err, const CLI::App* sub, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    if (sub != nullptr) err << sub->help();
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << " (residual " << e.residual() << ")\n";
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Centre-of-symmetry estimation with tuned kernel mode estimators", "modecenter"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate the centre of a sample");
  e->add_option("input", est.input, "Data file: one number per line, or CSV with --column ('-' = stdin)")
      ->required();
  e->add_option("--column", est.column, "CSV column holding the data");
  e->add_option("--estimator", est.estimator,
                "kme, mean, median, trimmed, winsorized, tukey or andrews")
      ->capture_default_str();
  e->add_option("--alpha", est.alpha, "Trimming level for trimmed/winsorized (default 0.1)");
  e->add_flag("--adaptive-alpha", est.adaptive_alpha, "Choose the trimming level by bootstrap");
  e->add_option("--bootstrap-resamples", est.bootstrap_resamples, "Bootstrap resamples")
      ->capture_default_str();
  e->add_option("--seed", est.seed, "Seed for the bootstrap")->capture_default_str();
  e->add_flag("--trace", est.trace, "Include the IRW trace in the output");
  e->add_option("--pilot-bandwidth", est.pilot_bandwidth, "Pilot KDE bandwidth g");
  e->add_option("--pilot-grid", est.pilot_grid, "Minimum pilot grid size")->capture_default_str();
  e->add_option("--beta0", est.beta0, "Tuner start beta (default 1)");
  e->add_option("--h0", est.h0, "Tuner start h (default MADN)");
  e->add_option("--tuner-tol", est.tuner_tol, "Simplex value-spread tolerance")
      ->capture_default_str();
  e->add_option("--tuner-max-evals", est.tuner_max_evals, "Objective evaluation budget")
      ->capture_default_str();
  e->add_flag("--tuner-multistart", est.tuner_multistart, "Also start from beta = 1/4 and 8");
  e->add_option("--epsilon", est.epsilon, "IRW tolerance factor (stop at |step| <= epsilon h)")
      ->capture_default_str();
  e->add_option("--max-iter", est.max_iter, "IRW iteration cap")->capture_default_str();
  e->add_option("--irw-init", est.init, "IRW start: median or densest")->capture_default_str();

  CurveArgs cur;
  auto* c = app.add_subcommand("variance-curve", "Tabulate V(h) for a test-bed density as CSV");
  c->add_option("--testbed", cur.testbed, "Test-bed id")->required();
  c->add_option("--kernel", cur.kernel, "bump, epanechnikov, triweight or raised_cosine")
      ->capture_default_str();
  c->add_option("--beta", cur.beta, "Bump-family shape")->capture_default_str();
  c->add_option("--h-min", cur.h_min, "Smallest h")->capture_default_str();
  c->add_option("--h-max", cur.h_max, "Largest h")->capture_default_str();
  c->add_option("--points", cur.points, "Grid points")->capture_default_str();
  c->add_flag("--linear", cur.linear, "Linear instead of logarithmic spacing");
  c->add_option("--out", cur.out, "Output path ('-' = stdout)")->capture_default_str();

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo comparison of the KME with competitors");
  s->add_option("--testbeds", sim.testbeds, "Comma-separated test-bed ids (default all)")
      ->delimiter(',');
  s->add_option("--sizes", sim.sizes, "Comma-separated sample sizes (default 100,1000)")
      ->delimiter(',');
  s->add_option("--reps", sim.reps, "Replications per configuration (default 200)");
  s->add_option("--estimators", sim.estimators,
                "Comma-separated estimators; trimmed@0.1 fixes the level (default all)")
      ->delimiter(',');
  s->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  s->add_option("--out", sim.out, "Output path ('-' = stdout)")->capture_default_str();
  s->add_option("--format", sim.format, "csv or json")->capture_default_str();
  s->add_flag("--full-scale", sim.full_scale, "m = 1000, n up to 10^4 (hours of compute)");
  s->add_option("--bootstrap-resamples", sim.bootstrap_resamples,
                "Bootstrap resamples for adaptive trimming (default 100, 200 at full scale)");
  s->add_option("--threads", sim.threads, "Worker threads (0 = all, capped by MODECENTER_THREADS)")
      ->capture_default_str();

  CaseArgs cs;
  auto* k = app.add_subcommand("case-study", "Newcomb speed-of-light case study");
  k->add_flag("--text", cs.text, "Plain-text table instead of JSON");
  k->add_flag("--tuner-multistart", cs.multistart, "Also start the tuner from beta = 1/4 and 8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kUsage;
  }

  if (e->parsed()) return guarded(err, e, [&] { return cmd_estimate(est, out); });
  if (c->parsed()) return guarded(err, c, [&] { return cmd_variance_curve(cur, out); });
  if (s->parsed()) return guarded(err, s, [&] { return cmd_simulate(sim, out); });
  if (k->parsed()) return guarded(err, k, [&] { return cmd_case_study(cs, out); });
  err << app.help();
  return kUsage;
}

}  // namespace modecenter::cli
