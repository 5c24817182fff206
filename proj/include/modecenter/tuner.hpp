#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "modecenter/density.hpp"
#include "modecenter/pilot.hpp"
#include "modecenter/variance.hpp"

namespace modecenter {

struct NelderMeadOptions {
  double tol = 1e-6;           // relative spread of the simplex values
  int max_evals = 400;
  double initial_step = 0.7;   // added to each coordinate of the start vertex
  std::vector<double> steps;   // per-coordinate steps; overrides initial_step when set
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_history;  // best vertex value after each iteration
};

/// Downhill simplex with reflection, expansion, contraction and shrink
/// coefficients (1, 2, 1/2, 1/2). Stops when
/// 2 (f_worst - f_best) <= tol (|f_worst| + |f_best|) + 1e-20 or after
/// max_evals evaluations. Non-finite objective values count as +infinity;
/// a non-finite value at the start vertex throws NumericError.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& opts = {});

struct TunerConfig {
  std::optional<double> beta0;  // default 1
  std::optional<double> h0;     // default MADN of the data
  double tol = 1e-6;
  int max_evals = 400;
  bool multistart = false;      // also start from beta = 1/4 and beta = 8
  double beta_step = 0.5;       // initial simplex step in beta, relative to the start beta
  double h_step = 0.1;          // initial simplex step in h, relative to the start h
  double beta_min = 1e-3;
  double beta_max = 1e3;
  int quad_nodes = kDefaultPanelNodes;
};

struct TunedParams {
  double beta = 1.0;
  double h = 1.0;
  double achieved_variance = 0.0;
  int evaluations = 0;
  bool converged = false;
  double start_beta = 1.0;
  double start_h = 1.0;
  bool start_adjusted = false;  // default h moved up to reach an admissible start
  std::vector<double> best_history;
};

/// Minimizes (beta, h) -> V_beta(h) against the pilot, starting from
/// (beta0, h0). The search runs in (beta, h / h0) so it is scale equivariant;
/// beta outside [beta_min, beta_max], h outside (0, h_max] and parameters
/// with E2 >= 0 (no peak at the centre) get +inf. An inadmissible start has
/// its h doubled until admissible.
TunedParams optimize_params(const PilotDensity& pilot, std::span<const double> data,
                            const TunerConfig& cfg = {});

/// Same search against an arbitrary centred density (e.g. a true test-bed
/// density) with an explicit start bandwidth and search bound.
TunedParams optimize_params(const CenteredDensity& f0, double h_start, double h_max,
                            const TunerConfig& cfg = {});

}  // namespace modecenter
