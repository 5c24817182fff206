#include "modecenter/registry.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "modecenter/descriptive.hpp"
#include "modecenter/error.hpp"

namespace modecenter {
namespace {

constexpr std::array<EstimatorKind, 7> kAllEstimators = {
    EstimatorKind::Kme,        EstimatorKind::Mean,  EstimatorKind::Median,
    EstimatorKind::Trimmed,    EstimatorKind::Winsorized, EstimatorKind::Tukey,
    EstimatorKind::Andrews};

bool is_trim(EstimatorKind k) {
  return k == EstimatorKind::Trimmed || k == EstimatorKind::Winsorized;
}

}  // namespace

std::string_view estimator_name(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Kme:
      return "kme";
    case EstimatorKind::Mean:
      return "mean";
    case EstimatorKind::Median:
      return "median";
    case EstimatorKind::Trimmed:
      return "trimmed";
    case EstimatorKind::Winsorized:
      return "winsorized";
    case EstimatorKind::Tukey:
      return "tukey";
    case EstimatorKind::Andrews:
      return "andrews";
  }
  return "unknown";
}

std::string valid_estimator_names() {
  std::string out;
  for (EstimatorKind k : kAllEstimators) {
    if (!out.empty()) out += ", ";
    out += estimator_name(k);
  }
  return out;
}

EstimatorKind parse_estimator(std::string_view name) {
  for (EstimatorKind k : kAllEstimators) {
    if (estimator_name(k) == name) return k;
  }
  throw ConfigError("unknown estimator '" + std::string(name) +
                    "'; valid names: " + valid_estimator_names());
}

EstimatorSpec EstimatorSpec::parse(std::string_view text) {
  EstimatorSpec spec;
  const auto at = text.find('@');
  spec.kind = parse_estimator(text.substr(0, at));
  if (at != std::string_view::npos) {
    if (!is_trim(spec.kind)) {
      throw ConfigError("only trimmed and winsorized take a level: '" + std::string(text) + "'");
    }
    const std::string_view num = text.substr(at + 1);
    double a = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), a);
    if (ec != std::errc() || ptr != num.data() + num.size() || !(a >= 0.0 && a < 0.5)) {
      throw ConfigError("bad trimming level in '" + std::string(text) + "' (need [0, 0.5))");
    }
    spec.alpha = a;
  }
  return spec;
}

std::string EstimatorSpec::label() const {
  std::string s(estimator_name(kind));
  if (alpha) {
    std::ostringstream os;
    os << '@' << *alpha;
    s += os.str();
  }
  return s;
}

EstimateOutcome run_estimator(const EstimatorSpec& spec, std::span<const double> data,
                              const EstimatorOptions& opts, std::uint64_t seed) {
  EstimateOutcome out;
  switch (spec.kind) {
    case EstimatorKind::Kme: {
      KmeResult r = kme_tuned(data, opts.pilot, opts.tuner, opts.irw);
      out.estimate = r.estimate;
      out.beta = r.params.beta;
      out.h = r.params.h;
      out.iterations = r.trace.iterations;
      out.converged = r.trace.converged;
      out.kme = std::move(r);
      break;
    }
    case EstimatorKind::Mean:
      out.estimate = sample_mean(data);
      break;
    case EstimatorKind::Median:
      out.estimate = sample_median(data);
      break;
    case EstimatorKind::Trimmed:
    case EstimatorKind::Winsorized: {
      const TrimFlavor flavor =
          spec.kind == EstimatorKind::Trimmed ? TrimFlavor::Trimmed : TrimFlavor::Winsorized;
      TrimConfig cfg{spec.alpha.value_or(0.0), flavor};
      if (!spec.alpha) {
        cfg = bootstrap_alpha(data, flavor, opts.alpha_grid, opts.bootstrap_resamples, seed);
      }
      out.estimate = trim_estimate(data, cfg);
      out.alpha = cfg.alpha;
      break;
    }
    case EstimatorKind::Tukey:
    case EstimatorKind::Andrews: {
      const bool tukey = spec.kind == EstimatorKind::Tukey;
      IrwResult r = tukey ? tukey_biweight(data, opts.irw) : andrews_sine(data, opts.irw);
      out.estimate = r.estimate;
      try {
        out.h = (tukey ? kTukeyScale : kAndrewsScale) * madn(data);
      } catch (const ConfigError&) {
        // constant data: answered exactly, no bandwidth
      }
      out.iterations = r.trace.iterations;
      out.converged = r.trace.converged;
      out.trace = std::move(r.trace);
      break;
    }
  }
  if (!std::isfinite(out.estimate)) {
    throw NumericError("estimator " + spec.label() + " produced a non-finite estimate", 0.0);
  }
  return out;
}

}  // namespace modecenter
