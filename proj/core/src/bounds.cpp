#include "carnot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One 64-bit draw per tuple: the top bit decides inclusion, the low 53 bits
// give a weight in (0, 1].
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::size_t trial)
      : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial)))) {}

  // Returns 0 when the tuple is left out.
  double next_weight() {
    const std::uint64_t x = engine_();
    if ((x >> 63) == 0) return 0.0;
    constexpr std::uint64_t kMask = (std::uint64_t{1} << 53) - 1;
    return static_cast<double>((x & kMask) + 1) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

bool uniform_temperature(std::span<const TransitionChannel> channels, bool require_gap) {
  std::optional<double> ref;
  for (const auto& ch : channels) {
    if (require_gap && !(ch.delta_e > 0.0)) continue;
    if (ch.kind == ChannelKind::Inert) continue;
    const auto b = ranking_beta(ch);
    if (!b) return false;
    if (!ref) {
      ref = *b;
      continue;
    }
    const double scale = std::max(std::fabs(*ref), std::fabs(*b));
    if (!(std::fabs(*ref - *b) <= 1e-12 * scale)) return false;
  }
  return true;
}

std::string channel_string(const TransitionChannel& ch) {
  return "(" + std::to_string(ch.hi) + "," + std::to_string(ch.lo) + ")";
}

}  // namespace

std::string_view to_string(BoundRegime regime) {
  switch (regime) {
    case BoundRegime::ThermalLimit: return "THERMAL_LIMIT";
    case BoundRegime::Nonthermal: return "NONTHERMAL";
    case BoundRegime::Unit: return "UNIT";
  }
  return "UNKNOWN";
}

std::string_view to_string(BoundFailure failure) {
  switch (failure) {
    case BoundFailure::None: return "NONE";
    case BoundFailure::Inversion: return "INVERSION";
    case BoundFailure::Bidirectional: return "BIDIRECTIONAL";
    case BoundFailure::NoEligibleChannel: return "NO_ELIGIBLE_CHANNEL";
  }
  return "UNKNOWN";
}

BoundReport generalized_bound(const DiagonalReservoir& hot, const DiagonalReservoir& cold) {
  BoundReport report;
  report.eta_max = kNaN;
  report.temperature_ratio = kNaN;

  const auto hot_channels = enumerate_channels(hot);
  const auto cold_channels = enumerate_channels(cold);
  report.hot_role = classify_reservoir(hot_channels);
  report.cold_role = classify_reservoir(cold_channels);
  report.warnings = empty_level_warnings(hot_channels, "hot");
  for (auto& w : empty_level_warnings(cold_channels, "cold")) report.warnings.push_back(std::move(w));

  if (report.hot_role == ReservoirRole::WorkReservoir ||
      report.cold_role == ReservoirRole::WorkReservoir) {
    report.reason = BoundFailure::Inversion;
    report.diagnostic = std::string(report.hot_role == ReservoirRole::WorkReservoir ? "hot" : "cold") +
                        " reservoir is a WORK_RESERVOIR: population inversion across a nonzero gap";
    return report;
  }

  report.hot_channel = hottest_channel(hot_channels);
  report.cold_channel = coldest_channel(cold_channels);
  if (!report.hot_channel || !report.cold_channel) {
    report.reason = BoundFailure::NoEligibleChannel;
    report.diagnostic = !report.hot_channel
                            ? "hot reservoir has no eligible channel with a nonzero gap"
                            : "cold reservoir has no eligible channel";
    return report;
  }

  const TransitionChannel& h = *report.hot_channel;
  const TransitionChannel& c = *report.cold_channel;
  const double beta_h = *ranking_beta(h);
  const double beta_c = *ranking_beta(c);

  // ratio = T_C / T_H = beta_H / beta_C.
  double ratio;
  if (beta_c == kInf) {
    ratio = beta_h == kInf ? 1.0 : 0.0;
  } else if (beta_h == kInf) {
    ratio = kInf;
  } else if (beta_c == 0.0) {
    ratio = beta_h == 0.0 ? 1.0 : kInf;
  } else {
    ratio = (c.delta_e * h.log_ratio) / (h.delta_e * c.log_ratio);
  }
  report.temperature_ratio = ratio;

  if (ratio > 1.0) {
    report.reason = BoundFailure::Bidirectional;
    std::ostringstream os;
    os.precision(17);
    os << "coldest cold channel " << channel_string(c)
       << " is hotter than the hottest hot channel " << channel_string(h)
       << " (T_C/T_H = " << ratio << ")";
    report.diagnostic = os.str();
    return report;
  }

  report.applicable = true;
  report.eta_max = 1.0 - ratio;
  const bool thermal = (hot.gibbs_temperature() && cold.gibbs_temperature()) ||
                       (uniform_temperature(hot_channels, true) &&
                        uniform_temperature(cold_channels, false));
  if (report.eta_max == 1.0) {
    report.regime = BoundRegime::Unit;
  } else if (thermal) {
    report.regime = BoundRegime::ThermalLimit;
  } else {
    report.regime = BoundRegime::Nonthermal;
  }
  return report;
}

CouplingOperator saturating_engine(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                                   const BoundReport& report) {
  if (!report.applicable || !report.hot_channel || !report.cold_channel)
    throw HypothesisError("saturating_engine: bound report is not applicable (" +
                          std::string(to_string(report.reason)) + ")");
  const auto& h = *report.hot_channel;
  const auto& c = *report.cold_channel;
  const std::size_t m = h.hi;
  const std::size_t n = h.lo;

  // Preferred orientation: the cold side is excited (p = lo, q = hi).
  const CouplingIndex absorb{m, n, c.lo, c.hi};
  const CouplingIndex emit{m, n, c.hi, c.lo};
  for (const auto& idx : {absorb, emit}) {
    const double flux =
        hot[idx.m].population * cold[idx.p].population - hot[idx.n].population * cold[idx.q].population;
    if (flux > 0.0) {
      CouplingOperator engine(1.0);
      engine.add(idx, 1.0);
      return engine;
    }
  }
  throw HypothesisError("saturating_engine: q_hot <= 0 in both orientations of hot " +
                        channel_string(h) + " x cold " + channel_string(c) +
                        "; the flux factor does not favour extraction");
}

CouplingOperator random_engine(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                               std::uint64_t seed, std::size_t trial) {
  CouplingOperator engine(1.0);
  TrialStream stream(seed, trial);
  for (const auto& idx : canonical_tuples(hot, cold)) {
    const double w = stream.next_weight();
    if (w > 0.0) engine.add(idx, w);
  }
  return engine;
}

SweepSummary sweep_random_engines(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                                  std::size_t trials, std::uint64_t seed, double limit,
                                  double tolerance) {
  SweepSummary out;
  out.trials = trials;
  out.limit = limit;
  out.tolerance = tolerance;
  out.seed = seed;

  // Per-tuple heat per unit weight; lambda = 1.
  const auto tuples = canonical_tuples(hot, cold);
  std::vector<double> hot_unit(tuples.size());
  std::vector<double> cold_unit(tuples.size());
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    const auto& t = tuples[k];
    const double flux =
        hot[t.m].population * cold[t.p].population - hot[t.n].population * cold[t.q].population;
    hot_unit[k] = flux * (hot[t.m].energy - hot[t.n].energy);
    cold_unit[k] = flux * (cold[t.p].energy - cold[t.q].energy);
  }

  for (std::size_t trial = 0; trial < trials; ++trial) {
    TrialStream stream(seed, trial);
    double q_hot = 0.0;
    double q_cold = 0.0;
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      const double w = stream.next_weight();
      if (w == 0.0) continue;
      q_hot += w * hot_unit[k];
      q_cold += w * cold_unit[k];
    }
    if (!(q_hot > 0.0)) continue;
    const double eta = (q_hot + q_cold) / q_hot;
    ++out.applicable;
    if (!out.max_efficiency || eta > *out.max_efficiency) out.max_efficiency = eta;
    if (eta > limit + tolerance) ++out.violations;
  }
  return out;
}

SweepSummary engine_sweep_verify(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                                 std::size_t trials, std::uint64_t seed) {
  const auto bound = generalized_bound(hot, cold);
  if (!bound.applicable)
    throw HypothesisError("engine_sweep_verify: bound not applicable (" +
                          std::string(to_string(bound.reason)) + "): " + bound.diagnostic);
  return sweep_random_engines(hot, cold, trials, seed, bound.eta_max);
}

}  // namespace carnot
