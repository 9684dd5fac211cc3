#pragma once

// Efficiency bound for engines between two nonthermal stationary reservoirs:
//   eta <= 1 - min(T_cold channel) / max(T_hot channel),
// evaluated from the extremal channels' (gap, log-population-ratio) pairs so
// that zero and infinite effective temperatures need no division by zero.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/decomposition.hpp"
#include "carnot/engine.hpp"
#include "carnot/reservoir.hpp"

namespace carnot {

enum class BoundRegime { ThermalLimit, Nonthermal, Unit };

enum class BoundFailure { None, Inversion, Bidirectional, NoEligibleChannel };

std::string_view to_string(BoundRegime regime);
std::string_view to_string(BoundFailure failure);

struct BoundReport {
  bool applicable = false;
  BoundFailure reason = BoundFailure::None;
  std::string diagnostic;
  /// In [0, 1] when applicable, NaN otherwise.
  double eta_max = 0.0;
  /// T_C(min) / T_H(max) as computed from the extremal channels.
  double temperature_ratio = 0.0;
  BoundRegime regime = BoundRegime::Nonthermal;
  std::optional<TransitionChannel> hot_channel;
  std::optional<TransitionChannel> cold_channel;
  ReservoirRole hot_role = ReservoirRole::HeatReservoir;
  ReservoirRole cold_role = ReservoirRole::HeatReservoir;
  std::vector<std::string> warnings;
};

/// Never throws on physics grounds: failed hypotheses come back as
/// applicable = false with a reason and diagnostic.
BoundReport generalized_bound(const DiagonalReservoir& hot, const DiagonalReservoir& cold);

/// One-tuple engine joining the extremal hot channel (m = hi, n = lo) with the
/// extremal cold channel, oriented so that q_hot > 0; weight 1, lambda 1.
/// Throws HypothesisError if the report is not applicable or if neither
/// orientation gives a strictly positive flux factor.
CouplingOperator saturating_engine(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                                   const BoundReport& report);

struct SweepSummary {
  std::size_t trials = 0;
  /// Trials whose engine extracted heat from the hot side (q_hot > 0).
  std::size_t applicable = 0;
  std::optional<double> max_efficiency;
  std::size_t violations = 0;
  double limit = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
};

/// Random engine for one trial: each canonical tuple is included with
/// probability 1/2 with a weight uniform in (0, 1]; lambda = 1. The stream is
/// a pure function of (seed, trial).
CouplingOperator random_engine(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                               std::uint64_t seed, std::size_t trial);

/// Evaluates `trials` random engines and counts efficiencies above
/// limit + tolerance.
SweepSummary sweep_random_engines(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                                  std::size_t trials, std::uint64_t seed, double limit,
                                  double tolerance = 1e-10);

/// Sweep against the generalized bound. Throws HypothesisError when the bound
/// is not applicable.
SweepSummary engine_sweep_verify(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                                 std::size_t trials, std::uint64_t seed);

}  // namespace carnot
