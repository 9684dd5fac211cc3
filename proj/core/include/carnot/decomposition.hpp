#pragma once

// Two-level decomposition of a diagonal reservoir. Every unordered pair of
// levels is a sub-reservoir with an effective inverse temperature
//   beta = ln(p_lo / p_hi) / (E_hi - E_lo),
// so that p_hi / p_lo = exp(-beta * (E_hi - E_lo)).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/reservoir.hpp"

namespace carnot {

enum class ChannelKind {
  PositiveTemp,
  NegativeTemp,  // population inversion across a nonzero gap
  ZeroTemp,      // degenerate levels, unequal populations
  Inert,         // degenerate levels, equal populations
  InfiniteTemp,  // equal populations, distinct energies
  Undefined,     // at least one empty level
};

std::string_view to_string(ChannelKind kind);

struct TransitionChannel {
  std::size_t hi = 0;
  std::size_t lo = 0;
  double delta_e = 0.0;  // E_hi - E_lo; exactly 0 inside a degenerate block
  double pop_hi = 0.0;
  double pop_lo = 0.0;
  double log_ratio = 0.0;  // ln(pop_lo / pop_hi), +-inf when one population is 0, NaN when both are
  double beta = 0.0;       // log_ratio / delta_e; +inf for ZeroTemp, NaN for Inert
  ChannelKind kind = ChannelKind::Inert;
};

/// One channel per unordered level pair, n(n-1)/2 in total, ordered by the
/// lower index then the higher one. Orientation: E_hi >= E_lo; inside a
/// degenerate block `hi` is the less populated level (higher index on ties),
/// so a ZeroTemp channel always has log_ratio > 0 and beta = +inf.
std::vector<TransitionChannel> enumerate_channels(const DiagonalReservoir& res);

/// 1/beta for finite temperatures, exactly 0 for ZeroTemp, +inf for
/// InfiniteTemp, and nullopt for Undefined and Inert channels.
std::optional<double> effective_temperature(const TransitionChannel& ch);

enum class ReservoirRole { HeatReservoir, WorkReservoir, Mixed };

std::string_view to_string(ReservoirRole role);

/// WorkReservoir iff some channel is inverted (NegativeTemp, or an Undefined
/// channel whose lower level is empty while the upper is not); HeatReservoir iff
/// every non-Inert channel is PositiveTemp; Mixed otherwise.
ReservoirRole classify_reservoir(std::span<const TransitionChannel> channels);

/// Inverse temperature used to rank channels in the extremal search, or
/// nullopt when the channel takes no part in it. An Undefined channel with an
/// empty upper level ranks at its zero-temperature limit (+inf); Inert channels,
/// channels with both levels empty and inverted channels are not ranked.
std::optional<double> ranking_beta(const TransitionChannel& ch);

/// Hottest channel with a nonzero gap (smallest ranking beta).
std::optional<TransitionChannel> hottest_channel(std::span<const TransitionChannel> channels);

/// Coldest channel (largest ranking beta, ZeroTemp counting as +inf).
std::optional<TransitionChannel> coldest_channel(std::span<const TransitionChannel> channels);

struct ExtremalChannels {
  TransitionChannel hottest_hot;
  TransitionChannel coldest_cold;
  std::vector<std::string> warnings;
};

/// Ties are broken by the lexicographically smallest (hi, lo).
/// Throws HypothesisError when either side is a work reservoir or has no
/// eligible channel.
ExtremalChannels extremal_channels(std::span<const TransitionChannel> hot,
                                   std::span<const TransitionChannel> cold);

/// Human-readable notes for channels that touch an empty level.
std::vector<std::string> empty_level_warnings(std::span<const TransitionChannel> channels,
                                              std::string_view side);

}  // namespace carnot
