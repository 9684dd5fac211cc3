#include "carnot/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative width inside which two ranking betas count as a tie.
constexpr double kTieTol = 1e-12;

bool same_beta(double a, double b) {
  if (a == b) return true;  // includes matching infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::fabs(a - b) <= kTieTol * std::max(std::fabs(a), std::fabs(b));
}

bool index_less(const TransitionChannel& a, const TransitionChannel& b) {
  return std::tie(a.hi, a.lo) < std::tie(b.hi, b.lo);
}

TransitionChannel make_channel(const DiagonalReservoir& res, std::size_t i, std::size_t j,
                               bool degenerate) {
  TransitionChannel ch;
  const Level& a = res[i];
  const Level& b = res[j];
  if (degenerate) {
    // Less populated level on top so that log_ratio >= 0.
    if (a.population < b.population) {
      ch.hi = i;
      ch.lo = j;
    } else {
      ch.hi = j;
      ch.lo = i;
    }
    ch.delta_e = 0.0;
  } else if (a.energy > b.energy) {
    ch.hi = i;
    ch.lo = j;
    ch.delta_e = a.energy - b.energy;
  } else {
    ch.hi = j;
    ch.lo = i;
    ch.delta_e = b.energy - a.energy;
  }
  ch.pop_hi = res[ch.hi].population;
  ch.pop_lo = res[ch.lo].population;

  const double psd_tol = res.tolerances().psd;
  if (ch.pop_hi <= 0.0 || ch.pop_lo <= 0.0) {
    ch.kind = ChannelKind::Undefined;
    if (ch.pop_hi <= 0.0 && ch.pop_lo <= 0.0) {
      ch.log_ratio = kNaN;
      ch.beta = kNaN;
    } else if (ch.pop_hi <= 0.0) {
      ch.log_ratio = kInf;
      ch.beta = kInf;
    } else {
      ch.log_ratio = -kInf;
      ch.beta = degenerate ? kNaN : -kInf;
    }
    return ch;
  }

  if (degenerate) {
    if (std::fabs(ch.pop_hi - ch.pop_lo) <= psd_tol) {
      ch.kind = ChannelKind::Inert;
      ch.log_ratio = 0.0;
      ch.beta = kNaN;
    } else {
      ch.kind = ChannelKind::ZeroTemp;
      ch.log_ratio = std::log(ch.pop_lo / ch.pop_hi);
      ch.beta = kInf;
    }
    return ch;
  }

  ch.log_ratio = std::log(ch.pop_lo / ch.pop_hi);
  ch.beta = ch.log_ratio / ch.delta_e;
  if (ch.log_ratio > 0.0) {
    ch.kind = ChannelKind::PositiveTemp;
  } else if (ch.log_ratio < 0.0) {
    ch.kind = ChannelKind::NegativeTemp;
  } else {
    ch.kind = ChannelKind::InfiniteTemp;
    ch.beta = 0.0;
  }
  return ch;
}

bool is_inverted(const TransitionChannel& ch) {
  if (ch.kind == ChannelKind::NegativeTemp) return true;
  return ch.kind == ChannelKind::Undefined && ch.delta_e > 0.0 && ch.log_ratio == -kInf;
}

}  // namespace

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::PositiveTemp: return "POSITIVE_TEMP";
    case ChannelKind::NegativeTemp: return "NEGATIVE_TEMP";
    case ChannelKind::ZeroTemp: return "ZERO_TEMP";
    case ChannelKind::Inert: return "INERT";
    case ChannelKind::InfiniteTemp: return "INFINITE_TEMP";
    case ChannelKind::Undefined: return "UNDEFINED";
  }
  return "UNKNOWN";
}

std::string_view to_string(ReservoirRole role) {
  switch (role) {
    case ReservoirRole::HeatReservoir: return "HEAT_RESERVOIR";
    case ReservoirRole::WorkReservoir: return "WORK_RESERVOIR";
    case ReservoirRole::Mixed: return "MIXED";
  }
  return "UNKNOWN";
}

std::vector<TransitionChannel> enumerate_channels(const DiagonalReservoir& res) {
  const std::size_t n = res.size();
  const auto energies = res.energies();

  std::vector<std::size_t> block_of(n);
  const auto blocks = degenerate_blocks(energies, res.degeneracy_tol());
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t idx : blocks[b]) block_of[idx] = b;

  std::vector<TransitionChannel> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out.push_back(make_channel(res, i, j, block_of[i] == block_of[j]));
  return out;
}

std::optional<double> effective_temperature(const TransitionChannel& ch) {
  switch (ch.kind) {
    case ChannelKind::PositiveTemp:
    case ChannelKind::NegativeTemp:
      return ch.delta_e / ch.log_ratio;
    case ChannelKind::ZeroTemp:
      return 0.0;
    case ChannelKind::InfiniteTemp:
      return kInf;
    case ChannelKind::Inert:
    case ChannelKind::Undefined:
      return std::nullopt;
  }
  return std::nullopt;
}

ReservoirRole classify_reservoir(std::span<const TransitionChannel> channels) {
  bool all_positive = true;
  for (const auto& ch : channels) {
    if (is_inverted(ch)) return ReservoirRole::WorkReservoir;
    if (ch.kind != ChannelKind::Inert && ch.kind != ChannelKind::PositiveTemp)
      all_positive = false;
  }
  return all_positive ? ReservoirRole::HeatReservoir : ReservoirRole::Mixed;
}

std::optional<double> ranking_beta(const TransitionChannel& ch) {
  switch (ch.kind) {
    case ChannelKind::PositiveTemp:
    case ChannelKind::InfiniteTemp:
      return ch.beta;
    case ChannelKind::ZeroTemp:
      return kInf;
    case ChannelKind::Undefined:
      if (ch.log_ratio == kInf) return kInf;
      return std::nullopt;
    case ChannelKind::NegativeTemp:
    case ChannelKind::Inert:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<TransitionChannel> hottest_channel(std::span<const TransitionChannel> channels) {
  std::optional<TransitionChannel> best;
  double best_beta = kInf;
  for (const auto& ch : channels) {
    if (!(ch.delta_e > 0.0)) continue;
    const auto b = ranking_beta(ch);
    if (!b) continue;
    if (!best || (*b < best_beta && !same_beta(*b, best_beta)) ||
        (same_beta(*b, best_beta) && index_less(ch, *best))) {
      best = ch;
      best_beta = *b;
    }
  }
  return best;
}

std::optional<TransitionChannel> coldest_channel(std::span<const TransitionChannel> channels) {
  std::optional<TransitionChannel> best;
  double best_beta = -kInf;
  for (const auto& ch : channels) {
    const auto b = ranking_beta(ch);
    if (!b) continue;
    if (!best || (*b > best_beta && !same_beta(*b, best_beta)) ||
        (same_beta(*b, best_beta) && index_less(ch, *best))) {
      best = ch;
      best_beta = *b;
    }
  }
  return best;
}

std::vector<std::string> empty_level_warnings(std::span<const TransitionChannel> channels,
                                              std::string_view side) {
  std::vector<std::string> out;
  for (const auto& ch : channels) {
    if (ch.kind != ChannelKind::Undefined) continue;
    std::string msg = std::string(side) + " channel (" + std::to_string(ch.hi) + "," +
                      std::to_string(ch.lo) + ") touches an empty level: ";
    if (ch.log_ratio == kInf) {
      msg += "ranked at its zero-temperature limit";
    } else if (ch.log_ratio == -kInf && ch.delta_e > 0.0) {
      msg += "inverted toward an empty lower level";
    } else {
      msg += "excluded from the extremal search";
    }
    out.push_back(std::move(msg));
  }
  return out;
}

ExtremalChannels extremal_channels(std::span<const TransitionChannel> hot,
                                   std::span<const TransitionChannel> cold) {
  if (classify_reservoir(hot) == ReservoirRole::WorkReservoir)
    throw HypothesisError("hot reservoir is a WORK_RESERVOIR (population inversion)");
  if (classify_reservoir(cold) == ReservoirRole::WorkReservoir)
    throw HypothesisError("cold reservoir is a WORK_RESERVOIR (population inversion)");

  auto h = hottest_channel(hot);
  if (!h) throw HypothesisError("hot reservoir has no eligible channel with a nonzero gap");
  auto c = coldest_channel(cold);
  if (!c) throw HypothesisError("cold reservoir has no eligible channel");

  ExtremalChannels out{*h, *c, empty_level_warnings(hot, "hot")};
  auto cw = empty_level_warnings(cold, "cold");
  out.warnings.insert(out.warnings.end(), cw.begin(), cw.end());
  return out;
}

}  // namespace carnot
