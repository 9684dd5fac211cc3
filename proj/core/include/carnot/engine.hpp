#pragma once

// Second-order heat flows for an engine coupling two diagonal reservoirs.
// For a coupling with squared elements w = |M_{mp}^{nq}|^2, restricted to
// E_H^m > E_H^n, and flux factor f = rho_H^m rho_C^p - rho_H^n rho_C^q:
//   Q_H = lambda^2 sum w f (E_H^m - E_H^n)
//   Q_C = lambda^2 sum w f (E_C^p - E_C^q)
// with Q_j > 0 meaning heat leaves reservoir j, and W = Q_H + Q_C.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "carnot/reservoir.hpp"

namespace carnot {

/// (m, n) index hot levels, (p, q) cold levels.
struct CouplingIndex {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;

  auto operator<=>(const CouplingIndex&) const = default;
};

/// Sparse engine: squared coupling magnitudes on the canonical half of the
/// Hermitian pair, plus the coupling strength lambda.
class CouplingOperator {
 public:
  explicit CouplingOperator(double lambda = 1.0);

  /// Throws DomainError for negative or non-finite weights and
  /// StructuralError when the tuple is already present.
  void add(const CouplingIndex& index, double weight);

  double lambda() const noexcept { return lambda_; }
  const std::map<CouplingIndex, double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }

 private:
  double lambda_;
  std::map<CouplingIndex, double> weights_;
};

struct ChannelContribution {
  CouplingIndex index;
  double flux = 0.0;  // rho_H^m rho_C^p - rho_H^n rho_C^q
  double q_hot = 0.0;
  double q_cold = 0.0;
};

struct HeatReport {
  double q_hot = 0.0;
  double q_cold = 0.0;
  double work = 0.0;
  /// work / q_hot, present only when q_hot > 0.
  std::optional<double> efficiency;
  std::vector<ChannelContribution> channels;
};

/// Throws StructuralError for out-of-range indices and CanonicalizationError
/// when a tuple does not satisfy E_H^m > E_H^n beyond the degeneracy tolerance.
HeatReport heat_flows(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                      const CouplingOperator& engine);

/// Every tuple the engine may couple: hot pairs with E_H^m > E_H^n and all
/// ordered cold pairs (p, q), p == q included. Sorted.
std::vector<CouplingIndex> canonical_tuples(const DiagonalReservoir& hot,
                                            const DiagonalReservoir& cold);

enum class ChannelSign {
  Extracting,             // Q_H > 0, Q_C <= 0, Q_H > |Q_C|
  Dissipating,            // any other non-forbidden outcome
  ForbiddenBothPositive,  // Q_H > 0 and Q_C > 0
  ForbiddenReversed,      // Q_H < 0, Q_C > 0, |Q_C| > |Q_H|
};

std::string_view to_string(ChannelSign sign);

ChannelSign classify_contribution(const ChannelContribution& c);

/// Per-channel tags in the order of report.channels.
std::vector<ChannelSign> channel_sign_analysis(const HeatReport& report);

/// Efficiency of a one-tuple engine, 1 - cold_gap / hot_gap. The common flux
/// factor cancels, so it does not depend on the populations.
double single_channel_efficiency(double hot_gap, double cold_gap);

}  // namespace carnot
