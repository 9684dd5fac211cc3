#pragma once

// Coherent-reservoir case studies.
//
// Three-level gas: upper level a at energy omega, degenerate lower pair b, c
// at 0 with equal populations and a coherence rho_bc e^{i phi} between them.
// Coherent pair: two degenerate levels with density (1/2)[[1, s], [s, 1]].

#include <cstddef>
#include <string>

#include "carnot/bounds.hpp"
#include "carnot/reservoir.hpp"

namespace carnot {

struct ScullyParams {
  double p_a = 0.0;
  double p_b = 0.0;  // p_c = p_b
  double rho_bc = 0.0;
  double phi = 0.0;
  double omega = 1.0;
};

/// Throws InvariantError unless p_a + 2 p_b = 1, 0 <= rho_bc <= p_b, and
/// DomainError unless omega > 0.
void validate(const ScullyParams& params);

/// Energies {omega, 0, 0}; stationary for every phi.
ReservoirSpec scully_reservoir(const ScullyParams& params);

/// Same gas without coherence: populations {p_a, p_b, p_b}.
DiagonalReservoir scully_cold_reservoir(const ScullyParams& params);

struct ScullyBound {
  bool applicable = false;
  std::string diagnostic;
  /// 1 - ln((p_b - rho_bc)/p_a) / ln(p_b/p_a)
  double closed_form = 0.0;
  /// Same quantity through diagonalization and the generalized bound.
  double pipeline = 0.0;
  /// p_a rho_bc / (p_b (p_b - p_a)), valid for p_b ~ p_a and small rho_bc.
  double small_coherence = 0.0;
  BoundReport report;
};

/// Needs p_b - rho_bc > p_a (all hot temperatures positive); otherwise the
/// result is flagged inapplicable and carries the pipeline's diagnostic.
ScullyBound scully_bound(const ScullyParams& params);

/// Throws DomainError for sigma outside [0, 1].
ReservoirSpec coherent_pair(double sigma);

/// Entropy of the maximally mixed pair minus entropy of the coherent pair, in nats.
double coherence_entropy_drop(double sigma);

/// Second-law ceiling T_H * pairs * entropy drop on work drawn by destroying
/// the coherence of `pair_count` degenerate pairs.
double max_extractable_work(double hot_temperature, std::size_t pair_count, double sigma);

}  // namespace carnot
