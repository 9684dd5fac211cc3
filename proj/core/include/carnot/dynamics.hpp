#pragma once

// Time-domain cross-check of the closed-form heat flows.
//
// A protocol is a bare coupling V (complex elements on the product basis
// |m p> -> |n q>) modulated by a periodic envelope f(t). Its interaction
// picture element is
//   V~_{mp}^{nq}(t) = V_{mp}^{nq} f(t) exp(i t (E_H^m + E_C^p - E_H^n - E_C^q)),
// M = int_0^{t_f} V~(t) dt, and the second-order heat
//   Q_j = lambda^2 int_0^{t_f} dt int_0^t dtau Tr([[rho(0), V~(tau)], V~(t)] H_j)
// must reproduce the engine's |M|^2 formula.

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "carnot/engine.hpp"
#include "carnot/reservoir.hpp"

namespace carnot {

enum class EnvelopeShape { Cosine, Square, Constant };

std::string_view to_string(EnvelopeShape shape);
std::optional<EnvelopeShape> parse_envelope_shape(std::string_view name);

/// Cosine: cos(omega t). Square: +1 on the first half of each period, -1 on
/// the second. Constant: 1 (omega ignored).
struct Envelope {
  EnvelopeShape shape = EnvelopeShape::Constant;
  double omega = 0.0;

  double period() const;
  double value(double t) const;
};

struct Amplitude {
  CouplingIndex index;  // V_{(m,p),(n,q)}; the conjugate element is implied
  std::complex<double> value;
};

/// Largest product dimension (hot levels x cold levels) the oracle accepts.
inline constexpr std::size_t kMaxOracleDimension = 36;

class DrivingProtocol {
 public:
  /// Throws DomainError unless t_final > 0 and, for periodic envelopes,
  /// omega > 0 and t_final is a whole number of periods. Throws
  /// InvariantError for a non-real diagonal element and StructuralError for an
  /// element given twice (directly or through its Hermitian partner).
  DrivingProtocol(Envelope envelope, double t_final, std::vector<Amplitude> amplitudes);

  const Envelope& envelope() const noexcept { return envelope_; }
  double t_final() const noexcept { return t_final_; }
  const std::vector<Amplitude>& amplitudes() const noexcept { return amplitudes_; }

  /// Bare element V_{(m,p),(n,q)}, resolving the Hermitian partner; 0 if absent.
  std::complex<double> bare_element(const CouplingIndex& index) const;

  /// Sub-intervals of [0, t_final] on which the envelope is smooth.
  std::vector<std::pair<double, double>> smooth_pieces() const;

 private:
  Envelope envelope_;
  double t_final_;
  std::vector<Amplitude> amplitudes_;
};

/// Throws StructuralError when an index is out of range for the reservoirs.
std::complex<double> interaction_picture_element(const DrivingProtocol& proto,
                                                 const DiagonalReservoir& hot,
                                                 const DiagonalReservoir& cold,
                                                 const CouplingIndex& index, double t);

struct EffectiveCoupling {
  /// Canonical orientation (E_H^m > E_H^n), sorted by index.
  std::vector<std::pair<CouplingIndex, std::complex<double>>> elements;
  CouplingOperator engine;
};

/// Closed-form M for every amplitude, reduced to squared weights. With
/// `cross_check`, each element is also integrated by composite Simpson and a
/// disagreement beyond 1e-7 * |V| * t_f throws ConsistencyError. Elements
/// that leave the hot energy unchanged (other than pure diagonals, which carry
/// no heat) throw DomainError: the engine form cannot represent them.
EffectiveCoupling accumulate_m(const DrivingProtocol& proto, const DiagonalReservoir& hot,
                               const DiagonalReservoir& cold, double lambda,
                               bool cross_check = true);

struct IntegratedHeat {
  double q_hot = 0.0;
  double q_cold = 0.0;
  /// Estimates at half the resolution, kept for the convergence report.
  double q_hot_coarse = 0.0;
  double q_cold_coarse = 0.0;
  std::size_t steps = 0;
};

/// Comparison tolerance for a heat value: max(1e-8, 1e-6 |q|).
double oracle_tolerance(double q);

/// Nested trapezoid integration (cumulative inner integral, Richardson
/// extrapolated at steps, 2 steps and 4 steps intervals). Throws
/// ConvergenceError when successive extrapolations differ by more than
/// 0.1 * oracle_tolerance.
IntegratedHeat integrate_heat_flow(const DrivingProtocol& proto, const DiagonalReservoir& hot,
                                   const DiagonalReservoir& cold, double lambda,
                                   std::size_t steps);

/// Step count resolving the fastest phase in the protocol to `radians_per_step`.
std::size_t suggested_steps(const DrivingProtocol& proto, const DiagonalReservoir& hot,
                            const DiagonalReservoir& cold, double radians_per_step = 0.02);

struct FirstOrderRate {
  double hot = 0.0;
  double cold = 0.0;
};

/// |lambda Tr([rho_H (x) rho_C, V~(t)] H_j)| with dense matrices in the level
/// basis of the (possibly coherent) specs. Vanishes for stationary inputs.
FirstOrderRate first_order_rate(const DrivingProtocol& proto, const ReservoirSpec& hot,
                                const ReservoirSpec& cold, double lambda, double t);

struct OracleComparison {
  IntegratedHeat integrated;
  HeatReport closed_form;
  double discrepancy_hot = 0.0;
  double discrepancy_cold = 0.0;
  bool agree = false;
};

OracleComparison compare_with_closed_form(const DrivingProtocol& proto,
                                          const DiagonalReservoir& hot,
                                          const DiagonalReservoir& cold, double lambda,
                                          std::size_t steps);

}  // namespace carnot
