#pragma once

// Reservoir model: raw (possibly coherent) reservoir specifications, their
// stationarity check, and the diagonal form consumed by every analysis.
//
// Units throughout are hbar = k_B = 1, so a Gibbs weight is exp(-E/T).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace carnot {

struct Tolerances {
  double hermitian = 1e-10;
  double trace = 1e-10;
  double psd = 1e-10;
  /// Two energies share a degenerate block iff they differ by at most this.
  double degeneracy = 1e-12;
};

/// Dense square matrix of complex entries, row-major.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(std::size_t dim);

  static DensityMatrix diagonal(std::span<const double> populations);

  std::size_t dim() const noexcept { return dim_; }

  std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }

  /// Sets rho_ij and its Hermitian partner rho_ji = conj(rho_ij).
  void set_coherence(std::size_t i, std::size_t j, std::complex<double> value);

 private:
  std::size_t dim_ = 0;
  std::vector<std::complex<double>> data_;
};

/// User-facing reservoir: energy eigenvalues of H plus a density matrix in the
/// same basis. Construction enforces Hermiticity, unit trace and positive
/// semidefiniteness; stationarity is checked separately.
class ReservoirSpec {
 public:
  ReservoirSpec(std::vector<double> energies, DensityMatrix density, std::string label = {},
                Tolerances tol = {});

  const std::vector<double>& energies() const noexcept { return energies_; }
  const DensityMatrix& density() const noexcept { return density_; }
  const std::string& label() const noexcept { return label_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  std::size_t size() const noexcept { return energies_.size(); }

 private:
  std::vector<double> energies_;
  DensityMatrix density_;
  std::string label_;
  Tolerances tol_;
};

class DiagonalReservoir;

/// Gibbs state exp(-E/T)/Z. Throws DomainError for T <= 0 or non-finite input.
DiagonalReservoir thermal_reservoir(std::span<const double> energies, double temperature,
                                    std::string label = "thermal");

struct Level {
  double energy;
  double population;
};

/// Reservoir expressed in the simultaneous eigenbasis of H and rho.
class DiagonalReservoir {
 public:
  /// Populations in [-tol.psd, 0) are clamped to zero; anything more negative,
  /// or a total away from 1 by more than tol.trace, throws InvariantError.
  DiagonalReservoir(std::vector<Level> levels, std::string label = {}, Tolerances tol = {});

  const std::vector<Level>& levels() const noexcept { return levels_; }
  const Level& operator[](std::size_t i) const { return levels_.at(i); }
  std::size_t size() const noexcept { return levels_.size(); }
  const std::string& label() const noexcept { return label_; }
  double degeneracy_tol() const noexcept { return tol_.degeneracy; }
  const Tolerances& tolerances() const noexcept { return tol_; }

  /// Set when the reservoir was built as a Gibbs state.
  std::optional<double> gibbs_temperature() const noexcept { return gibbs_temperature_; }

  std::vector<double> energies() const;
  std::vector<double> populations() const;

 private:
  friend DiagonalReservoir thermal_reservoir(std::span<const double>, double, std::string);

  std::vector<Level> levels_;
  std::string label_;
  Tolerances tol_;
  std::optional<double> gibbs_temperature_;
};

struct StationarityCheck {
  /// Frobenius norm of [H, rho].
  double commutator_norm = 0.0;
  bool stationary = true;
};

StationarityCheck validate_stationarity(const ReservoirSpec& spec, double tol);
StationarityCheck validate_stationarity(const ReservoirSpec& spec);

/// Groups level indices into blocks of (near-)equal energy. Blocks are ordered
/// by energy and indices inside a block are ascending.
std::vector<std::vector<std::size_t>> degenerate_blocks(std::span<const double> energies,
                                                        double tol);

/// Diagonalizes rho block by block inside the degenerate subspaces of H.
/// Each level index keeps its energy; inside a block the eigen-populations are
/// assigned to the block's indices in descending order.
/// Throws StationarityError if the spec does not commute with its Hamiltonian.
DiagonalReservoir diagonalize_reservoir(const ReservoirSpec& spec);

}  // namespace carnot
