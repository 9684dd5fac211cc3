#include "carnot/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

using CMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

CMatrix to_eigen(const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

std::string describe(const char* what, double value, double tol) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (deviation " << value << ", tolerance " << tol << ")";
  return os.str();
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

DensityMatrix DensityMatrix::diagonal(std::span<const double> populations) {
  DensityMatrix m(populations.size());
  for (std::size_t i = 0; i < populations.size(); ++i) m(i, i) = populations[i];
  return m;
}

void DensityMatrix::set_coherence(std::size_t i, std::size_t j, std::complex<double> value) {
  if (i >= dim_ || j >= dim_) throw StructuralError("coherence index out of range");
  (*this)(i, j) = value;
  (*this)(j, i) = std::conj(value);
}

ReservoirSpec::ReservoirSpec(std::vector<double> energies, DensityMatrix density,
                             std::string label, Tolerances tol)
    : energies_(std::move(energies)),
      density_(std::move(density)),
      label_(std::move(label)),
      tol_(tol) {
  if (energies_.empty()) throw InvariantError("energies", "energies must be nonempty");
  for (double e : energies_) {
    if (!std::isfinite(e)) throw InvariantError("energies", "energies must be finite");
  }
  if (density_.dim() != energies_.size()) {
    throw StructuralError("density dimension " + std::to_string(density_.dim()) +
                          " does not match " + std::to_string(energies_.size()) + " energies");
  }

  const std::size_t n = energies_.size();
  double herm_dev = 0.0;
  std::complex<double> trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trace += density_(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = density_(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InvariantError("density", "density entries must be finite");
      herm_dev = std::max(herm_dev, std::abs(v - std::conj(density_(j, i))));
    }
  }
  if (herm_dev > tol_.hermitian)
    throw InvariantError("hermitian", describe("density is not Hermitian", herm_dev, tol_.hermitian));
  const double trace_dev = std::abs(trace - 1.0);
  if (trace_dev > tol_.trace)
    throw InvariantError("trace", describe("trace(density) != 1", trace_dev, tol_.trace));

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(to_eigen(density_), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol_.psd)
    throw InvariantError("psd", describe("density has a negative eigenvalue", -min_eig, tol_.psd));
}

DiagonalReservoir::DiagonalReservoir(std::vector<Level> levels, std::string label, Tolerances tol)
    : levels_(std::move(levels)), label_(std::move(label)), tol_(tol) {
  if (levels_.empty()) throw InvariantError("levels", "reservoir needs at least one level");
  double total = 0.0;
  for (auto& lv : levels_) {
    if (!std::isfinite(lv.energy) || !std::isfinite(lv.population))
      throw InvariantError("levels", "level energies and populations must be finite");
    if (lv.population < -tol_.psd)
      throw InvariantError("population",
                           describe("negative population", -lv.population, tol_.psd));
    if (lv.population < 0.0) lv.population = 0.0;
    total += lv.population;
  }
  if (std::fabs(total - 1.0) > tol_.trace)
    throw InvariantError("trace", describe("populations do not sum to 1", std::fabs(total - 1.0),
                                           tol_.trace));
}

std::vector<double> DiagonalReservoir::energies() const {
  std::vector<double> out;
  out.reserve(levels_.size());
  for (const auto& lv : levels_) out.push_back(lv.energy);
  return out;
}

std::vector<double> DiagonalReservoir::populations() const {
  std::vector<double> out;
  out.reserve(levels_.size());
  for (const auto& lv : levels_) out.push_back(lv.population);
  return out;
}

StationarityCheck validate_stationarity(const ReservoirSpec& spec, double tol) {
  const auto& e = spec.energies();
  const auto& rho = spec.density();
  // [H, rho]_ij = (E_i - E_j) rho_ij for diagonal H.
  double sq = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      const double c = (e[i] - e[j]) * std::abs(rho(i, j));
      sq += c * c;
    }
  }
  StationarityCheck out;
  out.commutator_norm = std::sqrt(sq);
  out.stationary = out.commutator_norm <= tol;
  return out;
}

StationarityCheck validate_stationarity(const ReservoirSpec& spec) {
  return validate_stationarity(spec, spec.tolerances().hermitian);
}

std::vector<std::vector<std::size_t>> degenerate_blocks(std::span<const double> energies,
                                                        double tol) {
  std::vector<std::size_t> order(energies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t idx = order[k];
    if (k == 0 || energies[idx] - energies[order[k - 1]] > tol) blocks.emplace_back();
    blocks.back().push_back(idx);
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

DiagonalReservoir diagonalize_reservoir(const ReservoirSpec& spec) {
  const auto& tol = spec.tolerances();
  const auto check = validate_stationarity(spec);
  if (!check.stationary) {
    std::ostringstream os;
    os.precision(17);
    os << "reservoir '" << spec.label() << "' is not stationary: ||[H, rho]|| = "
       << check.commutator_norm;
    throw StationarityError(check.commutator_norm, os.str());
  }

  const auto& energies = spec.energies();
  const auto& rho = spec.density();
  std::vector<Level> levels(energies.size());

  for (const auto& block : degenerate_blocks(energies, tol.degeneracy)) {
    std::vector<double> pops;
    if (block.size() == 1) {
      pops.push_back(rho(block[0], block[0]).real());
    } else {
      const auto n = static_cast<Eigen::Index>(block.size());
      CMatrix sub(n, n);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
          sub(a, b) = rho(block[static_cast<std::size_t>(a)], block[static_cast<std::size_t>(b)]);
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(sub, Eigen::EigenvaluesOnly);
      for (Eigen::Index a = 0; a < n; ++a) pops.push_back(solver.eigenvalues()(a));
    }
    std::sort(pops.begin(), pops.end(), std::greater<>());
    for (std::size_t k = 0; k < block.size(); ++k) {
      levels[block[k]] = Level{energies[block[k]], pops[k]};
    }
  }
  return DiagonalReservoir(std::move(levels), spec.label(), tol);
}

DiagonalReservoir thermal_reservoir(std::span<const double> energies, double temperature,
                                    std::string label) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw DomainError("thermal_reservoir: temperature must be finite and > 0");
  if (energies.empty()) throw DomainError("thermal_reservoir: energies must be nonempty");
  for (double e : energies)
    if (!std::isfinite(e)) throw DomainError("thermal_reservoir: energies must be finite");

  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> w(energies.size());
  double z = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    w[i] = std::exp(-(energies[i] - e_min) / temperature);
    z += w[i];
  }
  std::vector<Level> levels(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) levels[i] = Level{energies[i], w[i] / z};

  DiagonalReservoir out(std::move(levels), std::move(label));
  out.gibbs_temperature_ = temperature;
  return out;
}

}  // namespace carnot
