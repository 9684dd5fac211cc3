#include "carnot/coherence.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

void validate(const ScullyParams& params) {
  if (!(params.omega > 0.0) || !std::isfinite(params.omega))
    throw DomainError("omega must be finite and > 0");
  if (!(params.p_a >= 0.0) || !(params.p_b >= 0.0))
    throw InvariantError("population", "populations must be >= 0");
  if (std::fabs(params.p_a + 2.0 * params.p_b - 1.0) > 1e-10)
    throw InvariantError("trace", "p_a + 2 p_b must equal 1");
  if (!(params.rho_bc >= 0.0))
    throw InvariantError("psd", "rho_bc must be >= 0");
  if (params.rho_bc > params.p_b)
    throw InvariantError("psd", "rho_bc exceeds p_b; the coherent block is not positive");
  if (!std::isfinite(params.phi)) throw DomainError("phi must be finite");
}

ReservoirSpec scully_reservoir(const ScullyParams& params) {
  validate(params);
  const std::vector<double> pops{params.p_a, params.p_b, params.p_b};
  DensityMatrix rho = DensityMatrix::diagonal(pops);
  rho.set_coherence(1, 2, std::polar(params.rho_bc, params.phi));
  return ReservoirSpec({params.omega, 0.0, 0.0}, std::move(rho), "scully");
}

DiagonalReservoir scully_cold_reservoir(const ScullyParams& params) {
  validate(params);
  return DiagonalReservoir(
      {{params.omega, params.p_a}, {0.0, params.p_b}, {0.0, params.p_b}}, "scully-incoherent");
}

ScullyBound scully_bound(const ScullyParams& params) {
  validate(params);
  ScullyBound out;
  const auto hot = diagonalize_reservoir(scully_reservoir(params));
  const auto cold = scully_cold_reservoir(params);
  out.report = generalized_bound(hot, cold);

  const double lower = params.p_b - params.rho_bc;
  if (!(params.p_b > params.p_a) || !(lower > params.p_a)) {
    out.diagnostic = "needs p_b - rho_bc > p_a > 0 for positive hot temperatures";
    if (!out.report.diagnostic.empty()) out.diagnostic += "; " + out.report.diagnostic;
    return out;
  }
  if (!out.report.applicable) {
    out.diagnostic = out.report.diagnostic;
    return out;
  }

  out.applicable = true;
  out.closed_form = 1.0 - std::log(lower / params.p_a) / std::log(params.p_b / params.p_a);
  out.pipeline = out.report.eta_max;
  out.small_coherence = params.p_a * params.rho_bc / (params.p_b * (params.p_b - params.p_a));
  return out;
}

ReservoirSpec coherent_pair(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw DomainError("coherent_pair: sigma must lie in [0, 1]");
  DensityMatrix rho = DensityMatrix::diagonal(std::vector<double>{0.5, 0.5});
  rho.set_coherence(0, 1, 0.5 * sigma);
  return ReservoirSpec({0.0, 0.0}, std::move(rho), "coherent-pair");
}

double coherence_entropy_drop(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw DomainError("coherence_entropy_drop: sigma must lie in [0, 1]");
  return std::numbers::ln2 + xlogx(0.5 * (1.0 + sigma)) + xlogx(0.5 * (1.0 - sigma));
}

double max_extractable_work(double hot_temperature, std::size_t pair_count, double sigma) {
  if (!(hot_temperature > 0.0) || !std::isfinite(hot_temperature))
    throw DomainError("max_extractable_work: hot temperature must be > 0");
  return hot_temperature * static_cast<double>(pair_count) * coherence_entropy_drop(sigma);
}

}  // namespace carnot
