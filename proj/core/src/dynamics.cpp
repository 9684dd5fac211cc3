#include "carnot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

using cplx = std::complex<double>;

double bohr_frequency(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                      const CouplingIndex& i) {
  return (hot[i.m].energy - hot[i.n].energy) + (cold[i.p].energy - cold[i.q].energy);
}

void check_indices(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                   const CouplingIndex& i) {
  if (i.m >= hot.size() || i.n >= hot.size() || i.p >= cold.size() || i.q >= cold.size())
    throw StructuralError("protocol element (" + std::to_string(i.m) + "," + std::to_string(i.n) +
                          "," + std::to_string(i.p) + "," + std::to_string(i.q) +
                          ") is out of range");
}

void check_dimension(std::size_t hot_levels, std::size_t cold_levels) {
  if (hot_levels * cold_levels > kMaxOracleDimension)
    throw DomainError("oracle product dimension " + std::to_string(hot_levels * cold_levels) +
                      " exceeds " + std::to_string(kMaxOracleDimension));
}

// int_0^len exp(i nu t) dt, stable for small nu.
cplx phase_integral(double nu, double len) {
  if (nu == 0.0) return {len, 0.0};
  const double s = std::sin(0.5 * nu * len);
  return cplx(std::sin(nu * len), 2.0 * s * s) / nu;
}

// Envelope value on a smooth piece; the square wave takes its one-sided value.
double piece_value(const Envelope& env, std::size_t piece, double t) {
  if (env.shape == EnvelopeShape::Square) return piece % 2 == 0 ? 1.0 : -1.0;
  return env.value(t);
}

// Closed-form int_0^{t_f} f(t) exp(i w t) dt.
cplx modulated_integral(const DrivingProtocol& proto, double w) {
  const Envelope& env = proto.envelope();
  const double tf = proto.t_final();
  switch (env.shape) {
    case EnvelopeShape::Constant:
      return phase_integral(w, tf);
    case EnvelopeShape::Cosine:
      return 0.5 * (phase_integral(w + env.omega, tf) + phase_integral(w - env.omega, tf));
    case EnvelopeShape::Square: {
      cplx acc = 0.0;
      const auto pieces = proto.smooth_pieces();
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto [a, b] = pieces[k];
        acc += piece_value(env, k, a) * std::polar(1.0, w * a) * phase_integral(w, b - a);
      }
      return acc;
    }
  }
  return 0.0;
}

// Composite Simpson for the same integral.
cplx simpson_integral(const DrivingProtocol& proto, double w) {
  const Envelope& env = proto.envelope();
  const double fastest = std::fabs(w) + env.omega;
  cplx acc = 0.0;
  const auto pieces = proto.smooth_pieces();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto [a, b] = pieces[k];
    std::size_t n = std::max<std::size_t>(200, static_cast<std::size_t>(40.0 * fastest * (b - a)));
    n += n % 2;
    const double h = (b - a) / static_cast<double>(n);
    cplx piece = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = a + h * static_cast<double>(i);
      const double c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      piece += c * piece_value(env, k, t) * std::polar(1.0, w * t);
    }
    acc += piece * (h / 3.0);
  }
  return acc;
}

struct ElementTerm {
  double omega;        // Bohr frequency
  double coef_hot;     // 2 (h_a - h_b)(r_a - r_b) |V|^2 for H_H
  double coef_cold;    // same for H_C
};

// int_0^{t_f} dt Re( conj(u(t)) int_0^t u(tau) dtau ), u = f e^{i w t}, by
// nested trapezoid with `n` intervals per smooth piece.
double nested_trapezoid(const DrivingProtocol& proto,
                        const std::vector<std::pair<double, double>>& pieces, double w,
                        std::size_t n) {
  const Envelope& env = proto.envelope();
  cplx inner = 0.0;  // int_0^t u
  double outer = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto [a, b] = pieces[k];
    const double h = (b - a) / static_cast<double>(n);
    cplx u_prev = piece_value(env, k, a) * std::polar(1.0, w * a);
    double g_prev = (inner * std::conj(u_prev)).real();
    for (std::size_t i = 1; i <= n; ++i) {
      const double t = a + h * static_cast<double>(i);
      const cplx u = piece_value(env, k, t) * std::polar(1.0, w * t);
      inner += 0.5 * h * (u_prev + u);
      const double g = (inner * std::conj(u)).real();
      outer += 0.5 * h * (g_prev + g);
      u_prev = u;
      g_prev = g;
    }
  }
  return outer;
}

}  // namespace

std::string_view to_string(EnvelopeShape shape) {
  switch (shape) {
    case EnvelopeShape::Cosine: return "cosine";
    case EnvelopeShape::Square: return "square";
    case EnvelopeShape::Constant: return "constant";
  }
  return "unknown";
}

std::optional<EnvelopeShape> parse_envelope_shape(std::string_view name) {
  if (name == "cosine") return EnvelopeShape::Cosine;
  if (name == "square") return EnvelopeShape::Square;
  if (name == "constant") return EnvelopeShape::Constant;
  return std::nullopt;
}

double Envelope::period() const {
  if (shape == EnvelopeShape::Constant) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / omega;
}

double Envelope::value(double t) const {
  switch (shape) {
    case EnvelopeShape::Constant: return 1.0;
    case EnvelopeShape::Cosine: return std::cos(omega * t);
    case EnvelopeShape::Square: {
      const double tau = period();
      const double phase = t - tau * std::floor(t / tau);
      return phase < 0.5 * tau ? 1.0 : -1.0;
    }
  }
  return 0.0;
}

DrivingProtocol::DrivingProtocol(Envelope envelope, double t_final,
                                 std::vector<Amplitude> amplitudes)
    : envelope_(envelope), t_final_(t_final), amplitudes_(std::move(amplitudes)) {
  if (!(t_final_ > 0.0) || !std::isfinite(t_final_))
    throw DomainError("protocol t_final must be finite and > 0");
  if (envelope_.shape != EnvelopeShape::Constant) {
    if (!(envelope_.omega > 0.0) || !std::isfinite(envelope_.omega))
      throw DomainError("periodic envelope needs omega > 0");
    const double periods = t_final_ / envelope_.period();
    const double whole = std::round(periods);
    if (whole < 1.0 || std::fabs(periods - whole) > 1e-9 * std::max(1.0, periods))
      throw DomainError("t_final must be a whole number of envelope periods (got " +
                        std::to_string(periods) + ")");
  }

  std::set<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>> seen;
  for (const auto& amp : amplitudes_) {
    const auto& i = amp.index;
    if (!std::isfinite(amp.value.real()) || !std::isfinite(amp.value.imag()))
      throw DomainError("protocol amplitudes must be finite");
    std::pair<std::size_t, std::size_t> row{i.m, i.p};
    std::pair<std::size_t, std::size_t> col{i.n, i.q};
    if (row == col && std::fabs(amp.value.imag()) > 1e-12)
      throw InvariantError("hermitian", "diagonal protocol element must be real");
    if (col < row) std::swap(row, col);
    if (!seen.insert({row, col}).second)
      throw StructuralError("protocol element given twice (directly or as its conjugate)");
  }
}

std::complex<double> DrivingProtocol::bare_element(const CouplingIndex& index) const {
  for (const auto& amp : amplitudes_) {
    if (amp.index == index) return amp.value;
    const CouplingIndex partner{amp.index.n, amp.index.m, amp.index.q, amp.index.p};
    if (partner == index) return std::conj(amp.value);
  }
  return 0.0;
}

std::vector<std::pair<double, double>> DrivingProtocol::smooth_pieces() const {
  if (envelope_.shape != EnvelopeShape::Square) return {{0.0, t_final_}};
  const auto halves =
      static_cast<std::size_t>(std::llround(2.0 * t_final_ / envelope_.period()));
  const double half = t_final_ / static_cast<double>(halves);
  std::vector<std::pair<double, double>> out;
  out.reserve(halves);
  for (std::size_t k = 0; k < halves; ++k)
    out.emplace_back(half * static_cast<double>(k),
                     k + 1 == halves ? t_final_ : half * static_cast<double>(k + 1));
  return out;
}

std::complex<double> interaction_picture_element(const DrivingProtocol& proto,
                                                 const DiagonalReservoir& hot,
                                                 const DiagonalReservoir& cold,
                                                 const CouplingIndex& index, double t) {
  check_indices(hot, cold, index);
  const double w = bohr_frequency(hot, cold, index);
  return proto.bare_element(index) * proto.envelope().value(t) * std::polar(1.0, w * t);
}

EffectiveCoupling accumulate_m(const DrivingProtocol& proto, const DiagonalReservoir& hot,
                               const DiagonalReservoir& cold, double lambda, bool cross_check) {
  EffectiveCoupling out{{}, CouplingOperator(lambda)};
  const double tol = hot.degeneracy_tol();
  for (const auto& amp : proto.amplitudes()) {
    const auto& i = amp.index;
    check_indices(hot, cold, i);
    const double gap = hot[i.m].energy - hot[i.n].energy;
    if (std::fabs(gap) <= tol) {
      if (i.m == i.n && i.p == i.q) continue;
      throw DomainError("protocol element leaves the hot energy unchanged; it has no canonical "
                        "engine form");
    }
    const double w = bohr_frequency(hot, cold, i);
    cplx m_elem = amp.value * modulated_integral(proto, w);
    if (cross_check) {
      const cplx quad = amp.value * simpson_integral(proto, w);
      const double limit = 1e-7 * std::abs(amp.value) * proto.t_final() + 1e-12;
      if (std::abs(quad - m_elem) > limit)
        throw ConsistencyError("closed-form and quadrature M disagree by " +
                               std::to_string(std::abs(quad - m_elem)));
    }
    CouplingIndex canonical = i;
    if (gap < 0.0) {
      canonical = CouplingIndex{i.n, i.m, i.q, i.p};
      m_elem = std::conj(m_elem);
    }
    out.elements.emplace_back(canonical, m_elem);
  }
  std::sort(out.elements.begin(), out.elements.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [idx, m] : out.elements) out.engine.add(idx, std::norm(m));
  return out;
}

double oracle_tolerance(double q) { return std::max(1e-8, 1e-6 * std::fabs(q)); }

IntegratedHeat integrate_heat_flow(const DrivingProtocol& proto, const DiagonalReservoir& hot,
                                   const DiagonalReservoir& cold, double lambda,
                                   std::size_t steps) {
  check_dimension(hot.size(), cold.size());
  if (steps == 0) throw DomainError("integrate_heat_flow: steps must be > 0");

  // Tr([[rho, A], B] H) = sum_{a,b} h_a (r_a - r_b)(A_ab B_ba + B_ab A_ba) in the
  // product eigenbasis; an unordered pair {a, b} with Hermitian V~ contributes
  // 2 (h_a - h_b)(r_a - r_b) Re(V~_ab(tau) conj(V~_ab(t))).
  std::vector<ElementTerm> terms;
  for (const auto& amp : proto.amplitudes()) {
    const auto& i = amp.index;
    check_indices(hot, cold, i);
    const double r_a = hot[i.m].population * cold[i.p].population;
    const double r_b = hot[i.n].population * cold[i.q].population;
    const double v2 = std::norm(amp.value);
    terms.push_back({bohr_frequency(hot, cold, i),
                     2.0 * (hot[i.m].energy - hot[i.n].energy) * (r_a - r_b) * v2,
                     2.0 * (cold[i.p].energy - cold[i.q].energy) * (r_a - r_b) * v2});
  }

  const auto pieces = proto.smooth_pieces();
  const std::size_t per_piece = std::max<std::size_t>(1, steps / pieces.size());
  const double lam2 = lambda * lambda;

  auto evaluate = [&](std::size_t n) {
    std::pair<double, double> q{0.0, 0.0};
    for (const auto& term : terms) {
      if (term.coef_hot == 0.0 && term.coef_cold == 0.0) continue;
      const double k = nested_trapezoid(proto, pieces, term.omega, n);
      q.first += lam2 * term.coef_hot * k;
      q.second += lam2 * term.coef_cold * k;
    }
    return q;
  };

  const auto t1 = evaluate(per_piece);
  const auto t2 = evaluate(2 * per_piece);
  const auto t4 = evaluate(4 * per_piece);
  auto richardson = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };

  IntegratedHeat out;
  out.steps = per_piece * pieces.size();
  out.q_hot_coarse = richardson(t1.first, t2.first);
  out.q_cold_coarse = richardson(t1.second, t2.second);
  out.q_hot = richardson(t2.first, t4.first);
  out.q_cold = richardson(t2.second, t4.second);

  if (std::fabs(out.q_hot - out.q_hot_coarse) > 0.1 * oracle_tolerance(out.q_hot))
    throw ConvergenceError(out.q_hot_coarse, out.q_hot,
                           "hot heat not converged; increase steps");
  if (std::fabs(out.q_cold - out.q_cold_coarse) > 0.1 * oracle_tolerance(out.q_cold))
    throw ConvergenceError(out.q_cold_coarse, out.q_cold,
                           "cold heat not converged; increase steps");
  return out;
}

std::size_t suggested_steps(const DrivingProtocol& proto, const DiagonalReservoir& hot,
                            const DiagonalReservoir& cold, double radians_per_step) {
  const double drive =
      proto.envelope().shape == EnvelopeShape::Constant ? 0.0 : proto.envelope().omega;
  double fastest = drive;
  for (const auto& amp : proto.amplitudes()) {
    check_indices(hot, cold, amp.index);
    fastest = std::max(fastest, std::fabs(bohr_frequency(hot, cold, amp.index)) + drive);
  }
  const double phase = std::max(fastest, 1.0) * proto.t_final();
  const auto pieces = proto.smooth_pieces().size();
  const auto n = static_cast<std::size_t>(std::ceil(phase / radians_per_step));
  return std::max<std::size_t>(n, 16 * pieces);
}

FirstOrderRate first_order_rate(const DrivingProtocol& proto, const ReservoirSpec& hot,
                                const ReservoirSpec& cold, double lambda, double t) {
  using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
  const std::size_t nh = hot.size();
  const std::size_t nc = cold.size();
  check_dimension(nh, nc);
  const auto d = static_cast<Eigen::Index>(nh * nc);
  auto flat = [nc](std::size_t m, std::size_t p) { return static_cast<Eigen::Index>(m * nc + p); };

  CMatrix rho(d, d);
  for (std::size_t m = 0; m < nh; ++m)
    for (std::size_t n = 0; n < nh; ++n)
      for (std::size_t p = 0; p < nc; ++p)
        for (std::size_t q = 0; q < nc; ++q)
          rho(flat(m, p), flat(n, q)) = hot.density()(m, n) * cold.density()(p, q);

  const auto& eh = hot.energies();
  const auto& ec = cold.energies();
  const double f = proto.envelope().value(t);
  CMatrix v = CMatrix::Zero(d, d);
  for (const auto& amp : proto.amplitudes()) {
    const auto& i = amp.index;
    if (i.m >= nh || i.n >= nh || i.p >= nc || i.q >= nc)
      throw StructuralError("protocol element out of range for first-order check");
    const double w = (eh[i.m] - eh[i.n]) + (ec[i.p] - ec[i.q]);
    const cplx val = amp.value * f * std::polar(1.0, w * t);
    v(flat(i.m, i.p), flat(i.n, i.q)) = val;
    v(flat(i.n, i.q), flat(i.m, i.p)) = std::conj(val);
  }

  const CMatrix comm = rho * v - v * rho;
  cplx tr_hot = 0.0;
  cplx tr_cold = 0.0;
  for (std::size_t m = 0; m < nh; ++m)
    for (std::size_t p = 0; p < nc; ++p) {
      tr_hot += comm(flat(m, p), flat(m, p)) * eh[m];
      tr_cold += comm(flat(m, p), flat(m, p)) * ec[p];
    }
  return {std::fabs(lambda) * std::abs(tr_hot), std::fabs(lambda) * std::abs(tr_cold)};
}

OracleComparison compare_with_closed_form(const DrivingProtocol& proto,
                                          const DiagonalReservoir& hot,
                                          const DiagonalReservoir& cold, double lambda,
                                          std::size_t steps) {
  OracleComparison out;
  out.integrated = integrate_heat_flow(proto, hot, cold, lambda, steps);
  const auto coupling = accumulate_m(proto, hot, cold, lambda);
  out.closed_form = heat_flows(hot, cold, coupling.engine);
  out.discrepancy_hot = std::fabs(out.integrated.q_hot - out.closed_form.q_hot);
  out.discrepancy_cold = std::fabs(out.integrated.q_cold - out.closed_form.q_cold);
  out.agree = out.discrepancy_hot <= oracle_tolerance(out.closed_form.q_hot) &&
              out.discrepancy_cold <= oracle_tolerance(out.closed_form.q_cold);
  return out;
}

}  // namespace carnot
