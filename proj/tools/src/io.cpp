#include "carnot_cli/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

namespace carnot::cli {

namespace {

std::string at(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& base) {
  if (!obj.is_object()) throw InputError(base.empty() ? "<root>" : base, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(at(base, key), "missing required field");
  return *it;
}

double real(const json& v, const std::string& field) {
  if (!v.is_number()) throw InputError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(field, "expected a finite number");
  return x;
}

std::size_t index(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError(field, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> reals(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real(v[i], at(field, i)));
  return out;
}

const json& array(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError(field, "expected an array");
  return v;
}

double optional_real(const json& obj, const std::string& key, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : real(*it, key);
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

LoadedReservoir parse_reservoir(const json& doc) {
  if (!doc.is_object()) throw InputError("<root>", "expected an object");
  std::string label;
  if (const auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) throw InputError("label", "expected a string");
    label = it->get<std::string>();
  }
  const auto energies = reals(require(doc, "energies", ""), "energies");
  if (energies.empty()) throw InputError("energies", "must be nonempty");

  const bool has_temperature = doc.contains("temperature");
  if (has_temperature && doc.contains("diag"))
    throw InputError("temperature", "give either diag or temperature, not both");

  if (has_temperature) {
    if (doc.contains("offdiag")) throw InputError("offdiag", "not allowed with temperature");
    const double t = real(doc.at("temperature"), "temperature");
    if (!(t > 0.0)) throw InputError("temperature", "must be > 0");
    auto diagonal = thermal_reservoir(energies, t, label);
    ReservoirSpec spec(energies, DensityMatrix::diagonal(diagonal.populations()), label);
    auto check = validate_stationarity(spec);
    return {std::move(spec), std::move(diagonal), check};
  }

  const auto diag = reals(require(doc, "diag", ""), "diag");
  if (diag.size() != energies.size())
    throw InputError("diag", "length " + std::to_string(diag.size()) + " does not match " +
                                 std::to_string(energies.size()) + " energies");
  DensityMatrix rho = DensityMatrix::diagonal(diag);
  if (const auto it = doc.find("offdiag"); it != doc.end()) {
    const auto& entries = array(*it, "offdiag");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string base = at("offdiag", k);
      const auto& e = entries[k];
      const std::size_t i = index(require(e, "i", base), at(base, "i"));
      const std::size_t j = index(require(e, "j", base), at(base, "j"));
      if (i >= diag.size()) throw InputError(at(base, "i"), "index out of range");
      if (j >= diag.size()) throw InputError(at(base, "j"), "index out of range");
      if (i >= j) throw InputError(base, "needs i < j; the conjugate entry is implied");
      const double re = real(require(e, "re", base), at(base, "re"));
      const double im = e.contains("im") ? real(e.at("im"), at(base, "im")) : 0.0;
      rho.set_coherence(i, j, {re, im});
    }
  }
  ReservoirSpec spec(energies, std::move(rho), label);
  const auto check = validate_stationarity(spec);
  auto diagonal = diagonalize_reservoir(spec);
  return {std::move(spec), std::move(diagonal), check};
}

CouplingOperator parse_engine(const json& doc) {
  if (!doc.is_object()) throw InputError("<root>", "expected an object");
  const double lambda = optional_real(doc, "lambda", 1.0);
  if (!(lambda > 0.0)) throw InputError("lambda", "must be > 0");
  CouplingOperator engine(lambda);
  const auto& list = array(require(doc, "couplings", ""), "couplings");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string base = at("couplings", k);
    const auto& c = list[k];
    const CouplingIndex idx{index(require(c, "m", base), at(base, "m")),
                            index(require(c, "n", base), at(base, "n")),
                            index(require(c, "p", base), at(base, "p")),
                            index(require(c, "q", base), at(base, "q"))};
    const double w = real(require(c, "weight", base), at(base, "weight"));
    if (w < 0.0) throw InputError(at(base, "weight"), "must be >= 0");
    if (engine.weights().count(idx)) throw InputError(base, "duplicate tuple");
    engine.add(idx, w);
  }
  return engine;
}

LoadedProtocol parse_protocol(const json& doc) {
  if (!doc.is_object()) throw InputError("<root>", "expected an object");
  const auto& name = require(doc, "envelope", "");
  if (!name.is_string()) throw InputError("envelope", "expected a string");
  const auto shape = parse_envelope_shape(name.get<std::string>());
  if (!shape) throw InputError("envelope", "expected one of cosine, square, constant");
  Envelope env{*shape, optional_real(doc, "omega", 0.0)};
  if (*shape != EnvelopeShape::Constant && !doc.contains("omega"))
    throw InputError("omega", "missing required field");
  const double t_final = real(require(doc, "t_final", ""), "t_final");
  const double lambda = optional_real(doc, "lambda", 1.0);
  if (!(lambda > 0.0)) throw InputError("lambda", "must be > 0");

  std::vector<Amplitude> amps;
  const auto& list = array(require(doc, "amplitudes", ""), "amplitudes");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string base = at("amplitudes", k);
    const auto& a = list[k];
    const CouplingIndex idx{index(require(a, "m", base), at(base, "m")),
                            index(require(a, "n", base), at(base, "n")),
                            index(require(a, "p", base), at(base, "p")),
                            index(require(a, "q", base), at(base, "q"))};
    const double re = real(require(a, "re", base), at(base, "re"));
    const double im = a.contains("im") ? real(a.at("im"), at(base, "im")) : 0.0;
    amps.push_back({idx, {re, im}});
  }
  return {DrivingProtocol(env, t_final, std::move(amps)), lambda};
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

json to_json(const TransitionChannel& ch) {
  return {{"hi", ch.hi},
          {"lo", ch.lo},
          {"delta_e", number(ch.delta_e)},
          {"pop_hi", number(ch.pop_hi)},
          {"pop_lo", number(ch.pop_lo)},
          {"log_ratio", number(ch.log_ratio)},
          {"beta", number(ch.beta)},
          {"kind", std::string(to_string(ch.kind))},
          {"temperature", number(effective_temperature(ch))}};
}

json to_json(const HeatReport& report) {
  json channels = json::array();
  const auto tags = channel_sign_analysis(report);
  for (std::size_t k = 0; k < report.channels.size(); ++k) {
    const auto& c = report.channels[k];
    channels.push_back({{"m", c.index.m},
                        {"n", c.index.n},
                        {"p", c.index.p},
                        {"q", c.index.q},
                        {"flux", number(c.flux)},
                        {"q_hot", number(c.q_hot)},
                        {"q_cold", number(c.q_cold)},
                        {"sign", std::string(to_string(tags[k]))}});
  }
  return {{"q_hot", number(report.q_hot)},
          {"q_cold", number(report.q_cold)},
          {"work", number(report.work)},
          {"efficiency", report.efficiency ? number(*report.efficiency) : json("NOT_APPLICABLE")},
          {"channels", channels}};
}

json to_json(const BoundReport& report) {
  json out{{"applicable", report.applicable},
           {"reason", std::string(to_string(report.reason))},
           {"diagnostic", report.diagnostic},
           {"eta_max", number(report.eta_max)},
           {"temperature_ratio", number(report.temperature_ratio)},
           {"regime", report.applicable ? json(std::string(to_string(report.regime))) : json(nullptr)},
           {"hot_role", std::string(to_string(report.hot_role))},
           {"cold_role", std::string(to_string(report.cold_role))},
           {"warnings", report.warnings}};
  out["hot_channel"] = report.hot_channel ? to_json(*report.hot_channel) : json(nullptr);
  out["cold_channel"] = report.cold_channel ? to_json(*report.cold_channel) : json(nullptr);
  return out;
}

json to_json(const CouplingOperator& engine) {
  json couplings = json::array();
  for (const auto& [i, w] : engine.weights())
    couplings.push_back({{"m", i.m}, {"n", i.n}, {"p", i.p}, {"q", i.q}, {"weight", number(w)}});
  return {{"lambda", number(engine.lambda())}, {"couplings", couplings}};
}

json to_json(const SweepSummary& s) {
  return {{"trials", s.trials},
          {"applicable", s.applicable},
          {"max_efficiency", number(s.max_efficiency)},
          {"violations", s.violations},
          {"limit", number(s.limit)},
          {"tolerance", number(s.tolerance)},
          {"seed", s.seed}};
}

}  // namespace carnot::cli
