#include "carnot_cli/cli.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "carnot_cli/io.hpp"

#ifndef CARNOT_VERSION
#define CARNOT_VERSION "unknown"
#endif

namespace carnot::cli {

namespace {

struct Options {
  bool json_mode = false;
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  double tol = 1e-10;
  std::size_t steps = 0;  // 0 = automatic

  std::string reservoir_file, hot_file, cold_file, engine_file, protocol_file;
  double pa = 0.0, pb = 0.0, rho_bc = 0.0, omega = 1.0, phi = 0.0;
  double sigma = 0.0, hot_temperature = 1.0, hot_gap = 1.0;
  std::size_t pairs = 1;
};

struct Outcome {
  int code = kOk;
  json inputs;
  json payload;
  std::string human;
};

std::string g(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string g(const std::optional<double>& x) { return x ? g(*x) : "undefined"; }

std::string channel_table(const std::vector<TransitionChannel>& channels) {
  std::ostringstream os;
  os << std::left << std::setw(4) << "hi" << std::setw(4) << "lo" << std::setw(26) << "delta_e"
     << std::setw(26) << "pop_hi" << std::setw(26) << "pop_lo" << std::setw(15) << "kind"
     << "T_eff\n";
  for (const auto& ch : channels)
    os << std::setw(4) << ch.hi << std::setw(4) << ch.lo << std::setw(26) << g(ch.delta_e)
       << std::setw(26) << g(ch.pop_hi) << std::setw(26) << g(ch.pop_lo) << std::setw(15)
       << to_string(ch.kind) << g(effective_temperature(ch)) << "\n";
  return os.str();
}

std::string bound_text(const BoundReport& r) {
  std::ostringstream os;
  if (r.applicable) {
    os << "eta_max  " << g(r.eta_max) << "\nregime   " << to_string(r.regime) << "\n";
  } else {
    os << "bound not applicable: " << to_string(r.reason) << "\n  " << r.diagnostic << "\n";
  }
  os << "roles    hot " << to_string(r.hot_role) << ", cold " << to_string(r.cold_role) << "\n";
  if (r.hot_channel)
    os << "hottest hot channel  (" << r.hot_channel->hi << "," << r.hot_channel->lo
       << ")  T = " << g(effective_temperature(*r.hot_channel)) << "\n";
  if (r.cold_channel)
    os << "coldest cold channel (" << r.cold_channel->hi << "," << r.cold_channel->lo
       << ")  T = " << g(effective_temperature(*r.cold_channel)) << "\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string heat_text(const HeatReport& r) {
  std::ostringstream os;
  os << "q_hot       " << g(r.q_hot) << "\nq_cold      " << g(r.q_cold) << "\nwork        "
     << g(r.work) << "\nefficiency  " << (r.efficiency ? g(*r.efficiency) : "NOT_APPLICABLE")
     << "\n";
  const auto tags = channel_sign_analysis(r);
  for (std::size_t k = 0; k < r.channels.size(); ++k) {
    const auto& c = r.channels[k];
    os << "  (" << c.index.m << "," << c.index.n << "," << c.index.p << "," << c.index.q
       << ")  flux " << g(c.flux) << "  q_hot " << g(c.q_hot) << "  q_cold " << g(c.q_cold)
       << "  " << to_string(tags[k]) << "\n";
  }
  return os.str();
}

json reservoir_json(const LoadedReservoir& r) {
  json levels = json::array();
  for (const auto& lv : r.diagonal.levels())
    levels.push_back({{"energy", number(lv.energy)}, {"population", number(lv.population)}});
  return {{"label", r.diagonal.label()},
          {"commutator_norm", number(r.stationarity.commutator_norm)},
          {"levels", levels}};
}

LoadedReservoir load_reservoir(const std::string& path) {
  try {
    return parse_reservoir(read_json_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ":" + e.field(), e.what());
  }
}

Outcome cmd_decompose(const Options& o) {
  const auto res = load_reservoir(o.reservoir_file);
  const auto channels = enumerate_channels(res.diagonal);
  const auto role = classify_reservoir(channels);
  Outcome out;
  out.inputs = {{"reservoir", o.reservoir_file}};
  json list = json::array();
  for (const auto& ch : channels) list.push_back(to_json(ch));
  out.payload = {{"reservoir", reservoir_json(res)},
                 {"channels", list},
                 {"role", std::string(to_string(role))},
                 {"warnings", empty_level_warnings(channels, "reservoir")}};
  out.human = channel_table(channels) + "role: " + std::string(to_string(role)) + "\n";
  return out;
}

Outcome cmd_bound(const Options& o) {
  const auto hot = load_reservoir(o.hot_file);
  const auto cold = load_reservoir(o.cold_file);
  const auto report = generalized_bound(hot.diagonal, cold.diagonal);
  Outcome out;
  out.inputs = {{"hot", o.hot_file}, {"cold", o.cold_file}};
  out.payload = {{"bound", to_json(report)}};
  out.human = bound_text(report);
  if (!report.applicable) {
    out.code = kHypothesesFail;
    out.payload["saturating_engine"] = nullptr;
    return out;
  }
  try {
    const auto engine = saturating_engine(hot.diagonal, cold.diagonal, report);
    const auto heat = heat_flows(hot.diagonal, cold.diagonal, engine);
    out.payload["saturating_engine"] = to_json(engine);
    out.payload["saturating_efficiency"] =
        heat.efficiency ? number(*heat.efficiency) : json("NOT_APPLICABLE");
    out.human += "saturating engine efficiency " +
                 (heat.efficiency ? g(*heat.efficiency) : std::string("NOT_APPLICABLE")) + "\n";
  } catch (const HypothesisError& e) {
    out.payload["saturating_engine"] = nullptr;
    out.payload["saturating_engine_error"] = e.what();
    out.human += std::string("saturating engine unavailable: ") + e.what() + "\n";
  }
  return out;
}

Outcome cmd_simulate(const Options& o) {
  const auto hot = load_reservoir(o.hot_file);
  const auto cold = load_reservoir(o.cold_file);
  CouplingOperator engine;
  try {
    engine = parse_engine(read_json_file(o.engine_file));
  } catch (const InputError& e) {
    throw InputError(o.engine_file + ":" + e.field(), e.what());
  }
  const auto heat = heat_flows(hot.diagonal, cold.diagonal, engine);
  const auto bound = generalized_bound(hot.diagonal, cold.diagonal);

  Outcome out;
  out.inputs = {{"hot", o.hot_file}, {"cold", o.cold_file}, {"engine", o.engine_file}};
  out.payload = {{"heat", to_json(heat)}, {"bound", to_json(bound)}, {"tolerance", o.tol}};
  out.human = heat_text(heat) + bound_text(bound);

  bool violation = false;
  if (bound.applicable && heat.efficiency && *heat.efficiency > bound.eta_max + o.tol) {
    violation = true;
    out.code = kInvariantBreach;
    out.human += "INVARIANT BREACH: efficiency " + g(*heat.efficiency) + " exceeds eta_max " +
                 g(bound.eta_max) + " + " + g(o.tol) + "\n";
  }
  for (auto tag : channel_sign_analysis(heat)) {
    // Forbidden tags only signal a breach when both reservoirs are thermal.
    if (hot.diagonal.gibbs_temperature() && cold.diagonal.gibbs_temperature() &&
        *hot.diagonal.gibbs_temperature() > *cold.diagonal.gibbs_temperature() &&
        (tag == ChannelSign::ForbiddenBothPositive || tag == ChannelSign::ForbiddenReversed)) {
      violation = true;
      out.code = kInvariantBreach;
      out.human += "INVARIANT BREACH: forbidden channel sign between thermal reservoirs\n";
      break;
    }
  }
  out.payload["violation"] = violation;
  return out;
}

Outcome cmd_verify(const Options& o) {
  const auto hot = load_reservoir(o.hot_file);
  const auto cold = load_reservoir(o.cold_file);
  const auto bound = generalized_bound(hot.diagonal, cold.diagonal);
  Outcome out;
  out.inputs = {{"hot", o.hot_file}, {"cold", o.cold_file}, {"trials", o.trials}};
  out.payload = {{"bound", to_json(bound)}};
  if (!bound.applicable) {
    out.code = kHypothesesFail;
    out.payload["sweep"] = nullptr;
    out.human = bound_text(bound);
    return out;
  }
  const auto s =
      sweep_random_engines(hot.diagonal, cold.diagonal, o.trials, o.seed, bound.eta_max, o.tol);
  out.payload["sweep"] = to_json(s);
  std::ostringstream os;
  os << "eta_max         " << g(bound.eta_max) << "\ntrials          " << s.trials
     << "\napplicable      " << s.applicable << "\nmax efficiency  " << g(s.max_efficiency)
     << "\nviolations      " << s.violations << "\n";
  out.human = os.str();
  if (s.violations > 0) out.code = kInvariantBreach;
  return out;
}

Outcome cmd_oracle(const Options& o) {
  LoadedProtocol proto = [&] {
    try {
      return parse_protocol(read_json_file(o.protocol_file));
    } catch (const InputError& e) {
      throw InputError(o.protocol_file + ":" + e.field(), e.what());
    }
  }();
  const auto hot = load_reservoir(o.hot_file);
  const auto cold = load_reservoir(o.cold_file);
  const std::size_t steps =
      o.steps > 0 ? o.steps : suggested_steps(proto.protocol, hot.diagonal, cold.diagonal);

  Outcome out;
  out.inputs = {{"protocol", o.protocol_file}, {"hot", o.hot_file}, {"cold", o.cold_file},
                {"steps", steps}};

  // First-order term on a uniform grid, including both endpoints.
  constexpr int kSamples = 17;
  double first_order = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double t = proto.protocol.t_final() * k / (kSamples - 1);
    const auto r = first_order_rate(proto.protocol, hot.spec, cold.spec, proto.lambda, t);
    first_order = std::max({first_order, r.hot, r.cold});
  }

  const auto cmp =
      compare_with_closed_form(proto.protocol, hot.diagonal, cold.diagonal, proto.lambda, steps);
  const bool first_order_ok = first_order <= 1e-12;
  out.payload = {{"lambda", proto.lambda},
                 {"integrated", {{"q_hot", number(cmp.integrated.q_hot)},
                                 {"q_cold", number(cmp.integrated.q_cold)},
                                 {"q_hot_coarse", number(cmp.integrated.q_hot_coarse)},
                                 {"q_cold_coarse", number(cmp.integrated.q_cold_coarse)},
                                 {"steps", cmp.integrated.steps}}},
                 {"closed_form", to_json(cmp.closed_form)},
                 {"discrepancy_hot", number(cmp.discrepancy_hot)},
                 {"discrepancy_cold", number(cmp.discrepancy_cold)},
                 {"tolerance_hot", number(oracle_tolerance(cmp.closed_form.q_hot))},
                 {"tolerance_cold", number(oracle_tolerance(cmp.closed_form.q_cold))},
                 {"first_order_max", number(first_order)},
                 {"agree", cmp.agree && first_order_ok}};
  std::ostringstream os;
  os << "             integrated               closed form              discrepancy\n"
     << "q_hot   " << std::left << std::setw(25) << g(cmp.integrated.q_hot) << std::setw(25)
     << g(cmp.closed_form.q_hot) << g(cmp.discrepancy_hot) << "\nq_cold  " << std::setw(25)
     << g(cmp.integrated.q_cold) << std::setw(25) << g(cmp.closed_form.q_cold)
     << g(cmp.discrepancy_cold) << "\nfirst-order max " << g(first_order) << "\n"
     << (cmp.agree && first_order_ok ? "agree\n" : "MISMATCH\n");
  out.human = os.str();
  if (!cmp.agree || !first_order_ok) out.code = kInvariantBreach;
  return out;
}

Outcome cmd_scully(const Options& o) {
  const ScullyParams params{o.pa, o.pb, o.rho_bc, o.phi, o.omega};
  const auto b = scully_bound(params);
  Outcome out;
  out.inputs = {{"p_a", o.pa}, {"p_b", o.pb}, {"rho_bc", o.rho_bc}, {"phi", o.phi},
                {"omega", o.omega}};
  const auto hot = diagonalize_reservoir(scully_reservoir(params));
  json channels = json::array();
  for (const auto& ch : enumerate_channels(hot)) channels.push_back(to_json(ch));
  out.payload = {{"applicable", b.applicable},
                 {"diagnostic", b.diagnostic},
                 {"hot_populations", hot.populations()},
                 {"hot_channels", channels},
                 {"bound", to_json(b.report)}};
  std::ostringstream os;
  os << "hot populations " << g(hot[0].population) << " " << g(hot[1].population) << " "
     << g(hot[2].population) << "\n"
     << channel_table(enumerate_channels(hot));
  if (b.applicable) {
    out.payload["closed_form"] = number(b.closed_form);
    out.payload["pipeline"] = number(b.pipeline);
    out.payload["small_coherence"] = number(b.small_coherence);
    os << "exact bound      " << g(b.closed_form) << "\npipeline bound   " << g(b.pipeline)
       << "\nsmall coherence  " << g(b.small_coherence) << "\n";
  } else {
    out.code = kHypothesesFail;
    os << "not applicable: " << b.diagnostic << "\n";
  }
  out.human = os.str();
  return out;
}

Outcome cmd_coherent_pair(const Options& o) {
  const auto cold = diagonalize_reservoir(coherent_pair(o.sigma));
  const auto channel = enumerate_channels(cold).at(0);
  const std::vector<double> hot_e{0.0, o.hot_gap};
  if (!(o.hot_gap > 0.0)) throw InputError("--hot-gap", "must be > 0");
  const auto hot = thermal_reservoir(hot_e, o.hot_temperature, "hot");
  const auto bound = generalized_bound(hot, cold);

  Outcome out;
  out.inputs = {{"sigma", o.sigma}, {"hot_temperature", o.hot_temperature},
                {"hot_gap", o.hot_gap}, {"pairs", o.pairs}};
  const double drop = coherence_entropy_drop(o.sigma);
  const double work = max_extractable_work(o.hot_temperature, o.pairs, o.sigma);
  out.payload = {{"populations", cold.populations()},
                 {"channel", to_json(channel)},
                 {"entropy_drop", number(drop)},
                 {"max_extractable_work", number(work)},
                 {"bound", to_json(bound)}};
  std::ostringstream os;
  os << "populations           " << g(cold[0].population) << " " << g(cold[1].population)
     << "\nchannel kind          " << to_string(channel.kind) << "\nentropy drop (nats)   "
     << g(drop) << "\nmax extractable work  " << g(work) << "\n"
     << bound_text(bound);
  if (bound.applicable) {
    try {
      const auto heat = heat_flows(hot, cold, saturating_engine(hot, cold, bound));
      out.payload["saturating_efficiency"] =
          heat.efficiency ? number(*heat.efficiency) : json("NOT_APPLICABLE");
      out.payload["saturating_q_hot"] = number(heat.q_hot);
      os << "saturating engine efficiency " << g(heat.efficiency) << " (q_hot " << g(heat.q_hot)
         << ")\n";
    } catch (const HypothesisError& e) {
      out.payload["saturating_efficiency"] = nullptr;
      out.payload["saturating_engine_error"] = e.what();
      os << "saturating engine unavailable: " << e.what() << "\n";
    }
  }
  out.human = os.str();
  return out;
}

json error_json(const std::string& kind, const std::string& message, const std::string& field) {
  json e{{"kind", kind}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return e;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Efficiency bounds for engines between nonthermal stationary reservoirs",
               "carnot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CARNOT_VERSION);
  app.add_flag("--json", o.json_mode, "Emit the machine-readable JSON report");
  app.add_option("--seed", o.seed, "Seed for random engine sweeps");
  app.add_option("--trials", o.trials, "Number of random engines in a sweep");
  app.add_option("--tol", o.tol, "Tolerance on bound violations")->check(CLI::NonNegativeNumber);

  auto* decompose = app.add_subcommand("decompose", "Channel table of one reservoir");
  decompose->add_option("reservoir", o.reservoir_file, "Reservoir JSON file")->required();

  auto* bound = app.add_subcommand("bound", "Generalized efficiency bound for a reservoir pair");
  bound->add_option("hot", o.hot_file)->required();
  bound->add_option("cold", o.cold_file)->required();

  auto* simulate = app.add_subcommand("simulate", "Heat flows of an engine");
  simulate->add_option("hot", o.hot_file)->required();
  simulate->add_option("cold", o.cold_file)->required();
  simulate->add_option("engine", o.engine_file)->required();

  auto* verify = app.add_subcommand("verify", "Random-engine sweep against the bound");
  verify->add_option("hot", o.hot_file)->required();
  verify->add_option("cold", o.cold_file)->required();

  auto* oracle = app.add_subcommand("oracle", "Time-integrated heat versus the closed form");
  oracle->add_option("protocol", o.protocol_file)->required();
  oracle->add_option("hot", o.hot_file)->required();
  oracle->add_option("cold", o.cold_file)->required();
  oracle->add_option("--steps", o.steps, "Quadrature steps (default: automatic)");

  auto* scully = app.add_subcommand("scully", "Three-level coherent gas bound");
  scully->add_option("--pa", o.pa, "Upper-level population")->required();
  scully->add_option("--pb", o.pb, "Population of each lower level")->required();
  scully->add_option("--rho-bc", o.rho_bc, "Lower-level coherence magnitude")->required();
  scully->add_option("--omega", o.omega, "Upper-level energy")->required();
  scully->add_option("--phi", o.phi, "Coherence phase");

  auto* pair = app.add_subcommand("coherent-pair", "Degenerate coherent pair as a cold drain");
  pair->add_option("--sigma", o.sigma, "Coherence in [0, 1]")->required();
  pair->add_option("--hot-temperature", o.hot_temperature, "Thermal hot reservoir temperature");
  pair->add_option("--hot-gap", o.hot_gap, "Thermal hot reservoir gap");
  pair->add_option("--pairs", o.pairs, "Number of coherent pairs for the work bound");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> argv_store{"carnot"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  json meta{{"command", ""}, {"seed", o.seed}, {"version", CARNOT_VERSION}};
  auto emit_error = [&](int code, const std::string& kind, const std::string& message,
                        const std::string& field) {
    if (o.json_mode) {
      out << json{{"meta", meta}, {"error", error_json(kind, message, field)}}.dump(2) << "\n";
    } else {
      err << "error (" << kind << (field.empty() ? "" : ", " + field) << "): " << message << "\n";
    }
    return code;
  };

  Outcome result;
  try {
    if (*decompose) {
      meta["command"] = "decompose";
      result = cmd_decompose(o);
    } else if (*bound) {
      meta["command"] = "bound";
      result = cmd_bound(o);
    } else if (*simulate) {
      meta["command"] = "simulate";
      result = cmd_simulate(o);
    } else if (*verify) {
      meta["command"] = "verify";
      result = cmd_verify(o);
    } else if (*oracle) {
      meta["command"] = "oracle";
      result = cmd_oracle(o);
    } else if (*scully) {
      meta["command"] = "scully";
      result = cmd_scully(o);
    } else if (*pair) {
      meta["command"] = "coherent-pair";
      result = cmd_coherent_pair(o);
    }
  } catch (const InputError& e) {
    return emit_error(kInputError, "input", e.what(), e.field());
  } catch (const InvariantError& e) {
    return emit_error(kInputError, "invariant", e.what(), e.invariant());
  } catch (const StationarityError& e) {
    return emit_error(kInputError, "invariant", e.what(), "stationarity");
  } catch (const StructuralError& e) {
    return emit_error(kInputError, "structural", e.what(), "");
  } catch (const CanonicalizationError& e) {
    return emit_error(kInputError, "canonicalization", e.what(), "");
  } catch (const DomainError& e) {
    return emit_error(kInputError, "domain", e.what(), "");
  } catch (const HypothesisError& e) {
    return emit_error(kHypothesesFail, "hypothesis", e.what(), "");
  } catch (const ConvergenceError& e) {
    return emit_error(kInvariantBreach, "convergence", e.what(), "");
  } catch (const ConsistencyError& e) {
    return emit_error(kInvariantBreach, "consistency", e.what(), "");
  }

  meta["inputs"] = result.inputs;
  if (o.json_mode) {
    out << json{{"meta", meta}, {"payload", result.payload}}.dump(2) << "\n";
  } else {
    out << result.human;
  }
  return result.code;
}

}  // namespace carnot::cli
