#pragma once

// JSON input files and report serialization for the carnot command line.
//
// Reservoir: {"label", "energies": [..], "diag": [..],
//             "offdiag": [{"i", "j", "re", "im"}]}  or  {"label", "energies", "temperature"}
// Engine:    {"lambda", "couplings": [{"m", "n", "p", "q", "weight"}]}
// Protocol:  {"envelope", "omega", "t_final", "amplitudes": [{"m", "n", "p", "q", "re", "im"}],
//             optional "lambda"}

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "carnot/carnot.hpp"

namespace carnot::cli {

using json = nlohmann::json;

/// Malformed or missing input; `field` is a JSON path such as "offdiag[1].re".
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct LoadedReservoir {
  ReservoirSpec spec;
  DiagonalReservoir diagonal;
  StationarityCheck stationarity;
};

struct LoadedProtocol {
  DrivingProtocol protocol;
  double lambda;
};

json read_json_file(const std::filesystem::path& path);

LoadedReservoir parse_reservoir(const json& doc);
CouplingOperator parse_engine(const json& doc);
LoadedProtocol parse_protocol(const json& doc);

/// Finite values as numbers; infinities and NaN as "inf", "-inf", "nan".
json number(double x);
json number(const std::optional<double>& x);

json to_json(const TransitionChannel& ch);
json to_json(const HeatReport& report);
json to_json(const BoundReport& report);
json to_json(const CouplingOperator& engine);
json to_json(const SweepSummary& summary);

}  // namespace carnot::cli
