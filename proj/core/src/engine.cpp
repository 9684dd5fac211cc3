#include "carnot/engine.hpp"

#include <cmath>
#include <string>

#include "carnot/errors.hpp"
#include "carnot/summation.hpp"

namespace carnot {

namespace {

std::string tuple_string(const CouplingIndex& i) {
  return "(" + std::to_string(i.m) + "," + std::to_string(i.n) + "," + std::to_string(i.p) + "," +
         std::to_string(i.q) + ")";
}

}  // namespace

CouplingOperator::CouplingOperator(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("coupling strength lambda must be finite and > 0");
}

void CouplingOperator::add(const CouplingIndex& index, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw DomainError("coupling weight for " + tuple_string(index) + " must be finite and >= 0");
  if (!weights_.emplace(index, weight).second)
    throw StructuralError("duplicate coupling tuple " + tuple_string(index));
}

HeatReport heat_flows(const DiagonalReservoir& hot, const DiagonalReservoir& cold,
                      const CouplingOperator& engine) {
  const double lam2 = engine.lambda() * engine.lambda();
  HeatReport report;
  report.channels.reserve(engine.size());

  CompensatedSum q_hot;
  CompensatedSum q_cold;
  // std::map iterates in sorted tuple order.
  for (const auto& [idx, w] : engine.weights()) {
    if (idx.m >= hot.size() || idx.n >= hot.size() || idx.p >= cold.size() ||
        idx.q >= cold.size()) {
      throw StructuralError("coupling tuple " + tuple_string(idx) + " is out of range");
    }
    const Level& hm = hot[idx.m];
    const Level& hn = hot[idx.n];
    const Level& cp = cold[idx.p];
    const Level& cq = cold[idx.q];
    const double hot_gap = hm.energy - hn.energy;
    if (!(hot_gap > hot.degeneracy_tol()))
      throw CanonicalizationError("coupling tuple " + tuple_string(idx) +
                                  " does not satisfy E_H^m > E_H^n");

    ChannelContribution c;
    c.index = idx;
    c.flux = hm.population * cp.population - hn.population * cq.population;
    const double scale = lam2 * w * c.flux;
    c.q_hot = scale * hot_gap;
    c.q_cold = scale * (cp.energy - cq.energy);
    q_hot += c.q_hot;
    q_cold += c.q_cold;
    report.channels.push_back(c);
  }

  report.q_hot = q_hot.value();
  report.q_cold = q_cold.value();
  report.work = report.q_hot + report.q_cold;
  if (report.q_hot > 0.0) report.efficiency = report.work / report.q_hot;
  return report;
}

std::vector<CouplingIndex> canonical_tuples(const DiagonalReservoir& hot,
                                            const DiagonalReservoir& cold) {
  std::vector<CouplingIndex> out;
  for (std::size_t m = 0; m < hot.size(); ++m)
    for (std::size_t n = 0; n < hot.size(); ++n) {
      if (!(hot[m].energy - hot[n].energy > hot.degeneracy_tol())) continue;
      for (std::size_t p = 0; p < cold.size(); ++p)
        for (std::size_t q = 0; q < cold.size(); ++q) out.push_back({m, n, p, q});
    }
  return out;
}

std::string_view to_string(ChannelSign sign) {
  switch (sign) {
    case ChannelSign::Extracting: return "EXTRACTING";
    case ChannelSign::Dissipating: return "DISSIPATING";
    case ChannelSign::ForbiddenBothPositive: return "FORBIDDEN_BOTH_POSITIVE";
    case ChannelSign::ForbiddenReversed: return "FORBIDDEN_REVERSED";
  }
  return "UNKNOWN";
}

ChannelSign classify_contribution(const ChannelContribution& c) {
  if (c.q_hot > 0.0 && c.q_cold > 0.0) return ChannelSign::ForbiddenBothPositive;
  if (c.q_hot > 0.0 && c.q_hot > std::fabs(c.q_cold)) return ChannelSign::Extracting;
  if (c.q_cold > 0.0 && c.q_hot < 0.0 && c.q_cold > std::fabs(c.q_hot))
    return ChannelSign::ForbiddenReversed;
  return ChannelSign::Dissipating;
}

std::vector<ChannelSign> channel_sign_analysis(const HeatReport& report) {
  std::vector<ChannelSign> out;
  out.reserve(report.channels.size());
  for (const auto& c : report.channels) out.push_back(classify_contribution(c));
  return out;
}

double single_channel_efficiency(double hot_gap, double cold_gap) {
  if (!(hot_gap > 0.0) || !std::isfinite(hot_gap))
    throw DomainError("single_channel_efficiency: hot_gap must be > 0");
  if (!(cold_gap >= 0.0) || !std::isfinite(cold_gap))
    throw DomainError("single_channel_efficiency: cold_gap must be >= 0");
  return 1.0 - cold_gap / hot_gap;
}

}  // namespace carnot
