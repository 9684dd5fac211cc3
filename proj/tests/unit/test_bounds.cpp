#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "carnot/bounds.hpp"
#include "carnot/coherence.hpp"
#include "carnot/errors.hpp"
#include "support/generators.hpp"

namespace carnot {
namespace {

DiagonalReservoir thermal(std::vector<double> e, double t) { return thermal_reservoir(e, t); }

TEST(GeneralizedBound, ThermalPairReducesToCarnot) {
  const auto r = generalized_bound(thermal({0.0, 1.0, 2.5}, 2.0), thermal({0.0, 0.4}, 1.0));
  ASSERT_TRUE(r.applicable);
  EXPECT_NEAR(r.eta_max, 0.5, 1e-15);
  EXPECT_EQ(r.regime, BoundRegime::ThermalLimit);
  EXPECT_EQ(r.reason, BoundFailure::None);
}

TEST(GeneralizedBound, CoherentPairColdSideGivesUnit) {
  for (double sigma : {0.1, 0.5, 0.9, 1.0}) {
    const auto r =
        generalized_bound(thermal({0.0, 1.0}, 0.7), diagonalize_reservoir(coherent_pair(sigma)));
    ASSERT_TRUE(r.applicable) << sigma;
    EXPECT_EQ(r.eta_max, 1.0);
    EXPECT_EQ(r.regime, BoundRegime::Unit);
    EXPECT_EQ(r.temperature_ratio, 0.0);
  }
}

TEST(GeneralizedBound, IncoherentPairHasNoEligibleColdChannel) {
  const auto r =
      generalized_bound(thermal({0.0, 1.0}, 0.7), diagonalize_reservoir(coherent_pair(0.0)));
  EXPECT_FALSE(r.applicable);
  EXPECT_EQ(r.reason, BoundFailure::NoEligibleChannel);
  EXPECT_TRUE(std::isnan(r.eta_max));
}

TEST(GeneralizedBound, ScullyGas) {
  const ScullyParams params{0.2, 0.4, 0.1, 0.0, 1.0};
  const auto hot = diagonalize_reservoir(scully_reservoir(params));
  const auto r = generalized_bound(hot, scully_cold_reservoir(params));
  ASSERT_TRUE(r.applicable);
  EXPECT_NEAR(r.eta_max, 0.41503749927884382, 1e-15);
  EXPECT_NEAR(r.eta_max, 1.0 - std::log(0.3 / 0.2) / std::log(0.4 / 0.2), 1e-15);
  EXPECT_EQ(r.regime, BoundRegime::Nonthermal);
  // The cold gas's degenerate channel has equal populations.
  const auto cold_channels = enumerate_channels(scully_cold_reservoir(params));
  EXPECT_EQ(cold_channels[2].kind, ChannelKind::Inert);
}

TEST(GeneralizedBound, InversionIsReported) {
  const DiagonalReservoir inverted({{0.0, 0.3}, {1.0, 0.7}});
  const auto ok = thermal({0.0, 1.0}, 1.0);
  const auto hot_side = generalized_bound(inverted, ok);
  EXPECT_FALSE(hot_side.applicable);
  EXPECT_EQ(hot_side.reason, BoundFailure::Inversion);
  EXPECT_EQ(hot_side.hot_role, ReservoirRole::WorkReservoir);
  EXPECT_NE(hot_side.diagnostic.find("WORK_RESERVOIR"), std::string::npos);
  EXPECT_EQ(generalized_bound(ok, inverted).reason, BoundFailure::Inversion);
}

TEST(GeneralizedBound, BidirectionalWhenColdSideIsHotter) {
  const auto r = generalized_bound(thermal({0.0, 1.0}, 1.0), thermal({0.0, 1.0}, 2.0));
  EXPECT_FALSE(r.applicable);
  EXPECT_EQ(r.reason, BoundFailure::Bidirectional);
  EXPECT_NEAR(r.temperature_ratio, 2.0, 1e-14);
}

TEST(GeneralizedBound, EqualTemperaturesGiveZero) {
  const auto r = generalized_bound(thermal({0.0, 1.0}, 1.5), thermal({0.0, 0.3, 2.0}, 1.5));
  ASSERT_TRUE(r.applicable);
  EXPECT_NEAR(r.eta_max, 0.0, 1e-15);
}

TEST(GeneralizedBound, InfiniteTemperatureHotChannel) {
  const DiagonalReservoir hot({{0.0, 0.5}, {1.0, 0.5}});
  const auto r = generalized_bound(hot, thermal({0.0, 1.0}, 1.0));
  ASSERT_TRUE(r.applicable);
  EXPECT_EQ(r.eta_max, 1.0);
  EXPECT_EQ(r.regime, BoundRegime::Unit);
}

TEST(GeneralizedBound, GroundStateColdReservoirIsAtZeroTemperature) {
  const DiagonalReservoir cold({{0.0, 1.0}, {1.0, 0.0}});
  const auto r = generalized_bound(thermal({0.0, 1.0}, 1.0), cold);
  ASSERT_TRUE(r.applicable);
  EXPECT_EQ(r.eta_max, 1.0);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(SaturatingEngine, UnitEfficiencyAgainstCoherentPair) {
  const auto hot = thermal({0.0, 1.0}, 2.0);
  const auto cold = diagonalize_reservoir(coherent_pair(0.5));
  const auto report = generalized_bound(hot, cold);
  const auto engine = saturating_engine(hot, cold, report);
  ASSERT_EQ(engine.size(), 1u);
  const auto r = heat_flows(hot, cold, engine);
  EXPECT_GT(r.q_hot, 0.0);
  EXPECT_EQ(r.q_cold, 0.0);
  EXPECT_EQ(*r.efficiency, 1.0);
}

TEST(SaturatingEngine, ThermalEfficiencyApproachesCarnotFromBelow) {
  // Hot gap 2 at T_H = 2 against cold gap c > 1 at T_C = 1: efficiency 1 - c/2
  // rises to the Carnot value 0.5 as c -> 1, where the flux factor vanishes.
  double previous = -1.0;
  for (double c : {1.5, 1.2, 1.1, 1.01, 1.001}) {
    const auto hot = thermal({0.0, 2.0}, 2.0);
    const auto cold = thermal({0.0, c}, 1.0);
    const auto report = generalized_bound(hot, cold);
    ASSERT_TRUE(report.applicable);
    const auto r = heat_flows(hot, cold, saturating_engine(hot, cold, report));
    ASSERT_TRUE(r.efficiency.has_value());
    EXPECT_NEAR(*r.efficiency, 1.0 - c / 2.0, 1e-14);
    EXPECT_LE(*r.efficiency, report.eta_max + 1e-12);
    EXPECT_GT(*r.efficiency, previous);
    previous = *r.efficiency;
  }
  EXPECT_NEAR(previous, 0.5, 1e-3);
}

TEST(SaturatingEngine, ZeroFluxIsAConstructionError) {
  const auto hot = thermal({0.0, 2.0}, 2.0);
  const auto cold = thermal({0.0, 1.0}, 1.0);
  const auto report = generalized_bound(hot, cold);
  ASSERT_TRUE(report.applicable);
  EXPECT_THROW(saturating_engine(hot, cold, report), HypothesisError);

  BoundReport not_applicable;
  EXPECT_THROW(saturating_engine(hot, cold, not_applicable), HypothesisError);
}

TEST(Sweep, ZeroTrialsIsVacuous) {
  const auto s = engine_sweep_verify(thermal({0.0, 1.0}, 2.0), thermal({0.0, 1.0}, 1.0), 0, 7);
  EXPECT_EQ(s.trials, 0u);
  EXPECT_EQ(s.applicable, 0u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_FALSE(s.max_efficiency.has_value());
}

TEST(Sweep, RefusesWhenBoundNotApplicable) {
  EXPECT_THROW(engine_sweep_verify(thermal({0.0, 1.0}, 1.0), thermal({0.0, 1.0}, 2.0), 10, 1),
               HypothesisError);
}

TEST(Sweep, DeterministicInSeed) {
  const auto hot = thermal({0.0, 0.8, 2.1}, 3.0);
  const auto cold = thermal({0.0, 0.5, 1.2}, 1.0);
  const auto a = engine_sweep_verify(hot, cold, 500, 42);
  const auto b = engine_sweep_verify(hot, cold, 500, 42);
  EXPECT_EQ(a.applicable, b.applicable);
  EXPECT_EQ(a.max_efficiency, b.max_efficiency);
}

TEST(Sweep, AgreesWithExplicitRandomEngines) {
  const auto hot = thermal({0.0, 0.8, 2.1}, 50.0);
  const auto cold = thermal({0.0, 0.5, 1.2}, 0.2);
  const auto s = sweep_random_engines(hot, cold, 200, 9, 1.0);
  std::size_t applicable = 0;
  double best = -INFINITY;
  for (std::size_t t = 0; t < 200; ++t) {
    const auto r = heat_flows(hot, cold, random_engine(hot, cold, 9, t));
    if (!r.efficiency) continue;
    ++applicable;
    best = std::max(best, *r.efficiency);
  }
  EXPECT_EQ(s.applicable, applicable);
  ASSERT_TRUE(s.max_efficiency.has_value());
  EXPECT_NEAR(*s.max_efficiency, best, 1e-12);
}

TEST(Sweep, ScullyGasAgainstItsIncoherentTwin) {
  const ScullyParams params{0.2, 0.4, 0.1, 0.0, 1.0};
  const auto hot = diagonalize_reservoir(scully_reservoir(params));
  const auto s = engine_sweep_verify(hot, scully_cold_reservoir(params), 10000, 11);
  EXPECT_EQ(s.violations, 0u);
}

// Two canonical tuples that beat the bound while both reservoirs satisfy its
// hypotheses. Tuple A extracts through the hottest hot channel; tuple B runs
// backwards through a colder hot channel and takes heat out of the cold side
// through a wider cold gap. The combination is more efficient than A alone.
TEST(GeneralizedBound, TwoTupleEngineExceedsBound) {
  const double p1 = std::exp(-0.5);
  const double p2 = p1 * std::exp(-0.9);
  const double z = 1.0 + p1 + p2;
  const DiagonalReservoir hot({{0.0, 1.0 / z}, {1.0, p1 / z}, {2.0, p2 / z}});
  const auto cold = thermal({0.0, 0.55, 0.7}, 1.0);

  const auto report = generalized_bound(hot, cold);
  ASSERT_TRUE(report.applicable);
  EXPECT_NEAR(report.eta_max, 0.5, 1e-12);

  const CouplingIndex a{1, 0, 0, 1};
  const CouplingIndex b{2, 1, 0, 2};
  auto flux = [&](const CouplingIndex& i) {
    return hot[i.m].population * cold[i.p].population - hot[i.n].population * cold[i.q].population;
  };
  ASSERT_GT(flux(a), 0.0);
  ASSERT_LT(flux(b), 0.0);
  CouplingOperator engine(1.0);
  engine.add(a, 1.0 / flux(a));
  engine.add(b, 0.5 / -flux(b));
  const auto r = heat_flows(hot, cold, engine);
  EXPECT_NEAR(r.q_hot, 0.5, 1e-12);
  EXPECT_NEAR(r.q_cold, -0.2, 1e-12);
  ASSERT_TRUE(r.efficiency.has_value());
  EXPECT_NEAR(*r.efficiency, 0.6, 1e-12);
  EXPECT_GT(*r.efficiency, report.eta_max);
}

// Properties over random reservoirs.

DiagonalReservoir shifted(const DiagonalReservoir& r, double c) {
  auto levels = r.levels();
  for (auto& lv : levels) lv.energy += c;
  return DiagonalReservoir(levels);
}

DiagonalReservoir permuted(const DiagonalReservoir& r, testing::Rng& rng) {
  auto levels = r.levels();
  std::shuffle(levels.begin(), levels.end(), rng);
  return DiagonalReservoir(levels);
}

TEST(BoundProperties, ThermalPairsMatchCarnotExactly) {
  testing::Rng rng(401);
  for (int trial = 0; trial < 500; ++trial) {
    const double tc = testing::uniform(rng, 0.1, 5.0);
    const double th = tc * testing::uniform(rng, 1.0, 10.0);
    const auto r = generalized_bound(
        testing::random_thermal(rng, testing::uniform_count(rng, 2, 6), th),
        testing::random_thermal(rng, testing::uniform_count(rng, 2, 6), tc));
    ASSERT_TRUE(r.applicable);
    EXPECT_NEAR(r.eta_max, 1.0 - tc / th, 1e-12);
    EXPECT_EQ(r.regime, BoundRegime::ThermalLimit);
  }
}

TEST(BoundProperties, ShiftAndRelabelInvariance) {
  testing::Rng rng(402);
  int applicable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto hot = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5), 1.0);
    const auto cold = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5), 3.0);
    const auto base = generalized_bound(hot, cold);
    const auto moved = generalized_bound(shifted(hot, testing::uniform(rng, -5.0, 5.0)),
                                         shifted(cold, testing::uniform(rng, -5.0, 5.0)));
    const auto relabeled = generalized_bound(permuted(hot, rng), permuted(cold, rng));
    EXPECT_EQ(base.applicable, moved.applicable);
    EXPECT_EQ(base.applicable, relabeled.applicable);
    if (!base.applicable) continue;
    ++applicable;
    EXPECT_NEAR(base.eta_max, moved.eta_max, 1e-12);
    EXPECT_NEAR(base.eta_max, relabeled.eta_max, 1e-12);
  }
  EXPECT_GT(applicable, 50);
}

TEST(BoundProperties, AddingLevelsNeverLowersBound) {
  testing::Rng rng(403);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto hot = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 4), 1.0);
    const auto cold = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 4), 3.0);
    const auto base = generalized_bound(hot, cold);
    if (!base.applicable) continue;

    // New level with its own population; existing ratios are kept.
    auto extend = [&](const DiagonalReservoir& r) {
      auto levels = r.levels();
      const double e = testing::uniform(rng, 0.0, 4.0);
      const double share = testing::uniform(rng, 0.01, 0.3);
      for (auto& lv : levels) lv.population *= 1.0 - share;
      levels.push_back({e, share});
      return DiagonalReservoir(levels);
    };
    const auto more_hot = generalized_bound(extend(hot), cold);
    const auto more_cold = generalized_bound(hot, extend(cold));
    if (more_hot.applicable) {
      ++compared;
      EXPECT_GE(more_hot.eta_max, base.eta_max - 1e-12);
    }
    if (more_cold.applicable) {
      ++compared;
      EXPECT_GE(more_cold.eta_max, base.eta_max - 1e-12);
    }
  }
  EXPECT_GT(compared, 50);
}

TEST(BoundProperties, UnitIffColdExtremumIsAtZeroTemperature) {
  testing::Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const auto hot = testing::random_thermal(rng, testing::uniform_count(rng, 2, 4),
                                             testing::uniform(rng, 0.5, 5.0));
    const auto cold = diagonalize_reservoir(
        testing::random_stationary_spec(rng, testing::uniform_count(rng, 2, 5)));
    const auto r = generalized_bound(hot, cold);
    if (!r.applicable) continue;
    EXPECT_GE(r.eta_max, 0.0);
    EXPECT_LE(r.eta_max, 1.0);
    const bool zero_cold = *ranking_beta(*r.cold_channel) == INFINITY;
    EXPECT_EQ(r.eta_max == 1.0, zero_cold);
  }
}

TEST(BoundProperties, SaturatingEngineRespectsBound) {
  testing::Rng rng(405);
  int built = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto hot = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5), 1.0);
    const auto cold = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5), 3.0);
    const auto report = generalized_bound(hot, cold);
    if (!report.applicable) continue;
    try {
      const auto r = heat_flows(hot, cold, saturating_engine(hot, cold, report));
      ++built;
      ASSERT_TRUE(r.efficiency.has_value());
      EXPECT_GT(r.q_hot, 0.0);
      EXPECT_LE(*r.efficiency, report.eta_max + 1e-10);
    } catch (const HypothesisError&) {
      // Neither orientation has positive flux.
    }
  }
  EXPECT_GT(built, 100);
}

TEST(BoundProperties, ThermalSweepsRespectCarnot) {
  testing::Rng rng(406);
  for (int pair = 0; pair < 20; ++pair) {
    const double tc = testing::uniform(rng, 0.2, 3.0);
    const double th = tc * testing::uniform(rng, 1.05, 5.0);
    const auto hot = testing::random_thermal(rng, testing::uniform_count(rng, 2, 6), th);
    const auto cold = testing::random_thermal(rng, testing::uniform_count(rng, 2, 6), tc);
    const auto s = sweep_random_engines(hot, cold, 2000, 1000 + pair, 1.0 - tc / th);
    EXPECT_EQ(s.violations, 0u);
  }
}

}  // namespace
}  // namespace carnot
