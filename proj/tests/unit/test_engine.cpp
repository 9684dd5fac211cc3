#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "carnot/engine.hpp"
#include "carnot/errors.hpp"
#include "support/generators.hpp"

namespace carnot {
namespace {

DiagonalReservoir example_hot() { return DiagonalReservoir({{0.0, 0.7}, {3.0, 0.3}}); }
DiagonalReservoir example_cold() { return DiagonalReservoir({{0.0, 0.8}, {1.0, 0.2}}); }

CouplingOperator example_engine() {
  CouplingOperator engine(0.1);
  engine.add({1, 0, 0, 1}, 1.0);
  return engine;
}

// Independent re-derivation: every ordered pair of product states |m p> -> |n q>
// joined by the engine moves population rho_m rho_p at rate w, and the hot side
// loses E_m - E_n. Summing both directions of each Hermitian pair gives the heats.
std::pair<double, double> transition_rate_heats(const DiagonalReservoir& hot,
                                                const DiagonalReservoir& cold,
                                                const CouplingOperator& engine) {
  std::map<CouplingIndex, double> rate;
  for (const auto& [i, w] : engine.weights()) {
    rate[i] += w;
    rate[{i.n, i.m, i.q, i.p}] += w;
  }
  long double qh = 0.0L;
  long double qc = 0.0L;
  for (const auto& [i, w] : rate) {
    const long double occ = static_cast<long double>(hot[i.m].population) * cold[i.p].population;
    qh += w * occ * (hot[i.m].energy - hot[i.n].energy);
    qc += w * occ * (cold[i.p].energy - cold[i.q].energy);
  }
  const double lam2 = engine.lambda() * engine.lambda();
  return {lam2 * static_cast<double>(qh), lam2 * static_cast<double>(qc)};
}

TEST(HeatFlows, WorkedSingleTupleExample) {
  const auto r = heat_flows(example_hot(), example_cold(), example_engine());
  EXPECT_NEAR(r.q_hot, 0.003, 1e-17);
  EXPECT_NEAR(r.q_cold, -0.001, 1e-17);
  EXPECT_NEAR(r.work, 0.002, 1e-17);
  ASSERT_TRUE(r.efficiency.has_value());
  EXPECT_NEAR(*r.efficiency, 2.0 / 3.0, 1e-15);
  ASSERT_EQ(r.channels.size(), 1u);
  EXPECT_NEAR(r.channels[0].flux, 0.1, 1e-16);
}

TEST(HeatFlows, MatchesTransitionRatePicture) {
  const auto [qh, qc] = transition_rate_heats(example_hot(), example_cold(), example_engine());
  EXPECT_NEAR(qh, 0.003, 1e-17);
  EXPECT_NEAR(qc, -0.001, 1e-17);
}

TEST(HeatFlows, EmptyEngineGivesZeros) {
  const auto r = heat_flows(example_hot(), example_cold(), CouplingOperator(0.5));
  EXPECT_EQ(r.q_hot, 0.0);
  EXPECT_EQ(r.q_cold, 0.0);
  EXPECT_EQ(r.work, 0.0);
  EXPECT_FALSE(r.efficiency.has_value());
  EXPECT_TRUE(r.channels.empty());
}

TEST(HeatFlows, IdenticalThermalReservoirsYieldNoNetWork) {
  const std::vector<double> e{0.0, 0.6, 1.1, 2.0};
  const auto res = thermal_reservoir(e, 1.4);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    testing::Rng rng(trial);
    CouplingOperator engine(1.0);
    for (const auto& idx : canonical_tuples(res, res))
      if (testing::uniform(rng, 0.0, 1.0) < 0.5) engine.add(idx, testing::uniform(rng, 0.0, 1.0));
    const auto r = heat_flows(res, res, engine);
    EXPECT_LE(r.work, 1e-15);
    if (r.efficiency) {
      EXPECT_LE(*r.efficiency, 1e-12);
    }
  }
}

TEST(HeatFlows, Errors) {
  CouplingOperator out_of_range(1.0);
  out_of_range.add({2, 0, 0, 1}, 1.0);
  EXPECT_THROW(heat_flows(example_hot(), example_cold(), out_of_range), StructuralError);

  CouplingOperator reversed(1.0);
  reversed.add({0, 1, 0, 1}, 1.0);
  EXPECT_THROW(heat_flows(example_hot(), example_cold(), reversed), CanonicalizationError);

  CouplingOperator flat(1.0);
  flat.add({1, 1, 0, 1}, 1.0);
  EXPECT_THROW(heat_flows(example_hot(), example_cold(), flat), CanonicalizationError);
}

TEST(CouplingOperator, Validation) {
  EXPECT_THROW(CouplingOperator(0.0), DomainError);
  EXPECT_THROW(CouplingOperator(-1.0), DomainError);
  CouplingOperator engine(1.0);
  EXPECT_THROW(engine.add({1, 0, 0, 0}, -0.1), DomainError);
  EXPECT_THROW(engine.add({1, 0, 0, 0}, NAN), DomainError);
  engine.add({1, 0, 0, 0}, 0.0);
  EXPECT_THROW(engine.add({1, 0, 0, 0}, 0.3), StructuralError);
}

TEST(ChannelSigns, WorkedExampleIsExtractingAtMatchedTemperatures) {
  // The example populations are Gibbs states at these temperatures.
  const double t_hot = 3.540667503431486;
  const double t_cold = 0.7213475204444817;
  const std::vector<double> eh{0.0, 3.0};
  const std::vector<double> ec{0.0, 1.0};
  const auto hot = thermal_reservoir(eh, t_hot);
  const auto cold = thermal_reservoir(ec, t_cold);
  EXPECT_NEAR(hot[1].population, 0.3, 1e-15);
  EXPECT_NEAR(cold[1].population, 0.2, 1e-15);
  const auto tags = channel_sign_analysis(heat_flows(hot, cold, example_engine()));
  ASSERT_EQ(tags.size(), 1u);
  EXPECT_EQ(tags[0], ChannelSign::Extracting);
}

TEST(ChannelSigns, CaseTable) {
  auto tag = [](double qh, double qc) {
    ChannelContribution c;
    c.q_hot = qh;
    c.q_cold = qc;
    return classify_contribution(c);
  };
  EXPECT_EQ(tag(1.0, -0.5), ChannelSign::Extracting);
  EXPECT_EQ(tag(1.0, 0.5), ChannelSign::ForbiddenBothPositive);
  EXPECT_EQ(tag(-0.5, 1.0), ChannelSign::ForbiddenReversed);
  EXPECT_EQ(tag(-1.0, 0.5), ChannelSign::Dissipating);
  EXPECT_EQ(tag(0.5, -1.0), ChannelSign::Dissipating);
  EXPECT_EQ(tag(-1.0, -1.0), ChannelSign::Dissipating);
  EXPECT_EQ(tag(0.0, 0.0), ChannelSign::Dissipating);
}

TEST(SingleChannelEfficiency, Values) {
  EXPECT_DOUBLE_EQ(single_channel_efficiency(3.0, 1.0), 2.0 / 3.0);
  EXPECT_EQ(single_channel_efficiency(2.0, 0.0), 1.0);
  EXPECT_EQ(single_channel_efficiency(1.5, 1.5), 0.0);
  EXPECT_THROW(single_channel_efficiency(0.0, 1.0), DomainError);
  EXPECT_THROW(single_channel_efficiency(-1.0, 1.0), DomainError);
}

TEST(CanonicalTuples, CoversHotPairsAboveAndAllColdPairs) {
  const std::vector<double> eh{0.0, 1.0, 1.0};
  const std::vector<double> ec{0.0, 2.0};
  const auto tuples = canonical_tuples(thermal_reservoir(eh, 1.0), thermal_reservoir(ec, 1.0));
  // Hot pairs (1,0) and (2,0); four cold pairs each.
  EXPECT_EQ(tuples.size(), 8u);
  EXPECT_TRUE(std::is_sorted(tuples.begin(), tuples.end()));
}

// Properties over random inputs.

struct RandomCase {
  DiagonalReservoir hot;
  DiagonalReservoir cold;
  CouplingOperator engine;
};

RandomCase random_case(testing::Rng& rng, double lambda = 1.0) {
  auto hot = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5));
  auto cold = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5));
  CouplingOperator engine(lambda);
  for (const auto& idx : canonical_tuples(hot, cold))
    if (testing::uniform(rng, 0.0, 1.0) < 0.5) engine.add(idx, testing::uniform(rng, 0.01, 1.0));
  return {std::move(hot), std::move(cold), std::move(engine)};
}

TEST(EngineProperties, EnergyBalanceAndChannelSums) {
  testing::Rng rng(301);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = random_case(rng, testing::uniform(rng, 0.01, 2.0));
    const auto r = heat_flows(c.hot, c.cold, c.engine);
    EXPECT_EQ(r.work, r.q_hot + r.q_cold);
    double sh = 0.0, sc = 0.0, scale = 0.0;
    for (const auto& ch : r.channels) {
      sh += ch.q_hot;
      sc += ch.q_cold;
      scale += std::fabs(ch.q_hot) + std::fabs(ch.q_cold);
    }
    EXPECT_LE(std::fabs(sh - r.q_hot), 1e-12 * scale);
    EXPECT_LE(std::fabs(sc - r.q_cold), 1e-12 * scale);

    const auto [qh, qc] = transition_rate_heats(c.hot, c.cold, c.engine);
    EXPECT_LE(std::fabs(qh - r.q_hot), 1e-12 * scale + 1e-300);
    EXPECT_LE(std::fabs(qc - r.q_cold), 1e-12 * scale + 1e-300);
  }
}

TEST(EngineProperties, LambdaScalesQuadratically) {
  testing::Rng rng(302);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_case(rng, 0.3);
    CouplingOperator doubled(0.6);
    for (const auto& [i, w] : c.engine.weights()) doubled.add(i, w);
    const auto a = heat_flows(c.hot, c.cold, c.engine);
    const auto b = heat_flows(c.hot, c.cold, doubled);
    const double tol = 1e-14 * (std::fabs(a.q_hot) + std::fabs(a.q_cold)) + 1e-300;
    EXPECT_NEAR(b.q_hot, 4.0 * a.q_hot, 4 * tol);
    EXPECT_NEAR(b.q_cold, 4.0 * a.q_cold, 4 * tol);
    EXPECT_NEAR(b.work, 4.0 * a.work, 4 * tol);
    ASSERT_EQ(a.efficiency.has_value(), b.efficiency.has_value());
    if (a.efficiency) {
      EXPECT_NEAR(*a.efficiency, *b.efficiency, 1e-12 * (1.0 + std::fabs(*a.efficiency)));
    }
  }
}

TEST(EngineProperties, EfficiencyIgnoresUniformWeightScaling) {
  testing::Rng rng(303);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_case(rng);
    const double k = testing::uniform(rng, 0.1, 10.0);
    CouplingOperator scaled(1.0);
    for (const auto& [i, w] : c.engine.weights()) scaled.add(i, k * w);
    const auto a = heat_flows(c.hot, c.cold, c.engine);
    const auto b = heat_flows(c.hot, c.cold, scaled);
    ASSERT_EQ(a.efficiency.has_value(), b.efficiency.has_value());
    if (a.efficiency && a.q_hot > 1e-9) {
      EXPECT_NEAR(*a.efficiency, *b.efficiency, 1e-10 * (1.0 + std::fabs(*a.efficiency)));
    }
  }
}

TEST(EngineProperties, SingleTupleEfficiencyIsPopulationFree) {
  testing::Rng rng(304);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto hot = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5));
    const auto cold = testing::random_nonthermal(rng, testing::uniform_count(rng, 2, 5));
    const auto tuples = canonical_tuples(hot, cold);
    const auto idx = tuples[testing::uniform_count(rng, 0, tuples.size() - 1)];
    CouplingOperator engine(1.0);
    engine.add(idx, testing::uniform(rng, 0.1, 1.0));
    const auto r = heat_flows(hot, cold, engine);
    if (!r.efficiency) continue;
    ++checked;
    const double expected = 1.0 - (cold[idx.q].energy - cold[idx.p].energy) /
                                      (hot[idx.m].energy - hot[idx.n].energy);
    EXPECT_NEAR(*r.efficiency, expected, 1e-14 * (1.0 + std::fabs(expected)));
  }
  EXPECT_GT(checked, 50);
}

TEST(EngineProperties, ThermalPairsNeverTagForbiddenChannels) {
  testing::Rng rng(305);
  for (int trial = 0; trial < 500; ++trial) {
    const double t_cold = testing::uniform(rng, 0.1, 5.0);
    const double t_hot = t_cold * testing::uniform(rng, 1.01, 10.0);
    const auto hot = testing::random_thermal(rng, testing::uniform_count(rng, 2, 6), t_hot);
    const auto cold = testing::random_thermal(rng, testing::uniform_count(rng, 2, 6), t_cold);
    CouplingOperator all(1.0);
    for (const auto& idx : canonical_tuples(hot, cold)) all.add(idx, 1.0);
    for (auto tag : channel_sign_analysis(heat_flows(hot, cold, all))) {
      EXPECT_NE(tag, ChannelSign::ForbiddenBothPositive);
      EXPECT_NE(tag, ChannelSign::ForbiddenReversed);
    }
  }
}

}  // namespace
}  // namespace carnot
