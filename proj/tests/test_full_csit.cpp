#include <gtest/gtest.h>

#include "cachedof/dof_calc.hpp"
#include "cachedof/full_csit.hpp"
#include "support/configs.hpp"
#include "support/oracle.hpp"

using namespace cachedof;
using testing_support::config;

TEST(DesignPrecoder, SingleTransmitterIsUnconstrained) {
  PrimeField f;
  KeyedRng rng(1, "ch");
  FieldMatrix h = FieldMatrix::random(f, 2, 2, rng);
  SubsetId T(2, {1}), S(2, {1, 2}), R(2, {1, 2});
  Precoder p = design_precoder(f, h, T, S, R, KeyedRng(1, "p"));
  ASSERT_EQ(p.u.size(), 1u);
  EXPECT_NE(p.u[0], 0u);
}

TEST(DesignPrecoder, ZeroForcesOutsideGroup) {
  PrimeField f;
  KeyedRng rng(2, "ch");
  FieldMatrix h = FieldMatrix::random(f, 3, 2, rng);
  SubsetId T(2, {1, 2}), S(3, {1, 2, 3}), R(3, {1, 3});
  Precoder p = design_precoder(f, h, T, S, R, KeyedRng(2, "p"));
  EXPECT_EQ(f.dot(channel_to(h, 2, T), p.u), 0u);
  EXPECT_NE(f.dot(channel_to(h, 1, T), p.u), 0u);
  EXPECT_NE(f.dot(channel_to(h, 3, T), p.u), 0u);
}

TEST(DesignPrecoder, ZeroRowOutsideGroupStillValid) {
  PrimeField f;
  KeyedRng rng(3, "ch");
  FieldMatrix h = FieldMatrix::random(f, 3, 2, rng);
  h(1, 0) = 0;
  h(1, 1) = 0;
  SubsetId T(2, {1, 2}), S(3, {1, 2, 3}), R(3, {1, 3});
  Precoder p = design_precoder(f, h, T, S, R, KeyedRng(3, "p"));
  EXPECT_NE(f.dot(channel_to(h, 1, T), p.u), 0u);
  EXPECT_NE(f.dot(channel_to(h, 3, T), p.u), 0u);
}

TEST(DesignPrecoder, DegenerateChannelFails) {
  PrimeField f;
  FieldMatrix h(2, 1);  // all zero: nothing reaches R
  SubsetId T(1, {1}), S(2, {1, 2}), R(2, {1, 2});
  EXPECT_THROW(design_precoder(f, h, T, S, R, KeyedRng(1, "p")), genericity_failure);
}

TEST(BuildBlock, SlotAndSymbolCounts) {
  struct Case {
    int k_t, k_r, n, t_t, t_r;
    std::size_t slots, groups;
  };
  for (Case c : {Case{2, 3, 3, 2, 1, 2, 3}, Case{1, 1, 1, 1, 0, 1, 1}, Case{2, 2, 2, 2, 0, 1, 2}}) {
    SystemConfig cfg = config(c.k_t, c.k_r, c.n, c.t_t, c.t_r);
    FullRun run = run_full_delivery(cfg, default_demand(cfg));
    const FullBlock& b = run.pipeline.blocks.front();
    EXPECT_EQ(b.slot_count(), c.slots);
    EXPECT_EQ(b.groups.size(), c.groups);
    PrimeField f = cfg.field();
    EXPECT_EQ(coded_symbols(f, b, run.placement).size(), c.slots * c.groups);
  }
}

TEST(BuildBlock, SingletonGroupsCarryTheUnitItself) {
  SystemConfig cfg = config(1, 1, 1, 1, 0);
  FullRun run = run_full_delivery(cfg, default_demand(cfg));
  PrimeField f = cfg.field();
  auto cs = coded_symbols(f, run.pipeline.blocks[0], run.placement);
  ASSERT_EQ(cs.size(), 1u);
  ASSERT_EQ(cs[0].coeffs.size(), 1u);
}

TEST(FullDelivery, ZeroForcingIsExact) {
  SystemConfig cfg = config(3, 4, 4, 2, 2, 3);
  FullRun run = run_full_delivery(cfg, default_demand(cfg), 2);
  PrimeField f = cfg.field();
  for (const FullBlock& b : run.pipeline.blocks)
    for (std::size_t g = 0; g < b.groups.size(); ++g) {
      const SubsetId outside = b.S.minus(b.groups[g]);
      for (int j : outside.members())
        for (std::size_t s = b.range.begin; s < b.range.end; ++s)
          for (std::size_t w = 1; w <= b.repetitions; ++w) {
            LinearForm eq = run.pipeline.log.slots[b.slot_of(s, w)].equation(f, j);
            for (UnitIndex u : b.group_units[g]) EXPECT_EQ(eq.coefficient(symbol_var(u, s, 2)), 0u);
          }
    }
}

TEST(FullDelivery, SmallConfigsDecode) {
  struct Case {
    int k_t, k_r, n, t_t, t_r;
    Rational dof;
  };
  for (Case c : {Case{2, 2, 2, 1, 1, 2}, Case{2, 3, 3, 2, 1, 3}, Case{2, 2, 2, 2, 0, 2}}) {
    SystemConfig cfg = config(c.k_t, c.k_r, c.n, c.t_t, c.t_r, 7);
    for (const Demand& d : all_demands(cfg)) {
      FullRun run = run_full_delivery(cfg, d);
      EXPECT_TRUE(run.report.all_decoded());
      ASSERT_TRUE(run.report.empirical_dof.has_value());
      EXPECT_EQ(*run.report.empirical_dof, c.dof);
      EXPECT_EQ(run.report.empirical_dof, dof_full(c.t_t, c.t_r, c.k_r));
      EXPECT_EQ(run.report.slot_count, oracle::full_slots(c.k_t, c.k_r, c.t_t, c.t_r, 1));
    }
  }
  EXPECT_EQ(dof_multiserver(2, 0, 2), 2);
}

TEST(FullDelivery, BatchScalesSlots) {
  SystemConfig cfg = config(2, 3, 3, 2, 1, 4);
  FullRun run = run_full_delivery(cfg, default_demand(cfg), 3);
  EXPECT_TRUE(run.report.all_decoded());
  EXPECT_EQ(run.report.slot_count, oracle::full_slots(2, 3, 2, 1, 3));
  EXPECT_EQ(*run.report.empirical_dof, 3);
}

TEST(FullDelivery, BlockDeliversExpectedSymbols) {
  // (t_t + t_r) * C(t_t + t_r - 1, t_r) useful symbols per block and symbol position
  SystemConfig cfg = config(3, 4, 4, 2, 2, 1);
  FullRun run = run_full_delivery(cfg, default_demand(cfg));
  const std::uint64_t blocks = run.pipeline.blocks.size();
  EXPECT_EQ(run.report.symbols_delivered, blocks * 4u * oracle::choose(3, 2));
}

TEST(FullDelivery, MatchesBruteForceDecoder) {
  SystemConfig cfg = config(2, 3, 3, 2, 1, 11);
  Demand d = make_demand(cfg, {2, 2, 3});
  FullRun run = run_full_delivery(cfg, d, 2);
  PrimeField f = cfg.field();
  for (int k = 1; k <= 3; ++k) {
    auto brute = oracle::brute_force_decode(f, run.pipeline.log, run.placement, k);
    for (const auto& [u, values] : run.pipeline.recovered[static_cast<std::size_t>(k - 1)])
      for (std::size_t s = 0; s < values.size(); ++s) {
        auto it = brute.find(symbol_var(u, s, 2));
        ASSERT_NE(it, brute.end());
        EXPECT_EQ(it->second, values[s]);
      }
  }
}

TEST(FullDelivery, ReceiversOutsideSGetNothing) {
  SystemConfig cfg = config(2, 4, 4, 1, 1, 2);
  FullRun run = run_full_delivery(cfg, default_demand(cfg));
  EXPECT_TRUE(run.report.all_decoded());
  for (const FullBlock& b : run.pipeline.blocks)
    for (int k = 1; k <= 4; ++k)
      if (!b.S.contains(k)) {
        Recovered none;
        decode_block(cfg.field(), b, run.pipeline.log, ReceiverCache(run.placement, k), none);
        EXPECT_TRUE(none.empty());
      }
}

TEST(FullDelivery, DeterministicInSeed) {
  SystemConfig cfg = config(2, 3, 3, 2, 1, 5);
  FullRun a = run_full_delivery(cfg, default_demand(cfg));
  FullRun b = run_full_delivery(cfg, default_demand(cfg));
  EXPECT_EQ(a.report, b.report);
  ASSERT_EQ(a.pipeline.log.slots.size(), b.pipeline.log.slots.size());
  for (std::size_t i = 0; i < a.pipeline.log.slots.size(); ++i)
    EXPECT_EQ(a.pipeline.log.slots[i].transmit, b.pipeline.log.slots[i].transmit);
}
