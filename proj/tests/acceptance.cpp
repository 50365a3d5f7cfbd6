// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cachedof/cachedof.hpp"
#include "support/configs.hpp"
#include "support/oracle.hpp"

using namespace cachedof;
using oracle::Frac;
using oracle::to_rational;
using testing_support::config;

namespace {

using Shape = std::array<int, 5>;  // k_t, k_r, n, t_t, t_r

const std::vector<Shape> kFullShapes{{2, 2, 2, 1, 1}, {2, 3, 3, 2, 1}, {2, 2, 2, 2, 0}, {3, 4, 4, 2, 2}, {2, 4, 4, 1, 0}};
const std::vector<Shape> kDelayedShapes{{2, 2, 2, 2, 0}, {2, 3, 3, 2, 1}, {2, 4, 4, 1, 1}, {3, 4, 4, 3, 1}};
const std::vector<std::uint64_t> kSeeds{1, 2, 3};

SystemConfig make(const Shape& s, std::uint64_t seed, Rational alpha = 0) {
  return config(s[0], s[1], s[2], s[3], s[4], seed, alpha);
}

std::string describe(const Shape& s) {
  std::ostringstream os;
  os << "(" << s[0] << "," << s[1] << "," << s[2] << "," << s[3] << "," << s[4] << ")";
  return os.str();
}

/// Failure messages collected by a criterion; empty means pass.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

bool same_recovery(const PrimeField& f, const TransmissionLog& log, const CachePlacement& p, const Demand& d,
                   const std::vector<Recovered>& structured, std::size_t begin, std::size_t end) {
  const std::size_t b = p.symbols_per_unit;
  for (int k = 1; k <= static_cast<int>(p.rx_cache.size()); ++k) {
    auto brute = oracle::brute_force_decode(f, log, p, k);
    const Recovered& rec = structured[static_cast<std::size_t>(k - 1)];
    for (UnitIndex u : needed_units(p, d, k)) {
      auto it = rec.find(u);
      if (it == rec.end()) return false;
      for (std::size_t s = begin; s < end; ++s) {
        auto bf = brute.find(symbol_var(u, s, b));
        if (bf == brute.end() || bf->second != it->second[s - begin] || bf->second != p.symbol(u, s)) return false;
      }
    }
  }
  return true;
}

Check criterion1() {
  Check c;
  c.expect(dof_delayed(2, 0) == Rational(4, 3), "dof_delayed(2,0) != 4/3");
  c.expect(dof_delayed(2, 1) == Rational(12, 5), "dof_delayed(2,1) != 12/5");
  for (int t_r = 0; t_r <= 9; ++t_r) c.expect(dof_delayed(1, t_r) == t_r + 1, "dof_delayed(1,t_r) != t_r+1");
  for (int t_t = 1; t_t <= 6; ++t_t)
    for (int t_r = 0; t_r <= 6; ++t_r) {
      const long k_r = t_t + t_r + 1;
      c.expect(dof_mixed(t_t, t_r, k_r, 0) == dof_full(t_t, t_r, k_r), "alpha=0 boundary");
      c.expect(dof_mixed(t_t, t_r, k_r, 1) == dof_delayed(t_t, t_r), "alpha=1 boundary");
      c.expect(dof_delayed(t_t, t_r) == to_rational(oracle::delayed_dof(t_t, t_r)), "delayed vs oracle");
    }
  return c;
}

Check criterion2() {
  Check c;
  Rational previous_slope = 0;
  for (long s : {20L, 60L, 100L}) {
    SweepSpec spec = alpha_curves_preset();
    spec.cache_sums = {s};
    auto rows = sweep(spec);
    const Rational slope = (rows[1].d_mixed - rows[0].d_mixed) / (rows[1].alpha - rows[0].alpha);
    for (std::size_t i = 1; i < rows.size(); ++i)
      c.expect((rows[i].d_mixed - rows[i - 1].d_mixed) / (rows[i].alpha - rows[i - 1].alpha) == slope,
               "not affine in alpha at sum " + std::to_string(s));
    c.expect(slope < 0, "slope not negative at sum " + std::to_string(s));
    c.expect(rows[0].k_r == s, "k_r != sum");
    if (s != 20) c.expect(-slope > -previous_slope, "|slope| not increasing at sum " + std::to_string(s));
    previous_slope = slope;
  }
  return c;
}

Check criterion3() {
  Check c;
  auto rows = sweep(beta_curves_preset());
  c.expect(rows.size() == 5 * 99, "beta-curves row count");
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t i = 0; i < 99; ++i) {
      const DofPoint& p = rows[a * 99 + i];
      c.expect(p.t_r == Rational(static_cast<long>(i) + 1), "t_r grid");
      if (a == 0) c.expect(p.d_mixed == 100, "alpha=0 not constant 100");
      else if (i > 0) c.expect(p.d_mixed >= rows[a * 99 + i - 1].d_mixed, "decreasing in t_r");
    }
  return c;
}

Check criterion4() {
  Check c;
  for (const Shape& s : kFullShapes)
    for (std::uint64_t seed : kSeeds) {
      SystemConfig cfg = make(s, seed);
      const Rational expected = to_rational(oracle::full_dof(s[3], s[4], s[1]));
      for (const Demand& d : all_demands(cfg)) {
        FullRun run = run_full_delivery(cfg, d);
        c.expect(run.report.all_decoded(), "decode failure " + describe(s));
        c.expect(run.report.empirical_dof == expected, "dof mismatch " + describe(s));
        c.expect(run.report.slot_count == oracle::full_slots(s[0], s[1], s[3], s[4], 1), "slot count " + describe(s));
      }
    }
  return c;
}

Check criterion5() {
  Check c;
  for (const Shape& s : kDelayedShapes)
    for (std::uint64_t seed : kSeeds) {
      SystemConfig cfg = make(s, seed);
      const int K = s[3] + s[4];
      const std::size_t q = minimal_mat_batch(K, s[4] + 1);
      for (std::size_t batch : {q, 2 * q}) {
        const Rational rounds(oracle::choose(s[0], s[3]) * oracle::choose(s[1], K));
        const Frac fresh(static_cast<std::int64_t>(oracle::choose(K, s[4] + 1) * batch));
        const std::vector<Demand> demands = batch == q ? all_demands(cfg) : std::vector<Demand>{default_demand(cfg)};
        for (const Demand& d : demands) {
          DelayedRun run = run_delayed_delivery(cfg, d, batch);
          c.expect(run.report.all_decoded(), "decode failure " + describe(s));
          c.expect(Rational(run.report.slot_count) == rounds * to_rational(oracle::mat_slots(K, s[4] + 1, fresh)),
                   "slot count " + describe(s));
          c.expect(Rational(run.report.slot_count) == rounds * mat_slot_count(K, s[4] + 1, to_rational(fresh)),
                   "slot count vs mat_slot_count " + describe(s));
          c.expect(run.report.empirical_dof == to_rational(oracle::delayed_dof(s[3], s[4])), "dof " + describe(s));
        }
      }
    }
  return c;
}

Check criterion6() {
  Check c;
  for (Rational a : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
    for (std::uint64_t seed : kSeeds) {
      SystemConfig cfg = config(2, 3, 3, 2, 1, seed, a);
      MixedRun run = run_mixed_delivery(cfg, default_demand(cfg));
      const Frac fa(static_cast<std::int64_t>(numerator_of(a)), static_cast<std::int64_t>(denominator_of(a)));
      c.expect(run.report.all_decoded(), "decode failure at alpha " + to_fraction_string(a));
      c.expect(run.report.empirical_dof == to_rational(oracle::mixed_dof(2, 1, 3, fa)),
               "dof mismatch at alpha " + to_fraction_string(a));
      c.expect(run.mixed.d_mixed_expected == to_rational(oracle::mixed_dof(2, 1, 3, fa)), "expected value");
    }
  SystemConfig half = config(2, 3, 3, 2, 1, 1, Rational(1, 2));
  c.expect(run_mixed_delivery(half, default_demand(half)).report.empirical_dof == Rational(27, 10), "27/10");
  return c;
}

Check criterion7() {
  Check c;
  for (const Shape& s : kFullShapes) {
    SystemConfig cfg = make(s, 1);
    for (const Demand& d : all_demands(cfg)) {
      FullRun run = run_full_delivery(cfg, d);
      c.expect(same_recovery(cfg.field(), run.pipeline.log, run.placement, d, run.pipeline.recovered, 0, 1),
               "full " + describe(s));
    }
  }
  for (const Shape& s : kDelayedShapes) {
    SystemConfig cfg = make(s, 1);
    for (const Demand& d : all_demands(cfg)) {
      DelayedRun run = run_delayed_delivery(cfg, d);
      c.expect(same_recovery(cfg.field(), run.pipeline.log, run.placement, d, run.pipeline.recovered, 0,
                             run.placement.symbols_per_unit),
               "delayed " + describe(s));
    }
  }
  return c;
}

Check criterion8() {
  Check c;
  KeyedRng pick(2024, "acceptance/permute");
  for (int trial = 0; trial < 100; ++trial) {
    const Shape& s = kDelayedShapes[pick.uniform(kDelayedShapes.size())];
    SystemConfig cfg = make(s, 100 + static_cast<std::uint64_t>(trial));
    DelayedRun run = run_delayed_delivery(cfg, default_demand(cfg));
    const PrimeField f = cfg.field();
    const DelayedRound& round = run.pipeline.rounds[pick.uniform(run.pipeline.rounds.size())];
    const std::size_t i = pick.uniform(round.channels.size());
    const auto baseline = round_transmit_vectors(f, cfg, round, round.channels);
    for (std::size_t t = 0; t < baseline.size(); ++t)
      c.expect(baseline[t] == run.pipeline.log.slots[round.first_slot + t].transmit, "replay differs from log");

    // permute the entries of the current slot's channel
    std::vector<FieldMatrix> permuted = round.channels;
    FieldMatrix& h = permuted[i];
    std::vector<Element> entries;
    for (std::size_t r = 0; r < h.rows(); ++r)
      for (std::size_t col = 0; col < h.cols(); ++col) entries.push_back(h(r, col));
    std::shuffle(entries.begin(), entries.end(), pick);
    std::rotate(entries.begin(), entries.begin() + 1, entries.end());
    for (std::size_t r = 0, e = 0; r < h.rows(); ++r)
      for (std::size_t col = 0; col < h.cols(); ++col) h(r, col) = entries[e++];
    const auto again = round_transmit_vectors(f, cfg, round, permuted);
    for (std::size_t t = 0; t <= i; ++t)
      c.expect(again[t] == baseline[t], "trial " + std::to_string(trial) + ": slot " + std::to_string(t) + " changed");
  }
  return c;
}

Check criterion9() {
  Check c;
  for (const Shape& s : kFullShapes) {
    SystemConfig cfg = make(s, 1);
    CachePlacement p = place_caches(cfg, derived_dimensions(cfg, 1));
    const auto total = static_cast<std::int64_t>(p.catalog.size());
    for (const auto& cache : p.tx_cache)
      c.expect(Rational(static_cast<std::int64_t>(cache.size()), total) == Rational(s[3], s[0]), "tx " + describe(s));
    for (const auto& cache : p.rx_cache)
      c.expect(Rational(static_cast<std::int64_t>(cache.size()), total) == Rational(s[4], s[1]), "rx " + describe(s));
    c.expect(verify_placement(p, cfg).empty(), "violations " + describe(s));
  }
  return c;
}

Check criterion10() {
  Check c;
  for (const std::string regime : {"full", "delayed", "mixed"}) {
    std::vector<std::string> args{"trace", "--regime", regime, "--k_t", "2", "--k_r", "3", "--n", "3",
                                  "--t_t", "2", "--t_r", "1", "--alpha", "1/2", "--seed", "42"};
    std::ostringstream a, b, ea, eb;
    const int ca = run_cli(args, a, ea);
    const int cb = run_cli(args, b, eb);
    c.expect(ca == 0 && cb == 0, regime + " trace failed");
    c.expect(!a.str().empty() && a.str() == b.str(), regime + " trace differs");
    args[0] = "simulate";
    std::ostringstream ra, rb;
    run_cli(args, ra, ea);
    run_cli(args, rb, eb);
    c.expect(ra.str() == rb.str(), regime + " report differs");
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "closed-form regression", 1, criterion1},
      {2, "alpha sweep is affine with steeper slope for larger caches", 1, criterion2},
      {3, "beta sweep flat at alpha=0 and nondecreasing otherwise", 1, criterion3},
      {4, "full CSIT decodes every demand at min(t_t+t_r, K_r)", 60, criterion4},
      {5, "delayed CSIT decodes with exact slot count and DoF", 120, criterion5},
      {6, "mixed CSIT DoF equals the time-sharing value", 120, criterion6},
      {7, "structured and brute-force decoders agree", 120, criterion7},
      {8, "delayed transmit vectors ignore the current channel", 120, criterion8},
      {9, "cache budgets are exact fractions", 10, criterion9},
      {10, "identical seeds give byte-identical traces and reports", 60, criterion10},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = cr.run();
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.limit_s)
      check.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(cr.limit_s) + " s");
    const bool ok = check.failures.empty();
    if (!ok) ++failed;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " (" << std::fixed
              << std::setprecision(2) << secs << " s)";
    for (const auto& f : check.failures) std::cout << "\n    " << f;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
