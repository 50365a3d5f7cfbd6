// Time sharing between the delayed and full CSIT schemes. Every minifile is
// cut at a symbol boundary: the first b_D symbols go through the delayed
// pipeline, the rest through the full one. b_D is chosen so the two pipelines
// take slots in the ratio alpha : 1 - alpha.
#pragma once

#include <cstdint>
#include <string>

#include <boost/integer/common_factor_rt.hpp>
#include <nlohmann/json.hpp>

#include "cachedof/delayed_csit.hpp"
#include "cachedof/dof_calc.hpp"
#include "cachedof/full_csit.hpp"
#include "cachedof/model.hpp"
#include "cachedof/placement.hpp"
#include "cachedof/rational.hpp"
#include "cachedof/transmission.hpp"

namespace cachedof {

struct WorkloadSplit {
  Rational alpha;
  Rational delayed_share;  // target fraction of symbols routed to the delayed pipeline
  Rational full_share;
  std::size_t batch = 1;   // symbols per minifile
  std::size_t granule = 1; // delayed batches must be multiples of this
  SymbolRange delayed;     // [0, b_D)
  SymbolRange full;        // [b_D, b)
  Rational residual;       // |b_D / b - delayed_share|
};

/// alpha d_D / (alpha d_D + (1 - alpha) d_C).
inline Rational delayed_share(const SystemConfig& cfg, const Rational& alpha) {
  const Rational dd = dof_delayed(cfg.t_t, cfg.t_r);
  const Rational dc = dof_full(cfg.t_t, cfg.t_r, cfg.k_r);
  return alpha * dd / (alpha * dd + (1 - alpha) * dc);
}

/// Smallest batch for which the split is exact.
inline std::size_t minimal_mixed_batch(const SystemConfig& cfg, const Rational& alpha) {
  const std::size_t q = minimal_mat_batch(cfg.t_t + cfg.t_r, cfg.t_r + 1);
  const Rational share = delayed_share(cfg, alpha);
  const auto p = static_cast<std::size_t>(numerator_of(share));
  const auto s = static_cast<std::size_t>(denominator_of(share));
  return q * s / boost::integer::gcd(p, q);
}

/// Splits every minifile's symbols between the pipelines. The delayed part is
/// rounded to a multiple of the delayed granule, ties going to the full side.
inline WorkloadSplit partition_workload(const SystemConfig& cfg, const Dimensions& dims, const Demand& demand,
                                        const Rational& alpha) {
  (void)demand;  // every receiver's units are cut at the same symbol boundary
  require_simulatable(cfg);
  if (alpha < 0 || alpha > 1) throw out_of_range("alpha must lie in [0, 1]");
  WorkloadSplit w;
  w.alpha = alpha;
  w.delayed_share = delayed_share(cfg, alpha);
  w.full_share = 1 - w.delayed_share;
  w.batch = static_cast<std::size_t>(dims.symbols_per_minifile);
  w.granule = minimal_mat_batch(cfg.t_t + cfg.t_r, cfg.t_r + 1);
  const std::size_t q = w.granule;

  std::size_t delayed = 0;
  if (alpha == 1) {
    if (w.batch % q != 0)
      throw divisibility_error("batch " + std::to_string(w.batch) + " is not a multiple of " + std::to_string(q), q);
    delayed = w.batch;
  } else if (alpha > 0) {
    const Rational units = w.delayed_share * w.batch / q;
    BigInt n = floor_of(units);
    if (units - Rational(n) > Rational(1, 2)) ++n;
    delayed = q * static_cast<std::size_t>(n);
    delayed = std::min(delayed, w.batch / q * q);
  }
  w.delayed = {0, delayed};
  w.full = {delayed, w.batch};
  w.residual = abs(Rational(delayed, w.batch) - w.delayed_share);
  return w;
}

struct MixedReport {
  Rational alpha;
  Rational d_full;
  Rational d_delayed;
  Rational d_mixed_expected;
  std::optional<Rational> d_mixed_empirical;
  std::uint64_t slots_delayed = 0;
  std::uint64_t slots_full = 0;
  Rational residual;
};

inline nlohmann::json mixed_report_to_json(const MixedReport& m) {
  return {{"alpha", to_fraction_string(m.alpha)},
          {"d_full", to_fraction_string(m.d_full)},
          {"d_delayed", to_fraction_string(m.d_delayed)},
          {"d_mixed_expected", to_fraction_string(m.d_mixed_expected)},
          {"d_mixed_empirical",
           m.d_mixed_empirical ? nlohmann::json(to_fraction_string(*m.d_mixed_empirical)) : nlohmann::json()},
          {"slots_delayed", m.slots_delayed},
          {"slots_full", m.slots_full},
          {"residual", to_fraction_string(m.residual)}};
}

struct MixedRun {
  CachePlacement placement;
  WorkloadSplit split;
  DelayedPipeline delayed;
  FullPipeline full;
  TransmissionLog log;  // delayed slots first, then full slots
  DeliveryReport report;
  MixedReport mixed;
};

/// Runs both pipelines over one placement. batch 0 picks the smallest exact batch.
/// With only one pipeline active the report matches that pipeline's own run.
inline MixedRun run_mixed_delivery(const SystemConfig& cfg, const Demand& demand, std::size_t batch = 0) {
  require_simulatable(cfg);
  if (batch == 0) batch = minimal_mixed_batch(cfg, cfg.alpha);
  MixedRun run;
  const Dimensions dims = derived_dimensions(cfg, batch);
  run.split = partition_workload(cfg, dims, demand, cfg.alpha);
  run.placement = place_caches(cfg, dims);
  run.delayed = deliver_delayed(cfg, run.placement, demand, run.split.delayed);
  run.full = deliver_full(cfg, run.placement, demand, run.split.full);

  for (const auto& s : run.delayed.log.slots) run.log.slots.push_back(s);
  for (const auto& s : run.full.log.slots) run.log.slots.push_back(s);

  DeliveryReport& r = run.report;
  const bool both = !run.split.delayed.empty() && !run.split.full.empty();
  r.regime = both ? Regime::mixed : (run.split.delayed.empty() ? Regime::full : Regime::delayed);
  r.seed = cfg.seed;
  r.symbols_per_minifile = batch;
  r.slot_count = run.log.slots.size();
  r.retries = run.delayed.retries + run.full.retries;
  r.symbols_delivered = needed_symbol_count(run.placement, demand, batch);
  const SymbolRange whole{0, batch};
  for (int k = 1; k <= cfg.k_r; ++k) {
    Recovered merged;
    for (UnitIndex u : needed_units(run.placement, demand, k)) {
      FieldVector v(batch, 0);
      bool have = true;
      auto copy = [&](const Recovered& rec, SymbolRange range) {
        if (range.empty()) return;
        auto it = rec.find(u);
        if (it == rec.end() || it->second.size() != range.size()) {
          have = false;
          return;
        }
        std::copy(it->second.begin(), it->second.end(), v.begin() + static_cast<std::ptrdiff_t>(range.begin));
      };
      copy(run.delayed.recovered[static_cast<std::size_t>(k - 1)], run.split.delayed);
      copy(run.full.recovered[static_cast<std::size_t>(k - 1)], run.split.full);
      if (have) merged[u] = std::move(v);
    }
    r.decoded_ok.push_back(check_recovery(run.placement, demand, k, merged, whole));
  }
  r.finalize_dof();

  MixedReport& m = run.mixed;
  m.alpha = cfg.alpha;
  m.d_full = dof_full(cfg.t_t, cfg.t_r, cfg.k_r);
  m.d_delayed = dof_delayed(cfg.t_t, cfg.t_r);
  m.d_mixed_expected = dof_mixed(cfg.t_t, cfg.t_r, cfg.k_r, cfg.alpha);
  m.d_mixed_empirical = r.empirical_dof;
  m.slots_delayed = run.delayed.log.slots.size();
  m.slots_full = run.full.log.slots.size();
  m.residual = run.split.residual;
  return run;
}

}  // namespace cachedof
