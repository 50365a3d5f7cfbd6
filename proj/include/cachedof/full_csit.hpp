// Current-CSIT delivery: for every transmitter set T and receiver set S with
// |T| = t_t and |S| = t_t + t_r, the transmitters in T zero-force each coded
// group G(R), R ⊆ S with |R| = t_r + 1, at the receivers in S \ R. The block is
// repeated C(t_t+t_r-1, t_r) times with fresh combination coefficients so that
// every receiver in S ends up with a square system in its missing minifiles.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cachedof/errors.hpp"
#include "cachedof/model.hpp"
#include "cachedof/placement.hpp"
#include "cachedof/prime_field.hpp"
#include "cachedof/rng.hpp"
#include "cachedof/subsets.hpp"
#include "cachedof/transmission.hpp"

namespace cachedof {

/// Regeneration cap for precoders, channels and combination coefficients.
inline constexpr int kRetryCap = 16;

/// Half-open range of symbol positions inside every minifile.
struct SymbolRange {
  std::size_t begin = 0;
  std::size_t end = 1;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool operator==(const SymbolRange&) const = default;
};

/// h_j^T: receiver j's channel gains from the transmitters in T, in T's order.
inline FieldVector channel_to(const FieldMatrix& channel, int j, const SubsetId& T) {
  FieldVector h;
  h.reserve(T.size());
  for (int l : T.members()) h.push_back(channel(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(l - 1)));
  return h;
}

struct Precoder {
  SubsetId T;
  SubsetId S;
  SubsetId R;
  FieldVector u;  // one weight per member of T
};

/// u with h_j^T·u = 0 for j in S\R and h_j^T·u != 0 for j in R.
/// `regenerations` counts draws discarded for failing the second condition.
inline Precoder design_precoder(const PrimeField& f, const FieldMatrix& channel, const SubsetId& T,
                                const SubsetId& S, const SubsetId& R, KeyedRng rng,
                                std::uint64_t* regenerations = nullptr) {
  const SubsetId nulled = S.minus(R);
  if (nulled.size() >= T.size())
    throw domain_error("cannot zero-force " + std::to_string(nulled.size()) + " receivers with " +
                       std::to_string(T.size()) + " transmitters");
  std::vector<FieldVector> rows;
  for (int j : nulled.members()) rows.push_back(channel_to(channel, j, T));
  const FieldMatrix constraint = FieldMatrix::from_rows(rows, T.size());

  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    FieldVector u = nullspace_sample(f, constraint, rng);
    bool reaches_all = true;
    for (int j : R.members()) reaches_all = reaches_all && f.dot(channel_to(channel, j, T), u) != 0;
    if (reaches_all) return {T, S, R, std::move(u)};
    if (regenerations) ++*regenerations;
  }
  throw genericity_failure("no precoder for T=" + T.to_string() + " S=" + S.to_string() + " R=" + R.to_string() +
                           " reaches every member of R");
}

/// Everything about one (T, S) block a receiver needs to decode it.
struct FullBlock {
  std::size_t index = 0;
  SubsetId T;
  SubsetId S;
  FieldMatrix channel;
  SymbolRange range;
  std::size_t repetitions = 1;                         // C(t_t+t_r-1, t_r)
  std::vector<SubsetId> groups;                        // R ⊆ S, |R| = t_r+1, lexicographic
  std::vector<FieldVector> precoders;                  // u^R per group
  std::vector<std::vector<UnitIndex>> group_units;     // [group][position of r in R]
  std::vector<std::vector<FieldVector>> coefficients;  // [omega-1][group][position of r in R]
  std::size_t first_slot = 0;                          // index in the log

  std::size_t slot_of(std::size_t s, std::size_t omega) const {
    return first_slot + (s - range.begin) * repetitions + (omega - 1);
  }
  std::size_t slot_count() const { return range.size() * repetitions; }
};

/// One random combination G^omega(R) of the group's minifiles.
struct CodedSymbol {
  SubsetId R;
  std::size_t omega = 1;
  std::vector<std::pair<UnitIndex, Element>> coeffs;  // one per r in R
  FieldVector values;                                 // one per symbol position in the range
};

inline std::vector<CodedSymbol> coded_symbols(const PrimeField& f, const FullBlock& b, const CachePlacement& p) {
  std::vector<CodedSymbol> out;
  for (std::size_t w = 1; w <= b.repetitions; ++w)
    for (std::size_t g = 0; g < b.groups.size(); ++g) {
      CodedSymbol cs{b.groups[g], w, {}, {}};
      for (std::size_t i = 0; i < b.group_units[g].size(); ++i)
        cs.coeffs.emplace_back(b.group_units[g][i], b.coefficients[w - 1][g][i]);
      for (std::size_t s = b.range.begin; s < b.range.end; ++s) {
        Element v = 0;
        for (const auto& [u, c] : cs.coeffs) v = f.add(v, f.mul(c, p.symbol(u, s)));
        cs.values.push_back(v);
      }
      out.push_back(std::move(cs));
    }
  return out;
}

namespace detail {

/// W x W system matrix of receiver k in block b: rows omega, columns the groups containing k.
inline FieldMatrix full_system_matrix(const PrimeField& f, const FullBlock& b, int k) {
  std::vector<std::size_t> mine;
  for (std::size_t g = 0; g < b.groups.size(); ++g)
    if (b.groups[g].contains(k)) mine.push_back(g);
  FieldMatrix a(b.repetitions, mine.size());
  const FieldVector h = channel_to(b.channel, k, b.T);
  for (std::size_t w = 0; w < b.repetitions; ++w)
    for (std::size_t i = 0; i < mine.size(); ++i) {
      std::size_t g = mine[i];
      Element gain = f.dot(h, b.precoders[g]);
      a(w, i) = f.mul(gain, b.coefficients[w][g][b.groups[g].position_of(k)]);
    }
  return a;
}

}  // namespace detail

/// Designs the precoders and combinations of block (T, S) over a fixed channel
/// and appends its slots to `log`. Throws genericity_failure when the channel
/// admits no valid precoder; the caller redraws the channel.
inline FullBlock build_block(const PrimeField& f, const SystemConfig& cfg, const CachePlacement& p,
                             const Demand& demand, std::size_t index, const SubsetId& T, const SubsetId& S,
                             const FieldMatrix& channel, SymbolRange range, std::uint64_t channel_attempt,
                             TransmissionLog& log, std::uint64_t& retries) {
  FullBlock b;
  b.index = index;
  b.T = T;
  b.S = S;
  b.channel = channel;
  b.range = range;
  b.repetitions = binomial(cfg.t_t + cfg.t_r - 1, cfg.t_r);
  b.groups = enumerate_subsets_of(S, cfg.t_r + 1);

  for (std::size_t g = 0; g < b.groups.size(); ++g) {
    const SubsetId& R = b.groups[g];
    KeyedRng rng(cfg.seed, "full/precoder", {index, channel_attempt, g});
    b.precoders.push_back(design_precoder(f, channel, T, S, R, rng, &retries).u);
    std::vector<UnitIndex> units;
    for (int r : R.members()) units.push_back(p.catalog.index_of(p.catalog.served_unit(demand.of(r), T, S, R, r)));
    b.group_units.push_back(std::move(units));
  }

  // Fresh coefficients until every receiver in S faces an invertible system.
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt == kRetryCap)
      throw singular_system("combination coefficients of block " + std::to_string(index) + " stay singular");
    KeyedRng rng(cfg.seed, "full/combine", {index, channel_attempt, attempt});
    b.coefficients.assign(b.repetitions, {});
    for (std::size_t w = 0; w < b.repetitions; ++w)
      for (const SubsetId& R : b.groups) {
        FieldVector c;
        for (std::size_t i = 0; i < R.size(); ++i) c.push_back(f.random_nonzero(rng));
        b.coefficients[w].push_back(std::move(c));
      }
    bool ok = true;
    for (int k : S.members()) ok = ok && is_invertible(f, detail::full_system_matrix(f, b, k));
    if (ok) break;
    ++retries;
  }

  b.first_slot = log.slots.size();
  const std::size_t kt = channel.cols();
  const std::size_t b_sym = p.symbols_per_unit;
  for (std::size_t s = range.begin; s < range.end; ++s)
    for (std::size_t w = 1; w <= b.repetitions; ++w) {
      SlotRecord slot;
      slot.regime = Regime::full;
      slot.block = index;
      slot.T = T;
      slot.S = S;
      slot.omega = w;
      slot.symbol = s;
      slot.audience = S;
      slot.channel = channel;
      slot.transmit.assign(kt, 0);
      slot.transmit_forms.assign(kt, LinearForm{});
      for (std::size_t g = 0; g < b.groups.size(); ++g) {
        // G^w(R) as a value and as a form
        Element value = 0;
        LinearForm form;
        for (std::size_t i = 0; i < b.group_units[g].size(); ++i) {
          const Element c = b.coefficients[w - 1][g][i];
          const UnitIndex u = b.group_units[g][i];
          value = f.add(value, f.mul(c, p.symbol(u, s)));
          form.add_scaled(f, LinearForm::variable(symbol_var(u, s, b_sym)), c);
        }
        for (std::size_t t = 0; t < T.size(); ++t) {
          const std::size_t l = static_cast<std::size_t>(T.members()[t] - 1);
          const Element weight = b.precoders[g][t];
          slot.transmit[l] = f.add(slot.transmit[l], f.mul(weight, value));
          slot.transmit_forms[l].add_scaled(f, form, weight);
        }
      }
      for (std::size_t g = 0; g < b.groups.size(); ++g) slot.precoders.emplace_back(b.groups[g], b.precoders[g]);
      slot.received = receive(f, channel, slot.transmit);
      log.slots.push_back(std::move(slot));
    }
  return b;
}

/// Recovered symbols per unit for one receiver: unit -> values over the range.
using Recovered = std::map<UnitIndex, FieldVector>;

/// Structured decoding of one block at receiver k: cancel cached partners,
/// rely on zero-forcing for the groups without k, solve the square system.
inline void decode_block(const PrimeField& f, const FullBlock& b, const TransmissionLog& log,
                         const ReceiverCache& cache, Recovered& out) {
  const int k = cache.receiver();
  if (!b.S.contains(k)) return;
  std::vector<std::size_t> mine;
  for (std::size_t g = 0; g < b.groups.size(); ++g)
    if (b.groups[g].contains(k)) mine.push_back(g);
  const FieldMatrix a = detail::full_system_matrix(f, b, k);
  if (!is_invertible(f, a))
    throw singular_system("receiver " + std::to_string(k) + " faces a singular system in block " +
                          std::to_string(b.index));
  const FieldVector h = channel_to(b.channel, k, b.T);

  for (std::size_t s = b.range.begin; s < b.range.end; ++s) {
    FieldVector rhs(b.repetitions);
    for (std::size_t w = 1; w <= b.repetitions; ++w) {
      Element y = log.slots.at(b.slot_of(s, w)).received.at(static_cast<std::size_t>(k - 1));
      for (std::size_t g : mine) {
        const Element gain = f.dot(h, b.precoders[g]);
        for (std::size_t i = 0; i < b.groups[g].size(); ++i) {
          if (b.groups[g].members()[i] == k) continue;
          const Element c = b.coefficients[w - 1][g][i];
          y = f.sub(y, f.mul(gain, f.mul(c, cache.symbol(b.group_units[g][i], s))));
        }
      }
      rhs[w - 1] = y;
    }
    const FieldVector x = solve(f, a, rhs);
    for (std::size_t i = 0; i < mine.size(); ++i) {
      const std::size_t g = mine[i];
      const UnitIndex u = b.group_units[g][b.groups[g].position_of(k)];
      FieldVector& dst = out[u];
      dst.resize(b.range.size());
      dst[s - b.range.begin] = x[i];
    }
  }
}

/// Output of one delivery pipeline over a shared placement.
struct FullPipeline {
  TransmissionLog log;
  std::vector<FullBlock> blocks;
  std::vector<Recovered> recovered;  // [k-1]
  std::uint64_t retries = 0;
};

/// Runs every (T, S) block in enumeration order over one symbol range.
inline FullPipeline deliver_full(const SystemConfig& cfg, const CachePlacement& p, const Demand& demand,
                                 SymbolRange range) {
  require_simulatable(cfg);
  const PrimeField f = cfg.field();
  FullPipeline out;
  out.recovered.resize(static_cast<std::size_t>(cfg.k_r));
  if (range.empty()) return out;

  std::size_t index = 0;
  for (const SubsetId& T : enumerate_subsets(cfg.k_t, cfg.t_t))
    for (const SubsetId& S : enumerate_subsets(cfg.k_r, cfg.t_t + cfg.t_r)) {
      // one coherence block per (T, S); redraw the channel when it is degenerate
      for (std::uint64_t attempt = 0;; ++attempt) {
        KeyedRng rng(cfg.seed, "full/channel", {index, attempt});
        FieldMatrix channel = FieldMatrix::random(f, static_cast<std::size_t>(cfg.k_r), static_cast<std::size_t>(cfg.k_t), rng);
        TransmissionLog scratch;
        try {
          std::uint64_t retries = 0;
          FullBlock b = build_block(f, cfg, p, demand, index, T, S, channel, range, attempt, scratch, retries);
          b.first_slot = out.log.slots.size();
          for (auto& s : scratch.slots) out.log.slots.push_back(std::move(s));
          out.retries += retries + attempt;
          out.blocks.push_back(std::move(b));
          break;
        } catch (const genericity_failure&) {
          if (attempt + 1 == kRetryCap) throw;
        } catch (const singular_system&) {
          if (attempt + 1 == kRetryCap) throw;
        }
      }
      ++index;
    }

  for (int k = 1; k <= cfg.k_r; ++k) {
    ReceiverCache cache(p, k);
    for (const FullBlock& b : out.blocks) decode_block(f, b, out.log, cache, out.recovered[static_cast<std::size_t>(k - 1)]);
  }
  return out;
}

/// True when receiver k recovered every needed unit bit-exactly over the range.
inline bool check_recovery(const CachePlacement& p, const Demand& d, int k, const Recovered& rec, SymbolRange range) {
  for (UnitIndex u : needed_units(p, d, k)) {
    auto it = rec.find(u);
    if (it == rec.end() || it->second.size() != range.size()) return false;
    for (std::size_t s = range.begin; s < range.end; ++s)
      if (it->second[s - range.begin] != p.symbol(u, s)) return false;
  }
  return true;
}

/// Needed (receiver, symbol) pairs over a range: the symbols a pipeline delivers.
inline std::uint64_t needed_symbol_count(const CachePlacement& p, const Demand& d, std::size_t range_size) {
  std::uint64_t n = 0;
  for (int k = 1; k <= static_cast<int>(p.rx_cache.size()); ++k) n += needed_units(p, d, k).size() * range_size;
  return n;
}

struct FullRun {
  CachePlacement placement;
  FullPipeline pipeline;
  DeliveryReport report;
};

/// Places caches with `symbols_per_minifile` symbols per unit and delivers them all.
inline FullRun run_full_delivery(const SystemConfig& cfg, const Demand& demand, std::size_t symbols_per_minifile = 1) {
  FullRun run;
  run.placement = place_caches(cfg, derived_dimensions(cfg, symbols_per_minifile));
  const SymbolRange range{0, symbols_per_minifile};
  run.pipeline = deliver_full(cfg, run.placement, demand, range);

  DeliveryReport& r = run.report;
  r.regime = Regime::full;
  r.seed = cfg.seed;
  r.symbols_per_minifile = symbols_per_minifile;
  r.slot_count = run.pipeline.log.slots.size();
  r.retries = run.pipeline.retries;
  r.symbols_delivered = needed_symbol_count(run.placement, demand, range.size());
  for (int k = 1; k <= cfg.k_r; ++k)
    r.decoded_ok.push_back(
        check_recovery(run.placement, demand, k, run.pipeline.recovered[static_cast<std::size_t>(k - 1)], range));
  r.finalize_dof();
  return run;
}

}  // namespace cachedof
