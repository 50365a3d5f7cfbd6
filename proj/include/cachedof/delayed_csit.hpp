// Delayed-CSIT delivery. For every (T, S) round the transmitters in T build one
// order-(t_r+1) message per R ⊆ S (the sum of the minifiles the members of R
// miss, each cached by the others) and deliver them with a retrospective
// multi-phase scheduler that never looks at the current channel:
//
//   phase j, audience S' (|S'| = j): K-j+1 order-j symbols go out raw on K-j+1
//   transmitters; each receiver outside S' overhears one equation.
//   For every (j+1)-subset A, the j+1 equations overheard by its members in the
//   same round are compressed into j random combinations, which become the
//   order-(j+1) symbols for A.
//   Order-K symbols are broadcast one per slot.
//
// Receivers decode top-down: order-K symbols first, then each lower phase from
// its own observation plus the equations recovered from the phase above.
#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cachedof/dof_calc.hpp"
#include "cachedof/errors.hpp"
#include "cachedof/full_csit.hpp"
#include "cachedof/model.hpp"
#include "cachedof/placement.hpp"
#include "cachedof/prime_field.hpp"
#include "cachedof/rational.hpp"
#include "cachedof/rng.hpp"
#include "cachedof/subsets.hpp"
#include "cachedof/transmission.hpp"

namespace cachedof {

/// Slots needed for n order-j symbols among K receivers:
/// T_K(n) = n,  T_j(n) = n/(K-j+1) + T_{j+1}(n (K-j)/(K-j+1) · j/(j+1)).
inline Rational mat_slot_count(long K, long j, const Rational& n) {
  if (j < 1 || j > K) throw domain_error("message order j must lie in [1, K]");
  if (n < 0) throw domain_error("symbol count must be nonnegative");
  if (j == K) return n;
  const Rational next = n * Rational(K - j, K - j + 1) * Rational(j, j + 1);
  return n / (K - j + 1) + mat_slot_count(K, j + 1, next);
}

/// Smallest per-message batch that makes every phase's slot count integral.
inline std::size_t minimal_mat_batch(int K, int j0) {
  if (j0 < 1 || j0 > K) throw domain_error("message order j must lie in [1, K]");
  BigInt l = 1;
  Rational share = 1;  // symbols per subset in phase j, per fresh symbol per message
  for (int j = j0; j < K; ++j) {
    const Rational per_slot = share / (K - j + 1);
    l = boost::multiprecision::lcm(l, denominator_of(per_slot));
    share = per_slot * j;
  }
  return static_cast<std::size_t>(l);
}

/// A coded message useful to exactly `order` receivers.
struct OrderMessage {
  enum class Provenance { fresh, derived };

  int order = 1;
  SubsetId audience;
  FieldVector symbols;
  std::vector<LinearForm> forms;  // per symbol, over library symbols
  Provenance provenance = Provenance::fresh;
  std::vector<std::pair<UnitIndex, int>> sources;  // fresh only: (unit, receiver that wants it)
};

/// One slot of the schedule, in local receiver numbering 1..K.
struct MatSlot {
  int order = 1;
  std::size_t phase = 0;   // order - j0
  std::size_t subset = 0;  // index of the audience among the order-subsets
  SubsetId audience;
  std::size_t round = 0;   // slot index within the audience
  std::size_t width = 1;   // symbols sent (= active transmitters)
};

struct MatPhase {
  int order = 1;
  std::vector<SubsetId> subsets;
  std::size_t symbols_per_subset = 0;
  std::size_t slots_per_subset = 0;
  std::size_t first_slot = 0;
};

/// Static slot plan for K receivers, L transmitters and fresh order j0.
struct SlotPlan {
  int K = 1;
  int j0 = 1;
  int L = 1;
  std::size_t batch = 0;
  std::vector<MatPhase> phases;
  std::vector<MatSlot> slots;

  std::size_t slot_index(std::size_t phase, std::size_t subset, std::size_t round) const {
    const MatPhase& p = phases.at(phase);
    return p.first_slot + subset * p.slots_per_subset + round;
  }
};

inline SlotPlan plan_mat(int K, int j0, int L, std::size_t batch) {
  if (j0 < 1 || j0 > K) throw domain_error("message order j must lie in [1, K]");
  if (L < K - j0 + 1) throw domain_error("L >= K - j + 1 is required");
  const std::size_t q = minimal_mat_batch(K, j0);
  if (batch == 0 || batch % q != 0)
    throw divisibility_error("batch " + std::to_string(batch) + " is not a positive multiple of " + std::to_string(q), q);

  SlotPlan plan{K, j0, L, batch, {}, {}};
  std::size_t per_subset = batch;
  for (int j = j0; j <= K; ++j) {
    MatPhase ph;
    ph.order = j;
    ph.subsets = enumerate_subsets(K, j);
    ph.symbols_per_subset = per_subset;
    const std::size_t width = static_cast<std::size_t>(K - j + 1);
    ph.slots_per_subset = per_subset / width;
    ph.first_slot = plan.slots.size();
    for (std::size_t a = 0; a < ph.subsets.size(); ++a)
      for (std::size_t r = 0; r < ph.slots_per_subset; ++r)
        plan.slots.push_back({j, plan.phases.size(), a, ph.subsets[a], r, width});
    per_subset = ph.slots_per_subset * static_cast<std::size_t>(j);
    plan.phases.push_back(std::move(ph));
  }
  return plan;
}

/// Random coefficients drawn for the compressions; shared with the receivers.
struct CombinationKey {
  std::uint64_t seed = 0;
  std::uint64_t round = 0;
};

/// What the transmitters send, computed causally from earlier slots' channels.
struct MatTransmission {
  std::vector<FieldVector> transmit;                  // per slot, L entries
  std::vector<std::vector<LinearForm>> forms;         // per slot, L entries
  std::vector<std::vector<OrderMessage>> messages;    // [phase][subset]
  std::vector<std::vector<std::vector<FieldMatrix>>> combos;  // [phase][subset of order j+1][round]: j x (j+1)
  std::uint64_t retries = 0;
};

namespace detail {

/// j x (j+1) combination with every j x j minor (one column dropped) invertible,
/// so each member of A can solve from its own equation plus the j combinations.
inline FieldMatrix draw_compression(const PrimeField& f, int j, const CombinationKey& key, std::size_t phase,
                                    std::size_t subset, std::size_t round, std::uint64_t& retries) {
  for (std::uint64_t attempt = 0; attempt < kRetryCap; ++attempt) {
    KeyedRng rng(key.seed, "delayed/combine", {key.round, phase, subset, round, attempt});
    FieldMatrix c = FieldMatrix::random(f, static_cast<std::size_t>(j), static_cast<std::size_t>(j + 1), rng);
    bool ok = true;
    for (std::size_t drop = 0; drop <= static_cast<std::size_t>(j) && ok; ++drop) {
      FieldMatrix minor(static_cast<std::size_t>(j), static_cast<std::size_t>(j));
      for (std::size_t r = 0; r < minor.rows(); ++r)
        for (std::size_t col = 0, out = 0; col <= static_cast<std::size_t>(j); ++col)
          if (col != drop) minor(r, out++) = c(r, col);
      ok = is_invertible(f, minor);
    }
    if (ok) return c;
    ++retries;
  }
  throw genericity_failure("no invertible compression for a group of order " + std::to_string(j + 1));
}

}  // namespace detail

/// Computes every slot's transmit vector. The transmit vector of slot i is a
/// function of the fresh messages, the shared randomness and channels[0..i)
/// only; channels[i] and later are read solely to form overheard equations for
/// higher phases, which are sent strictly after the phase that produced them.
/// `channels` are local K x L views (rows: receivers of S, cols: transmitters of T).
inline MatTransmission compute_mat_transmissions(const PrimeField& f, const SlotPlan& plan,
                                                 const std::vector<OrderMessage>& fresh,
                                                 std::span<const FieldMatrix> channels, const CombinationKey& key) {
  if (fresh.size() != plan.phases.front().subsets.size())
    throw domain_error("expected one fresh message per order-j0 audience");
  const std::size_t L = static_cast<std::size_t>(plan.L);
  MatTransmission out;
  out.transmit.resize(plan.slots.size());
  out.forms.resize(plan.slots.size());
  out.messages.resize(plan.phases.size());
  out.combos.resize(plan.phases.size());
  out.messages[0] = fresh;

  for (std::size_t p = 0; p < plan.phases.size(); ++p) {
    const MatPhase& ph = plan.phases[p];
    if (p > 0) {
      // Phase p's symbols come from phase p-1's overheard equations, all of
      // which were observed in earlier slots.
      const MatPhase& prev = plan.phases[p - 1];
      const int j = prev.order;
      out.combos[p - 1].resize(ph.subsets.size());
      out.messages[p].resize(ph.subsets.size());
      for (std::size_t a = 0; a < ph.subsets.size(); ++a) {
        const SubsetId& A = ph.subsets[a];
        OrderMessage msg;
        msg.order = ph.order;
        msg.audience = A;
        msg.provenance = OrderMessage::Provenance::derived;
        for (std::size_t rho = 0; rho < prev.slots_per_subset; ++rho) {
          // equation overheard by member m in slot (A \ {m}, rho)
          FieldVector eq_values;
          std::vector<LinearForm> eq_forms;
          for (int m : A.members()) {
            const std::size_t sub = static_cast<std::size_t>(
                std::find(prev.subsets.begin(), prev.subsets.end(), A.without(m)) - prev.subsets.begin());
            const std::size_t slot = plan.slot_index(p - 1, sub, rho);
            const auto h = channels[slot].row(static_cast<std::size_t>(m - 1));
            Element v = 0;
            LinearForm form;
            for (std::size_t t = 0; t < plan.slots[slot].width; ++t) {
              v = f.add(v, f.mul(h[t], out.transmit[slot][t]));
              form.add_scaled(f, out.forms[slot][t], h[t]);
            }
            eq_values.push_back(v);
            eq_forms.push_back(std::move(form));
          }
          FieldMatrix c = detail::draw_compression(f, j, key, p - 1, a, rho, out.retries);
          for (std::size_t row = 0; row < c.rows(); ++row) {
            Element v = 0;
            LinearForm form;
            for (std::size_t i = 0; i < c.cols(); ++i) {
              v = f.add(v, f.mul(c(row, i), eq_values[i]));
              form.add_scaled(f, eq_forms[i], c(row, i));
            }
            msg.symbols.push_back(v);
            msg.forms.push_back(std::move(form));
          }
          out.combos[p - 1][a].push_back(std::move(c));
        }
        out.messages[p][a] = std::move(msg);
      }
    }
    for (std::size_t a = 0; a < ph.subsets.size(); ++a) {
      const OrderMessage& msg = out.messages[p][a];
      if (msg.symbols.size() != ph.symbols_per_subset) throw domain_error("message length does not match the plan");
      for (std::size_t rho = 0; rho < ph.slots_per_subset; ++rho) {
        const std::size_t slot = plan.slot_index(p, a, rho);
        const std::size_t width = plan.slots[slot].width;
        out.transmit[slot].assign(L, 0);
        out.forms[slot].assign(L, LinearForm{});
        for (std::size_t t = 0; t < width; ++t) {
          out.transmit[slot][t] = msg.symbols[rho * width + t];
          out.forms[slot][t] = msg.forms[rho * width + t];
        }
      }
    }
  }
  return out;
}

/// Channel draw is usable when every audience member can resolve its slot:
/// rows {k} ∪ (non-audience) over the active transmitters are invertible.
inline bool mat_slot_decodable(const PrimeField& f, const SlotPlan& plan, const MatSlot& slot,
                               const FieldMatrix& local) {
  const std::size_t width = slot.width;
  for (int k : slot.audience.members()) {
    std::vector<int> rows{k};
    for (int m = 1; m <= plan.K; ++m)
      if (!slot.audience.contains(m)) rows.push_back(m);
    FieldMatrix a(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < width; ++c) a(r, c) = local(static_cast<std::size_t>(rows[r] - 1), c);
    if (!is_invertible(f, a)) return false;
  }
  return true;
}

/// Structured decoding at local receiver k: returns the symbols of every
/// order-j0 message whose audience contains k, indexed by subset.
inline std::map<std::size_t, FieldVector> decode_mat(const PrimeField& f, const SlotPlan& plan,
                                                     const MatTransmission& tx, std::span<const FieldMatrix> channels,
                                                     std::span<const Element> received_at_k, int k) {
  // decoded[p][a]: symbols of the phase-p message for subset a (only subsets containing k)
  std::vector<std::map<std::size_t, FieldVector>> decoded(plan.phases.size());
  const std::size_t top = plan.phases.size() - 1;

  for (std::size_t p = top + 1; p-- > 0;) {
    const MatPhase& ph = plan.phases[p];
    const std::size_t width = static_cast<std::size_t>(plan.K - ph.order + 1);
    for (std::size_t a = 0; a < ph.subsets.size(); ++a) {
      const SubsetId& audience = ph.subsets[a];
      if (!audience.contains(k)) continue;
      FieldVector symbols(ph.symbols_per_subset);
      for (std::size_t rho = 0; rho < ph.slots_per_subset; ++rho) {
        const std::size_t slot = plan.slot_index(p, a, rho);
        const FieldMatrix& h = channels[slot];
        // own observation plus the equations overheard by everyone outside the audience
        std::vector<int> rows{k};
        FieldVector rhs{received_at_k[slot]};
        for (int m = 1; m <= plan.K; ++m) {
          if (audience.contains(m)) continue;
          // recover L_m(audience, rho) from group A = audience ∪ {m} in phase p+1
          const MatPhase& up = plan.phases.at(p + 1);
          const SubsetId A = audience.with(m);
          const std::size_t ua = static_cast<std::size_t>(std::find(up.subsets.begin(), up.subsets.end(), A) -
                                                          up.subsets.begin());
          const FieldMatrix& c = tx.combos[p][ua][rho];
          const std::size_t j = static_cast<std::size_t>(ph.order);
          FieldMatrix sys(j + 1, j + 1);
          FieldVector b(j + 1);
          const FieldVector& combos = decoded[p + 1].at(ua);
          for (std::size_t r = 0; r < j; ++r) {
            for (std::size_t col = 0; col <= j; ++col) sys(r, col) = c(r, col);
            b[r] = combos[rho * j + r];
          }
          // k's own overheard equation in the group: slot (A \ {k}, rho)
          const std::size_t own_sub = static_cast<std::size_t>(
              std::find(ph.subsets.begin(), ph.subsets.end(), A.without(k)) - ph.subsets.begin());
          sys(j, A.position_of(k)) = 1;
          b[j] = received_at_k[plan.slot_index(p, own_sub, rho)];
          const FieldVector eqs = solve(f, sys, b);
          rows.push_back(m);
          rhs.push_back(eqs[A.position_of(m)]);
        }
        FieldMatrix sys(rows.size(), width);
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (std::size_t col = 0; col < width; ++col) sys(r, col) = h(static_cast<std::size_t>(rows[r] - 1), col);
        const FieldVector x = solve(f, sys, rhs);
        for (std::size_t t = 0; t < width; ++t) symbols[rho * width + t] = x[t];
      }
      decoded[p][a] = std::move(symbols);
    }
  }
  return decoded[0];
}

/// Fresh order-(t_r+1) messages of round (T, S) over a symbol range: for each
/// R ⊆ S, U_R = sum over r in R of W_{d_r, T, R\{r}}^{R'}.
inline std::vector<OrderMessage> build_order_messages(const PrimeField& f, const SystemConfig& cfg,
                                                      const CachePlacement& p, const Demand& demand,
                                                      const SubsetId& T, const SubsetId& S, SymbolRange range) {
  std::vector<OrderMessage> out;
  for (const SubsetId& R : enumerate_subsets_of(S, cfg.t_r + 1)) {
    OrderMessage msg;
    msg.order = cfg.t_r + 1;
    msg.audience = R;
    for (int r : R.members())
      msg.sources.emplace_back(p.catalog.index_of(p.catalog.served_unit(demand.of(r), T, S, R, r)), r);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      Element v = 0;
      LinearForm form;
      for (const auto& [u, r] : msg.sources) {
        v = f.add(v, p.symbol(u, s));
        form.add_scaled(f, LinearForm::variable(symbol_var(u, s, p.symbols_per_unit)), 1);
      }
      msg.symbols.push_back(v);
      msg.forms.push_back(std::move(form));
    }
    out.push_back(std::move(msg));
  }
  return out;
}

/// Local K x L view: rows are the receivers of S, columns the transmitters of T.
inline FieldMatrix local_channel(const FieldMatrix& global, const SubsetId& T, const SubsetId& S) {
  FieldMatrix m(S.size(), T.size());
  for (std::size_t r = 0; r < S.size(); ++r)
    for (std::size_t c = 0; c < T.size(); ++c)
      m(r, c) = global(static_cast<std::size_t>(S.members()[r] - 1), static_cast<std::size_t>(T.members()[c] - 1));
  return m;
}

/// Relabels messages from global receivers to local positions within S.
inline std::vector<OrderMessage> localize(const std::vector<OrderMessage>& msgs, const SubsetId& S) {
  std::vector<OrderMessage> out = msgs;
  for (auto& m : out) {
    std::vector<int> local;
    for (int r : m.audience.members()) local.push_back(static_cast<int>(S.position_of(r)) + 1);
    m.audience = SubsetId(static_cast<int>(S.size()), std::move(local));
  }
  return out;
}

/// One (T, S) round of the delayed pipeline.
struct DelayedRound {
  std::size_t index = 0;
  SubsetId T;
  SubsetId S;
  SymbolRange range;
  SlotPlan plan;
  std::vector<OrderMessage> fresh;  // global audiences
  std::vector<FieldMatrix> channels;  // global K_r x K_t per slot
  MatTransmission transmission;
  std::size_t first_slot = 0;
};

/// Transmit vectors (global, K_t entries) of a round for a given channel history.
inline std::vector<FieldVector> round_transmit_vectors(const PrimeField& f, const SystemConfig& cfg,
                                                       const DelayedRound& round,
                                                       std::span<const FieldMatrix> global_channels) {
  std::vector<FieldMatrix> local;
  for (const FieldMatrix& g : global_channels) local.push_back(local_channel(g, round.T, round.S));
  MatTransmission tx = compute_mat_transmissions(f, round.plan, localize(round.fresh, round.S), local,
                                                 CombinationKey{cfg.seed, round.index});
  std::vector<FieldVector> out;
  for (const FieldVector& x : tx.transmit) {
    FieldVector g(static_cast<std::size_t>(cfg.k_t), 0);
    for (std::size_t t = 0; t < x.size(); ++t) g[static_cast<std::size_t>(round.T.members()[t] - 1)] = x[t];
    out.push_back(std::move(g));
  }
  return out;
}

struct DelayedPipeline {
  TransmissionLog log;
  std::vector<DelayedRound> rounds;
  std::vector<Recovered> recovered;  // [k-1]
  std::uint64_t retries = 0;
};

/// Runs Algorithm-1 rounds over every (T, S) with messages over `range`.
inline DelayedPipeline deliver_delayed(const SystemConfig& cfg, const CachePlacement& p, const Demand& demand,
                                       SymbolRange range) {
  require_simulatable(cfg);
  const PrimeField f = cfg.field();
  const int K = cfg.t_t + cfg.t_r;
  const int j0 = cfg.t_r + 1;
  DelayedPipeline out;
  out.recovered.resize(static_cast<std::size_t>(cfg.k_r));
  if (range.empty()) return out;

  std::size_t index = 0;
  for (const SubsetId& T : enumerate_subsets(cfg.k_t, cfg.t_t))
    for (const SubsetId& S : enumerate_subsets(cfg.k_r, K)) {
      DelayedRound round;
      round.index = index;
      round.T = T;
      round.S = S;
      round.range = range;
      round.plan = plan_mat(K, j0, cfg.t_t, range.size());
      round.fresh = build_order_messages(f, cfg, p, demand, T, S, range);

      // Nature draws an independent channel per slot.
      std::vector<FieldMatrix> local;
      for (std::size_t i = 0; i < round.plan.slots.size(); ++i) {
        for (std::uint64_t attempt = 0;; ++attempt) {
          if (attempt == kRetryCap) throw genericity_failure("degenerate channel draws in delayed slot");
          KeyedRng rng(cfg.seed, "delayed/channel", {index, i, attempt});
          FieldMatrix g = FieldMatrix::random(f, static_cast<std::size_t>(cfg.k_r), static_cast<std::size_t>(cfg.k_t), rng);
          FieldMatrix l = local_channel(g, T, S);
          if (mat_slot_decodable(f, round.plan, round.plan.slots[i], l)) {
            round.channels.push_back(std::move(g));
            local.push_back(std::move(l));
            out.retries += attempt;
            break;
          }
        }
      }

      round.transmission = compute_mat_transmissions(f, round.plan, localize(round.fresh, S), local,
                                                     CombinationKey{cfg.seed, index});
      out.retries += round.transmission.retries;
      round.first_slot = out.log.slots.size();

      for (std::size_t i = 0; i < round.plan.slots.size(); ++i) {
        const MatSlot& ms = round.plan.slots[i];
        SlotRecord slot;
        slot.regime = Regime::delayed;
        slot.block = index;
        slot.T = T;
        slot.S = S;
        slot.phase = ms.order;
        std::vector<int> aud;
        for (int m : ms.audience.members()) aud.push_back(S.members()[static_cast<std::size_t>(m - 1)]);
        slot.audience = SubsetId(cfg.k_r, std::move(aud));
        slot.channel = round.channels[i];
        slot.transmit.assign(static_cast<std::size_t>(cfg.k_t), 0);
        slot.transmit_forms.assign(static_cast<std::size_t>(cfg.k_t), LinearForm{});
        for (std::size_t t = 0; t < T.size(); ++t) {
          const std::size_t l = static_cast<std::size_t>(T.members()[t] - 1);
          slot.transmit[l] = round.transmission.transmit[i][t];
          slot.transmit_forms[l] = round.transmission.forms[i][t];
        }
        slot.received = receive(f, slot.channel, slot.transmit);
        out.log.slots.push_back(std::move(slot));
      }

      // Decode at every receiver of S, then strip cached partners.
      for (int k : S.members()) {
        const int local_k = static_cast<int>(S.position_of(k)) + 1;
        FieldVector y;
        for (std::size_t i = 0; i < round.plan.slots.size(); ++i)
          y.push_back(out.log.slots[round.first_slot + i].received[static_cast<std::size_t>(k - 1)]);
        const auto messages = decode_mat(f, round.plan, round.transmission, local, y, local_k);
        ReceiverCache cache(p, k);
        Recovered& rec = out.recovered[static_cast<std::size_t>(k - 1)];
        for (const auto& [a, symbols] : messages) {
          const OrderMessage& msg = round.fresh[a];
          UnitIndex wanted = 0;
          for (const auto& [u, r] : msg.sources)
            if (r == k) wanted = u;
          FieldVector& dst = rec[wanted];
          dst.assign(range.size(), 0);
          for (std::size_t s = 0; s < range.size(); ++s) {
            Element v = symbols[s];
            for (const auto& [u, r] : msg.sources)
              if (r != k) v = f.sub(v, cache.symbol(u, range.begin + s));
            dst[s] = v;
          }
        }
      }
      out.rounds.push_back(std::move(round));
      ++index;
    }
  return out;
}

struct DelayedRun {
  CachePlacement placement;
  DelayedPipeline pipeline;
  DeliveryReport report;
};

/// Places caches with `batch` symbols per minifile (0 picks the smallest valid
/// batch) and delivers everything under delayed CSIT.
inline DelayedRun run_delayed_delivery(const SystemConfig& cfg, const Demand& demand, std::size_t batch = 0) {
  require_simulatable(cfg);
  const std::size_t q = minimal_mat_batch(cfg.t_t + cfg.t_r, cfg.t_r + 1);
  if (batch == 0) batch = q;
  if (batch % q != 0)
    throw divisibility_error("batch " + std::to_string(batch) + " is not a multiple of " + std::to_string(q), q);
  DelayedRun run;
  run.placement = place_caches(cfg, derived_dimensions(cfg, batch));
  const SymbolRange range{0, batch};
  run.pipeline = deliver_delayed(cfg, run.placement, demand, range);

  DeliveryReport& r = run.report;
  r.regime = Regime::delayed;
  r.seed = cfg.seed;
  r.symbols_per_minifile = batch;
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
