// Slot-level record of a delivery run and the per-run report.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachedof/prime_field.hpp"
#include "cachedof/rational.hpp"
#include "cachedof/subsets.hpp"

namespace cachedof {

/// Variable index of symbol s of unit u in a library with b symbols per unit.
inline std::size_t symbol_var(std::size_t unit, std::size_t s, std::size_t b) { return unit * b + s; }

/// Sparse linear form over library symbols, terms sorted by variable, no zero coefficients.
class LinearForm {
 public:
  using Term = std::pair<std::size_t, Element>;

  LinearForm() = default;

  static LinearForm variable(std::size_t var) {
    LinearForm f;
    f.terms_.emplace_back(var, 1);
    return f;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// this += scale * other
  void add_scaled(const PrimeField& f, const LinearForm& other, Element scale) {
    if (scale == 0 || other.terms_.empty()) return;
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
      if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        merged.emplace_back(b->first, f.mul(b->second, scale));
        ++b;
      } else {
        Element c = f.add(a->second, f.mul(b->second, scale));
        if (c != 0) merged.emplace_back(a->first, c);
        ++a;
        ++b;
      }
    }
    terms_ = std::move(merged);
  }

  Element coefficient(std::size_t var) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{var, 0},
                               [](const Term& x, const Term& y) { return x.first < y.first; });
    return (it != terms_.end() && it->first == var) ? it->second : 0;
  }

  Element evaluate(const PrimeField& f, std::span<const Element> values) const {
    Element acc = 0;
    for (const auto& [var, c] : terms_) acc = f.add(acc, f.mul(c, values[var]));
    return acc;
  }

  bool operator==(const LinearForm&) const = default;

 private:
  std::vector<Term> terms_;
};

enum class Regime { full, delayed, mixed };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::full: return "full";
    case Regime::delayed: return "delayed";
    case Regime::mixed: return "mixed";
  }
  return "?";
}

/// One channel use.
struct SlotRecord {
  Regime regime = Regime::full;
  std::size_t block = 0;  // index of the (T, S) round in enumeration order
  SubsetId T;
  SubsetId S;
  std::size_t omega = 0;   // full CSIT: repetition index, 1-based
  std::size_t symbol = 0;  // full CSIT: symbol position within the minifiles
  int phase = 0;           // delayed CSIT: order of the symbols sent
  SubsetId audience;       // delayed CSIT: receivers the slot's symbols are for
  FieldMatrix channel;     // K_r x K_t
  FieldVector transmit;    // K_t, zero off the active transmitters
  FieldVector received;    // K_r, noiseless
  std::vector<LinearForm> transmit_forms;                   // K_t, over library symbols
  std::vector<std::pair<SubsetId, FieldVector>> precoders;  // full CSIT: u^R for each R

  /// Coefficients of receiver k's observation over library symbols.
  LinearForm equation(const PrimeField& f, int k) const {
    LinearForm eq;
    for (std::size_t l = 0; l < transmit_forms.size(); ++l)
      eq.add_scaled(f, transmit_forms[l], channel(static_cast<std::size_t>(k - 1), l));
    return eq;
  }
};

struct TransmissionLog {
  std::vector<SlotRecord> slots;
};

/// Received values y = H x for every receiver.
inline FieldVector receive(const PrimeField& f, const FieldMatrix& channel, std::span<const Element> x) {
  return multiply(f, channel, x);
}

struct DeliveryReport {
  Regime regime = Regime::full;
  std::vector<bool> decoded_ok;
  std::uint64_t slot_count = 0;
  std::uint64_t symbols_delivered = 0;  // one per (receiver, needed symbol)
  std::optional<Rational> empirical_dof;
  std::uint64_t seed = 0;
  std::uint64_t retries = 0;
  std::size_t symbols_per_minifile = 1;

  bool all_decoded() const { return std::all_of(decoded_ok.begin(), decoded_ok.end(), [](bool b) { return b; }); }

  void finalize_dof() {
    if (all_decoded() && slot_count > 0)
      empirical_dof = Rational(BigInt(symbols_delivered), BigInt(slot_count));
    else
      empirical_dof.reset();
  }

  bool operator==(const DeliveryReport&) const = default;
};

inline nlohmann::json report_to_json(const DeliveryReport& r) {
  nlohmann::json j;
  j["regime"] = to_string(r.regime);
  j["decoded_ok"] = r.decoded_ok;
  j["slot_count"] = r.slot_count;
  j["symbols_delivered"] = r.symbols_delivered;
  j["empirical_dof"] = r.empirical_dof ? nlohmann::json(to_fraction_string(*r.empirical_dof)) : nlohmann::json();
  j["seed"] = r.seed;
  j["retries"] = r.retries;
  j["symbols_per_minifile"] = r.symbols_per_minifile;
  return j;
}

}  // namespace cachedof
