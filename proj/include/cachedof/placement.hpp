// Library split into subfiles W_{n,T,R} and minifiles W_{n,T,R}^{R'}, and the
// symmetric placement: transmitter l holds every unit with l in T, receiver k
// every unit with k in R.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachedof/model.hpp"
#include "cachedof/prime_field.hpp"
#include "cachedof/rng.hpp"
#include "cachedof/subsets.hpp"

namespace cachedof {

/// Addresses one minifile: file n, transmitter set T (|T| = t_t), receiver set
/// R (|R| = t_r), zero-forcing index set R' within [K_r - t_r - 1] (|R'| = t_t - 1).
struct MinifileId {
  int n = 1;
  SubsetId T;
  SubsetId R;
  SubsetId Rp;

  bool operator==(const MinifileId&) const = default;
  auto operator<=>(const MinifileId&) const = default;

  std::string to_string() const {
    return "W[" + std::to_string(n) + "," + T.to_string() + "," + R.to_string() + "," + Rp.to_string() + "]";
  }
};

using UnitIndex = std::size_t;

/// Bijection between MinifileIds and dense indices; order is n, then T, R, R'
/// each lexicographic.
class UnitCatalog {
 public:
  UnitCatalog() = default;
  explicit UnitCatalog(const SystemConfig& c)
      : n_files_(c.n_files),
        k_r_(c.k_r),
        t_r_(c.t_r),
        tx_sets_(enumerate_subsets(c.k_t, c.t_t)),
        rx_sets_(enumerate_subsets(c.k_r, c.t_r)),
        zf_sets_(enumerate_subsets(c.k_r - c.t_r - 1, c.t_t - 1)) {}

  std::size_t size() const { return static_cast<std::size_t>(n_files_) * tx_sets_.size() * rx_sets_.size() * zf_sets_.size(); }

  UnitIndex index_of(const MinifileId& id) const {
    if (id.n < 1 || id.n > n_files_) throw index_out_of_range("file index out of range");
    return ((static_cast<std::size_t>(id.n - 1) * tx_sets_.size() + tx_sets_.rank(id.T)) * rx_sets_.size() +
            rx_sets_.rank(id.R)) *
               zf_sets_.size() +
           zf_sets_.rank(id.Rp);
  }

  MinifileId id_of(UnitIndex u) const {
    if (u >= size()) throw index_out_of_range("unit index out of range");
    std::size_t zf = u % zf_sets_.size();
    u /= zf_sets_.size();
    std::size_t rx = u % rx_sets_.size();
    u /= rx_sets_.size();
    std::size_t tx = u % tx_sets_.size();
    u /= tx_sets_.size();
    return {static_cast<int>(u) + 1, tx_sets_.at(tx), rx_sets_.at(rx), zf_sets_.at(zf)};
  }

  /// The minifile receiver r needs from round (T, S) when served inside group
  /// R (r in R, |R| = t_r + 1): W_{d_r, T, R\{r}}^{R'} with f_{K_r}^{R}(R') = S \ R.
  MinifileId served_unit(int file, const SubsetId& T, const SubsetId& S, const SubsetId& R, int r) const {
    SubsetId Rp = complement_preimage(k_r_, R, S.minus(R));
    return {file, T, R.without(r), Rp};
  }

  const SubsetIndex& tx_sets() const noexcept { return tx_sets_; }
  const SubsetIndex& rx_sets() const noexcept { return rx_sets_; }
  const SubsetIndex& zf_sets() const noexcept { return zf_sets_; }

 private:
  int n_files_ = 0;
  int k_r_ = 0;
  int t_r_ = 0;
  SubsetIndex tx_sets_;
  SubsetIndex rx_sets_;
  SubsetIndex zf_sets_;
};

/// Cache contents of every node plus the library payload itself.
struct CachePlacement {
  UnitCatalog catalog;
  std::size_t symbols_per_unit = 1;
  std::vector<std::vector<UnitIndex>> tx_cache;  // [l-1] sorted unit indices
  std::vector<std::vector<UnitIndex>> rx_cache;  // [k-1]
  std::vector<Element> payload;                  // unit * symbols_per_unit + s

  Element symbol(UnitIndex u, std::size_t s) const { return payload.at(u * symbols_per_unit + s); }

  std::span<const Element> unit_payload(UnitIndex u) const {
    return {payload.data() + u * symbols_per_unit, symbols_per_unit};
  }

  bool rx_holds(int k, UnitIndex u) const {
    const auto& c = rx_cache.at(static_cast<std::size_t>(k - 1));
    return std::binary_search(c.begin(), c.end(), u);
  }

  bool tx_holds(int l, UnitIndex u) const {
    const auto& c = tx_cache.at(static_cast<std::size_t>(l - 1));
    return std::binary_search(c.begin(), c.end(), u);
  }
};

/// Read-only view of one receiver's cache; asking for anything it does not hold throws.
class ReceiverCache {
 public:
  ReceiverCache(const CachePlacement& p, int k) : placement_(&p), k_(k) {}

  int receiver() const noexcept { return k_; }
  bool holds(UnitIndex u) const { return placement_->rx_holds(k_, u); }

  Element symbol(UnitIndex u, std::size_t s) const {
    if (!holds(u)) throw decoding_failure("receiver " + std::to_string(k_) + " does not cache unit " + std::to_string(u));
    return placement_->symbol(u, s);
  }

 private:
  const CachePlacement* placement_;
  int k_;
};

inline CachePlacement place_caches(const SystemConfig& c, const Dimensions& dims) {
  require_simulatable(c);
  CachePlacement p;
  p.catalog = UnitCatalog(c);
  p.symbols_per_unit = dims.symbols_per_minifile;
  if (p.catalog.size() != dims.total_units) throw domain_error("dimensions do not match the configuration");
  p.tx_cache.resize(static_cast<std::size_t>(c.k_t));
  p.rx_cache.resize(static_cast<std::size_t>(c.k_r));

  const PrimeField f = c.field();
  p.payload.resize(p.catalog.size() * p.symbols_per_unit);
  for (UnitIndex u = 0; u < p.catalog.size(); ++u) {
    MinifileId id = p.catalog.id_of(u);
    for (int l : id.T.members()) p.tx_cache[static_cast<std::size_t>(l - 1)].push_back(u);
    for (int k : id.R.members()) p.rx_cache[static_cast<std::size_t>(k - 1)].push_back(u);
    for (std::size_t s = 0; s < p.symbols_per_unit; ++s) {
      KeyedRng rng(c.seed, "payload", {u, s});
      p.payload[u * p.symbols_per_unit + s] = f.random(rng);
    }
  }
  return p;
}

/// Units per transmitter: N * C(K_t-1, t_t-1) * C(K_r, t_r) * C(K_r-t_r-1, t_t-1).
inline std::uint64_t expected_tx_units(const SystemConfig& c) {
  return static_cast<std::uint64_t>(c.n_files) * binomial(c.k_t - 1, c.t_t - 1) * binomial(c.k_r, c.t_r) *
         binomial(c.k_r - c.t_r - 1, c.t_t - 1);
}

/// Units per receiver: N * C(K_t, t_t) * C(K_r-1, t_r-1) * C(K_r-t_r-1, t_t-1).
inline std::uint64_t expected_rx_units(const SystemConfig& c) {
  return static_cast<std::uint64_t>(c.n_files) * binomial(c.k_t, c.t_t) * binomial(c.k_r - 1, c.t_r - 1) *
         binomial(c.k_r - c.t_r - 1, c.t_t - 1);
}

struct PlacementViolation {
  enum class Rule { budget, membership, malformed };
  Rule rule;
  std::string node;  // "tx 2", "rx 1"
  std::string detail;
};

/// Empty iff every node holds exactly its sub-library within its cache budget.
/// A node over budget reports one budget violation; a node missing units it
/// must hold reports one membership violation.
inline std::vector<PlacementViolation> verify_placement(const CachePlacement& p, const SystemConfig& c) {
  std::vector<PlacementViolation> out;
  const std::size_t total = p.catalog.size();
  if (p.payload.size() != total * p.symbols_per_unit)
    out.push_back({PlacementViolation::Rule::malformed, "library", "payload size does not match the unit count"});

  auto check = [&](const std::vector<std::vector<UnitIndex>>& caches, const char* kind, std::uint64_t budget,
                   auto belongs) {
    for (std::size_t i = 0; i < caches.size(); ++i) {
      const int node = static_cast<int>(i) + 1;
      const std::string name = std::string(kind) + " " + std::to_string(node);
      const auto& cache = caches[i];
      if (!std::is_sorted(cache.begin(), cache.end()) ||
          std::adjacent_find(cache.begin(), cache.end()) != cache.end() ||
          (!cache.empty() && cache.back() >= total)) {
        out.push_back({PlacementViolation::Rule::malformed, name, "cache index list is not a sorted set of valid units"});
        continue;
      }
      if (cache.size() > budget)
        out.push_back({PlacementViolation::Rule::budget, name,
                       "holds " + std::to_string(cache.size()) + " units, budget is " + std::to_string(budget)});
      std::size_t missing = 0;
      for (UnitIndex u = 0; u < total; ++u)
        if (belongs(node, p.catalog.id_of(u)) && !std::binary_search(cache.begin(), cache.end(), u)) ++missing;
      if (missing > 0)
        out.push_back({PlacementViolation::Rule::membership, name,
                       "missing " + std::to_string(missing) + " units of its sub-library"});
    }
  };
  if (p.tx_cache.size() != static_cast<std::size_t>(c.k_t) || p.rx_cache.size() != static_cast<std::size_t>(c.k_r)) {
    out.push_back({PlacementViolation::Rule::malformed, "network", "cache count does not match k_t / k_r"});
    return out;
  }
  check(p.tx_cache, "tx", expected_tx_units(c), [](int l, const MinifileId& id) { return id.T.contains(l); });
  check(p.rx_cache, "rx", expected_rx_units(c), [](int k, const MinifileId& id) { return id.R.contains(k); });
  return out;
}

/// Units receiver k must obtain during delivery: every unit of its demanded
/// file that it does not cache.
inline std::vector<UnitIndex> needed_units(const CachePlacement& p, const Demand& d, int k) {
  std::vector<UnitIndex> out;
  for (UnitIndex u = 0; u < p.catalog.size(); ++u) {
    MinifileId id = p.catalog.id_of(u);
    if (id.n == d.of(k) && !id.R.contains(k)) out.push_back(u);
  }
  return out;
}

inline nlohmann::json subset_json(const SubsetId& s) { return s.members(); }

/// One JSON record per unit with the nodes actually holding it and its payload.
inline nlohmann::json unit_record(const CachePlacement& p, UnitIndex u) {
  MinifileId id = p.catalog.id_of(u);
  std::vector<int> tx, rx;
  for (std::size_t l = 0; l < p.tx_cache.size(); ++l)
    if (p.tx_holds(static_cast<int>(l) + 1, u)) tx.push_back(static_cast<int>(l) + 1);
  for (std::size_t k = 0; k < p.rx_cache.size(); ++k)
    if (p.rx_holds(static_cast<int>(k) + 1, u)) rx.push_back(static_cast<int>(k) + 1);
  auto payload = p.unit_payload(u);
  return {{"type", "unit"},
          {"unit", u},
          {"n", id.n},
          {"T", subset_json(id.T)},
          {"R", subset_json(id.R)},
          {"Rp", subset_json(id.Rp)},
          {"tx", tx},
          {"rx", rx},
          {"payload", std::vector<Element>(payload.begin(), payload.end())}};
}

}  // namespace cachedof
