// System parameters of the cache-enabled interference channel and the
// dimensions derived from them.
#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachedof/errors.hpp"
#include "cachedof/prime_field.hpp"
#include "cachedof/rational.hpp"
#include "cachedof/subsets.hpp"

namespace cachedof {

/// Unvalidated parameters as they arrive from flags or a config file.
/// Either (m_t, m_r) or (t_t, t_r) describes the caches; either alpha or
/// (t_c, t_f) describes the CSIT mix.
struct RawParams {
  std::optional<Rational> k_t, k_r, n_files;
  std::optional<Rational> m_t, m_r;
  std::optional<Rational> t_t, t_r;
  std::optional<Rational> alpha;
  std::optional<Rational> t_c, t_f;
  std::optional<std::uint64_t> field_prime;
  std::optional<std::uint64_t> seed;

  /// Fields set in `over` replace those here.
  void merge_from(const RawParams& over) {
    auto take = [](auto& dst, const auto& src) {
      if (src) dst = src;
    };
    take(k_t, over.k_t);
    take(k_r, over.k_r);
    take(n_files, over.n_files);
    if (over.m_t || over.t_t) {
      m_t = over.m_t;
      t_t = over.t_t;
    }
    if (over.m_r || over.t_r) {
      m_r = over.m_r;
      t_r = over.t_r;
    }
    if (over.alpha || over.t_c || over.t_f) {
      alpha = over.alpha;
      t_c = over.t_c;
      t_f = over.t_f;
    }
    take(field_prime, over.field_prime);
    take(seed, over.seed);
  }
};

/// Coherence time and training/feedback time of one block.
struct BlockTiming {
  Rational t_c;
  Rational t_f;
};

/// Fraction of each coherence block without current CSIT.
inline Rational alpha_from_block(const Rational& t_f, const Rational& t_c) {
  if (t_c <= 0) throw out_of_range("T_c must be positive");
  if (t_f < 0 || t_f > t_c) throw out_of_range("T_f must lie in [0, T_c]");
  return t_f / t_c;
}

inline Rational alpha_from_block(const BlockTiming& b) { return alpha_from_block(b.t_f, b.t_c); }

struct SystemConfig {
  int k_t = 1;
  int k_r = 1;
  int n_files = 1;
  Rational m_t;
  Rational m_r;
  Rational alpha;
  std::uint64_t field_prime = kMersenne61;
  std::uint64_t seed = 0;
  int t_t = 1;
  int t_r = 0;

  PrimeField field() const { return PrimeField(field_prime); }

  /// True when the delivery algorithms can be run, not only evaluated in closed form.
  bool simulatable() const noexcept { return t_t + t_r <= k_r; }

  bool operator==(const SystemConfig&) const = default;
};

inline RawParams to_raw(const SystemConfig& c) {
  RawParams r;
  r.k_t = Rational(c.k_t);
  r.k_r = Rational(c.k_r);
  r.n_files = Rational(c.n_files);
  r.m_t = c.m_t;
  r.m_r = c.m_r;
  r.alpha = c.alpha;
  r.field_prime = c.field_prime;
  r.seed = c.seed;
  return r;
}

inline SystemConfig normalize_config(const RawParams& raw) {
  auto positive_int = [](const std::optional<Rational>& v, const char* name) -> int {
    if (!v) throw out_of_range(std::string(name) + " is required");
    if (!is_integer(*v) || *v <= 0 || *v > 1'000'000)
      throw out_of_range(std::string(name) + " must be a positive integer");
    return static_cast<int>(to_int64(*v, name));
  };

  SystemConfig c;
  c.k_t = positive_int(raw.k_t, "k_t");
  c.k_r = positive_int(raw.k_r, "k_r");
  c.n_files = positive_int(raw.n_files, "n_files");

  // t = K * M / N, or M = t * N / K when t is given directly.
  auto cache = [&](const std::optional<Rational>& m, const std::optional<Rational>& t, int k, const char* m_name,
                   const char* t_name, Rational& m_out) -> Rational {
    if (m && t) throw out_of_range(std::string("give either ") + m_name + " or " + t_name + ", not both");
    if (!m && !t) throw out_of_range(std::string(m_name) + " (or " + t_name + ") is required");
    Rational tv = t ? *t : Rational(k) * *m / c.n_files;
    m_out = m ? *m : tv * c.n_files / k;
    if (m_out < 0) throw out_of_range(std::string(m_name) + " must be nonnegative");
    return tv;
  };
  Rational tt = cache(raw.m_t, raw.t_t, c.k_t, "m_t", "t_t", c.m_t);
  Rational tr = cache(raw.m_r, raw.t_r, c.k_r, "m_r", "t_r", c.m_r);

  if (!is_integer(tt))
    throw non_integer_t("t_t = k_t*m_t/n_files = " + to_fraction_string(tt) + " is not an integer");
  if (!is_integer(tr))
    throw non_integer_t("t_r = k_r*m_r/n_files = " + to_fraction_string(tr) + " is not an integer");
  if (tt < 1) throw transmit_cache_too_small("t_t >= 1 is required, got t_t = " + to_fraction_string(tt));
  if (tt > c.k_t) throw out_of_range("t_t must not exceed k_t");
  if (tr < 0 || tr > c.k_r) throw out_of_range("t_r must lie in [0, k_r]");
  c.t_t = static_cast<int>(to_int64(tt, "t_t"));
  c.t_r = static_cast<int>(to_int64(tr, "t_r"));

  if (raw.alpha && (raw.t_c || raw.t_f)) throw out_of_range("give either alpha or (t_c, t_f), not both");
  if (raw.alpha) {
    if (*raw.alpha < 0 || *raw.alpha > 1) throw out_of_range("alpha must lie in [0, 1]");
    c.alpha = *raw.alpha;
  } else if (raw.t_c || raw.t_f) {
    if (!raw.t_c || !raw.t_f) throw out_of_range("t_c and t_f must be given together");
    c.alpha = alpha_from_block(*raw.t_f, *raw.t_c);
  } else {
    c.alpha = 0;
  }

  c.field_prime = raw.field_prime.value_or(kMersenne61);
  if (c.field_prime < kMersenne31 || c.field_prime >= (std::uint64_t{1} << 63) || !is_prime(c.field_prime))
    throw out_of_range("field_prime must be a prime in [2^31-1, 2^63)");
  c.seed = raw.seed.value_or(0);
  return c;
}

inline void require_simulatable(const SystemConfig& c) {
  if (!c.simulatable())
    throw domain_error("simulation requires t_t + t_r <= k_r (got " + std::to_string(c.t_t) + " + " +
                       std::to_string(c.t_r) + " > " + std::to_string(c.k_r) + ")");
}

/// Unit counts of the two-level file split.
struct Dimensions {
  std::uint64_t subfiles_per_file = 1;
  std::uint64_t minifiles_per_subfile = 1;
  std::uint64_t symbols_per_minifile = 1;
  std::uint64_t total_units = 1;  // minifiles in the whole library

  std::uint64_t symbols_per_file() const { return subfiles_per_file * minifiles_per_subfile * symbols_per_minifile; }

  bool operator==(const Dimensions&) const = default;
};

inline Dimensions derived_dimensions(const SystemConfig& c, std::uint64_t symbols_per_minifile) {
  if (symbols_per_minifile < 1) throw domain_error("symbols_per_minifile must be at least 1");
  require_simulatable(c);
  Dimensions d;
  d.subfiles_per_file = binomial(c.k_t, c.t_t) * binomial(c.k_r, c.t_r);
  d.minifiles_per_subfile = binomial(c.k_r - c.t_r - 1, c.t_t - 1);
  d.symbols_per_minifile = symbols_per_minifile;
  d.total_units = static_cast<std::uint64_t>(c.n_files) * d.subfiles_per_file * d.minifiles_per_subfile;
  return d;
}

/// d[k-1] is the file (1-based) requested by receiver k.
struct Demand {
  std::vector<int> files;

  int of(int receiver) const { return files.at(static_cast<std::size_t>(receiver - 1)); }
  bool operator==(const Demand&) const = default;
};

inline Demand make_demand(const SystemConfig& c, std::vector<int> files) {
  if (files.size() != static_cast<std::size_t>(c.k_r))
    throw out_of_range("demand must name one file per receiver (" + std::to_string(c.k_r) + ")");
  for (int f : files)
    if (f < 1 || f > c.n_files) throw out_of_range("demanded file " + std::to_string(f) + " outside [1, n_files]");
  return Demand{std::move(files)};
}

/// Receiver k asks for file ((k-1) mod N) + 1.
inline Demand default_demand(const SystemConfig& c) {
  std::vector<int> files;
  for (int k = 0; k < c.k_r; ++k) files.push_back(k % c.n_files + 1);
  return Demand{std::move(files)};
}

/// All N^K_r demand vectors, lexicographic.
inline std::vector<Demand> all_demands(const SystemConfig& c) {
  std::vector<Demand> out;
  std::vector<int> d(static_cast<std::size_t>(c.k_r), 1);
  while (true) {
    out.push_back(Demand{d});
    int i = c.k_r - 1;
    while (i >= 0 && d[static_cast<std::size_t>(i)] == c.n_files) d[static_cast<std::size_t>(i--)] = 1;
    if (i < 0) break;
    ++d[static_cast<std::size_t>(i)];
  }
  return out;
}

// --- JSON config ----------------------------------------------------------

namespace detail {

inline Rational json_rational(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
  if (v.is_number_float()) {
    // shortest round-trip decimal, then exact
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw out_of_range("config key '" + key + "' must be a number or a \"num/den\" string");
}

inline std::uint64_t json_u64(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) return v.get<std::uint64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::uint64_t out = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return out;
  }
  throw out_of_range("config key '" + key + "' must be a nonnegative 64-bit integer");
}

}  // namespace detail

/// Reads the config object; keys are exactly k_t, k_r, n_files, m_t, m_r,
/// alpha | (t_c, t_f), field_prime, seed.
inline RawParams raw_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw out_of_range("config must be a JSON object");
  RawParams r;
  for (const auto& [key, value] : j.items()) {
    if (key == "k_t") r.k_t = detail::json_rational(value, key);
    else if (key == "k_r") r.k_r = detail::json_rational(value, key);
    else if (key == "n_files") r.n_files = detail::json_rational(value, key);
    else if (key == "m_t") r.m_t = detail::json_rational(value, key);
    else if (key == "m_r") r.m_r = detail::json_rational(value, key);
    else if (key == "alpha") r.alpha = detail::json_rational(value, key);
    else if (key == "t_c") r.t_c = detail::json_rational(value, key);
    else if (key == "t_f") r.t_f = detail::json_rational(value, key);
    else if (key == "field_prime") r.field_prime = detail::json_u64(value, key);
    else if (key == "seed") r.seed = detail::json_u64(value, key);
    else throw out_of_range("unknown config key '" + key + "'");
  }
  return r;
}

inline nlohmann::json config_to_json(const SystemConfig& c) {
  return {{"k_t", c.k_t},
          {"k_r", c.k_r},
          {"n_files", c.n_files},
          {"m_t", to_fraction_string(c.m_t)},
          {"m_r", to_fraction_string(c.m_r)},
          {"alpha", to_fraction_string(c.alpha)},
          {"field_prime", c.field_prime},
          {"seed", c.seed}};
}

}  // namespace cachedof
