// Closed-form achievable DoF under full, delayed and mixed CSIT, with
// memory-sharing interpolation and the parameter sweeps behind the
// alpha/beta trade-off curves. Everything is exact.
#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cachedof/errors.hpp"
#include "cachedof/rational.hpp"

namespace cachedof {

/// sum_{i=from}^{to} 1/i, zero for an empty range.
inline Rational harmonic_sum(long from, long to) {
  Rational s = 0;
  for (long i = from; i <= to; ++i) s += Rational(1, i);
  return s;
}

/// Full CSIT: min(t_t + t_r, K_r).
inline Rational dof_full(long t_t, long t_r, long k_r) {
  if (t_t < 1) throw domain_error("t_t >= 1 is required");
  if (t_r < 0) throw domain_error("t_r >= 0 is required");
  return Rational(std::min(t_t + t_r, k_r));
}

/// Delayed CSIT: t_t / (1/(t_r+1) + ... + 1/(t_r+t_t)).
inline Rational dof_delayed(long t_t, long t_r) {
  if (t_t < 1) throw domain_error("t_t >= 1 is required");
  if (t_r < 0) throw domain_error("t_r >= 0 is required");
  return Rational(t_t) / harmonic_sum(t_r + 1, t_r + t_t);
}

/// Time sharing: t_t + t_r + alpha * (d_delayed - t_t - t_r).
inline Rational dof_mixed(long t_t, long t_r, long k_r, const Rational& alpha) {
  if (t_t + t_r > k_r) throw domain_error("t_t + t_r <= k_r is required");
  if (alpha < 0 || alpha > 1) throw domain_error("alpha must lie in [0, 1]");
  Rational s(t_t + t_r);
  return s + alpha * (dof_delayed(t_t, t_r) - s);
}

/// Order-j messages over a MISO broadcast channel with L antennas and K
/// receivers and one-slot-delayed CSIT: (K-j+1) / (1/j + ... + 1/K).
inline Rational dof_mat_order(long L, long K, long j) {
  if (j < 1 || j > K) throw domain_error("message order j must lie in [1, K]");
  if (L < K - j + 1) throw domain_error("L >= K - j + 1 is required");
  return Rational(K - j + 1) / harmonic_sum(j, K);
}

/// Every transmitter holds the whole library: min(K_t + t_r, K_r).
inline Rational dof_multiserver(long k_t, long t_r, long k_r) {
  if (k_t < 1) throw domain_error("k_t >= 1 is required");
  if (t_r < 0 || t_r > k_r) throw domain_error("t_r must lie in [0, k_r]");
  return Rational(std::min(k_t + t_r, k_r));
}

enum class Curve { full, delayed, mixed };

inline std::string to_string(Curve c) {
  switch (c) {
    case Curve::full: return "full";
    case Curve::delayed: return "delayed";
    case Curve::mixed: return "mixed";
  }
  return "?";
}

namespace detail {

inline Rational curve_at(Curve curve, long t_t, long t_r, long k_r, const Rational& alpha) {
  switch (curve) {
    case Curve::full: return dof_full(t_t, t_r, k_r);
    case Curve::delayed: return dof_delayed(t_t, t_r);
    case Curve::mixed: return dof_mixed(t_t, t_r, k_r, alpha);
  }
  throw domain_error("unknown curve");
}

inline void check_knot(Curve curve, const BigInt& t_t, const BigInt& t_r, long k_r) {
  if (t_t < 1) throw domain_error("t_t >= 1 is required");
  if (t_r < 0) throw domain_error("t_r >= 0 is required");
  if (curve == Curve::full ? t_r > k_r : t_t + t_r > k_r)
    throw domain_error("point lies outside the hull of valid integer points");
}

}  // namespace detail

/// Memory-sharing interpolation between integer (t_t, t_r) points.
///
/// One fractional coordinate: linear along that axis. Both fractional with an
/// integer sum: linear along the constant-sum segment (the only neighbours that
/// stay inside t_t + t_r <= K_r). Otherwise bilinear over the enclosing cell.
inline Rational dof_interpolated(Curve curve, const Rational& t_t, const Rational& t_r, long k_r,
                                 const Rational& alpha) {
  if (t_t < 1) throw domain_error("t_t >= 1 is required");
  if (t_r < 0) throw domain_error("t_r >= 0 is required");
  auto at = [&](const BigInt& a, const BigInt& b) {
    detail::check_knot(curve, a, b, k_r);
    return detail::curve_at(curve, static_cast<long>(a), static_cast<long>(b), k_r, alpha);
  };
  const BigInt t0 = floor_of(t_t), t1 = ceil_of(t_t);
  const BigInt r0 = floor_of(t_r), r1 = ceil_of(t_r);
  const Rational ft = t_t - Rational(t0);
  const Rational fr = t_r - Rational(r0);

  if (ft == 0 && fr == 0) return at(t0, r0);
  if (fr == 0) return (1 - ft) * at(t0, r0) + ft * at(t1, r0);
  if (ft == 0) return (1 - fr) * at(t0, r0) + fr * at(t0, r1);
  if (is_integer(t_t + t_r)) {
    // (t0, r1) and (t1, r0) share the sum; weight by the t_t coordinate
    return (1 - ft) * at(t0, r1) + ft * at(t1, r0);
  }
  return (1 - ft) * (1 - fr) * at(t0, r0) + ft * (1 - fr) * at(t1, r0) + (1 - ft) * fr * at(t0, r1) +
         ft * fr * at(t1, r1);
}

/// One row of a sweep: every curve at one parameter point.
struct DofPoint {
  Rational alpha;
  Rational t_t;
  Rational t_r;
  long k_r = 0;
  Rational d_full;
  Rational d_delayed;
  Rational d_mixed;

  /// d(d_mixed)/d(alpha) = d_delayed - (t_t + t_r) on the integer grid.
  Rational slope() const { return d_delayed - d_full; }
  Rational beta() const { return t_r / t_t; }

  bool operator==(const DofPoint&) const = default;
};

inline DofPoint evaluate_point(const Rational& t_t, const Rational& t_r, long k_r, const Rational& alpha) {
  if (alpha < 0 || alpha > 1) throw domain_error("alpha must lie in [0, 1]");
  DofPoint p{alpha, t_t, t_r, k_r, 0, 0, 0};
  p.d_full = dof_interpolated(Curve::full, t_t, t_r, k_r, alpha);
  p.d_delayed = dof_interpolated(Curve::delayed, t_t, t_r, k_r, alpha);
  p.d_mixed = dof_interpolated(Curve::mixed, t_t, t_r, k_r, alpha);
  return p;
}

enum class SweepMode { alpha_sweep, beta_sweep };

/// alpha_sweep: one row per (cache sum, alpha in grid) at fixed beta.
/// beta_sweep: one row per (alpha in alphas, beta in grid) at fixed cache sums.
/// k_r defaults to the cache sum of each row.
struct SweepSpec {
  SweepMode mode = SweepMode::alpha_sweep;
  Rational beta = 1;                 // alpha_sweep
  std::vector<Rational> alphas;      // beta_sweep
  std::vector<long> cache_sums;      // t_t + t_r
  std::vector<Rational> grid;        // alpha values or beta values
  std::optional<long> k_r;
};

inline std::vector<DofPoint> sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw empty_grid("sweep grid is empty");
  if (spec.cache_sums.empty()) throw empty_grid("no cache sums given");
  std::vector<DofPoint> rows;
  auto split = [](long sum, const Rational& beta) {
    if (beta < 0) throw domain_error("beta must be nonnegative");
    Rational t_t = Rational(sum) / (1 + beta);
    return std::pair{t_t, Rational(sum) - t_t};
  };
  if (spec.mode == SweepMode::alpha_sweep) {
    for (long sum : spec.cache_sums) {
      auto [t_t, t_r] = split(sum, spec.beta);
      for (const Rational& a : spec.grid) {
        if (a < 0 || a > 1) throw domain_error("alpha grid points must lie in [0, 1]");
        rows.push_back(evaluate_point(t_t, t_r, spec.k_r.value_or(sum), a));
      }
    }
  } else {
    if (spec.alphas.empty()) throw empty_grid("beta sweep needs at least one alpha");
    for (long sum : spec.cache_sums)
      for (const Rational& a : spec.alphas)
        for (const Rational& b : spec.grid) {
          if (b <= 0) throw domain_error("beta grid points must be positive");
          auto [t_t, t_r] = split(sum, b);
          rows.push_back(evaluate_point(t_t, t_r, spec.k_r.value_or(sum), a));
        }
  }
  return rows;
}

/// beta = 1, sums 20/60/100, alpha = 0, 1/20, ..., 1.
inline SweepSpec alpha_curves_preset() {
  SweepSpec s;
  s.mode = SweepMode::alpha_sweep;
  s.beta = 1;
  s.cache_sums = {20, 60, 100};
  for (int i = 0; i <= 20; ++i) s.grid.emplace_back(i, 20);
  return s;
}

/// t_t + t_r = 100, alpha in {0, 1/4, 1/2, 3/4, 1}, beta = t_r/(100 - t_r) for t_r = 1..99.
inline SweepSpec beta_curves_preset() {
  SweepSpec s;
  s.mode = SweepMode::beta_sweep;
  s.cache_sums = {100};
  for (int i = 0; i <= 4; ++i) s.alphas.emplace_back(i, 4);
  for (int t_r = 1; t_r <= 99; ++t_r) s.grid.emplace_back(t_r, 100 - t_r);
  return s;
}

inline constexpr const char* kSweepCsvHeader = "alpha,beta,t_t,t_r,k_r,d_full,d_delayed,d_mixed,d_mixed_exact";

inline void write_csv_row(std::ostream& os, const DofPoint& p, int precision = 6) {
  os << to_decimal_string(p.alpha, precision) << ',' << to_decimal_string(p.beta(), precision) << ','
     << to_decimal_string(p.t_t, precision) << ',' << to_decimal_string(p.t_r, precision) << ',' << p.k_r << ','
     << to_decimal_string(p.d_full, precision) << ',' << to_decimal_string(p.d_delayed, precision) << ','
     << to_decimal_string(p.d_mixed, precision) << ',' << to_fraction_string(p.d_mixed) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<DofPoint>& rows, int precision = 6) {
  os << kSweepCsvHeader << '\n';
  for (const DofPoint& p : rows) write_csv_row(os, p, precision);
}

}  // namespace cachedof
