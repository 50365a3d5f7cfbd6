// JSON-lines trace of a delivery run and a verifier that replays it.
//
//   {"type":"header", config, demand, regime, symbols_per_minifile}
//   {"type":"unit", ...}          one per minifile, with holders and payload
//   {"type":"slot", ...}          one per channel use, in transmission order
//   {"type":"report", report[, mixed]}
//
// The verifier rebuilds every receiver's view (its equations and cache) and
// decodes by plain elimination, without any knowledge of the scheme.
#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachedof/errors.hpp"
#include "cachedof/mixed.hpp"
#include "cachedof/model.hpp"
#include "cachedof/placement.hpp"
#include "cachedof/prime_field.hpp"
#include "cachedof/transmission.hpp"

namespace cachedof {

inline nlohmann::json matrix_json(const FieldMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<Element> row;
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json form_json(const LinearForm& form) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [var, c] : form.terms()) terms.push_back({var, c});
  return terms;
}

inline nlohmann::json slot_record_json(const PrimeField& f, const SlotRecord& s, std::size_t index) {
  nlohmann::json j{{"type", "slot"},
                   {"slot", index},
                   {"regime", to_string(s.regime)},
                   {"block", s.block},
                   {"T", subset_json(s.T)},
                   {"S", subset_json(s.S)},
                   {"channel", matrix_json(s.channel)},
                   {"transmit", s.transmit},
                   {"received", s.received}};
  if (s.regime == Regime::full) {
    j["omega"] = s.omega;
    j["symbol"] = s.symbol;
    nlohmann::json pre = nlohmann::json::array();
    for (const auto& [R, u] : s.precoders) pre.push_back({{"R", subset_json(R)}, {"u", u}});
    j["precoders"] = pre;
  } else {
    j["phase"] = s.phase;
    j["audience"] = subset_json(s.audience);
  }
  nlohmann::json eqs = nlohmann::json::array();
  for (int k = 1; k <= static_cast<int>(s.channel.rows()); ++k)
    eqs.push_back({{"receiver", k}, {"terms", form_json(s.equation(f, k))}});
  j["equations"] = eqs;
  return j;
}

struct TraceInput {
  const SystemConfig* cfg;
  const Demand* demand;
  const CachePlacement* placement;
  const TransmissionLog* log;
  const DeliveryReport* report;
  const MixedReport* mixed = nullptr;
};

inline void write_trace(std::ostream& os, const TraceInput& in) {
  const PrimeField f = in.cfg->field();
  nlohmann::json header{{"type", "header"},
                        {"config", config_to_json(*in.cfg)},
                        {"demand", in.demand->files},
                        {"regime", to_string(in.report->regime)},
                        {"symbols_per_minifile", in.placement->symbols_per_unit}};
  os << header.dump() << '\n';
  for (UnitIndex u = 0; u < in.placement->catalog.size(); ++u) os << unit_record(*in.placement, u).dump() << '\n';
  for (std::size_t i = 0; i < in.log->slots.size(); ++i) os << slot_record_json(f, in.log->slots[i], i).dump() << '\n';
  nlohmann::json trailer{{"type", "report"}, {"report", report_to_json(*in.report)}};
  if (in.mixed) trailer["mixed"] = mixed_report_to_json(*in.mixed);
  os << trailer.dump() << '\n';
}

/// Linear equation sum coef * var = value.
struct Observation {
  LinearForm form;
  Element value = 0;
};

/// Variables pinned down by the observations once `known` values are
/// substituted. Unknowns that stay free are simply absent from the result.
inline std::map<std::size_t, Element> eliminate(const PrimeField& f, const std::vector<Observation>& obs,
                                                const std::map<std::size_t, Element>& known) {
  std::map<std::size_t, std::size_t> column;
  std::vector<std::size_t> vars;
  for (const auto& o : obs)
    for (const auto& [v, c] : o.form.terms())
      if (!known.count(v) && !column.count(v)) {
        column[v] = 0;
        vars.push_back(v);
      }
  std::sort(vars.begin(), vars.end());
  for (std::size_t i = 0; i < vars.size(); ++i) column[vars[i]] = i;

  const std::size_t n = vars.size();
  FieldMatrix aug(obs.size(), n + 1);
  for (std::size_t r = 0; r < obs.size(); ++r) {
    Element rhs = obs[r].value;
    for (const auto& [v, c] : obs[r].form.terms()) {
      auto k = known.find(v);
      if (k != known.end())
        rhs = f.sub(rhs, f.mul(c, k->second));
      else
        aug(r, column[v]) = c;
    }
    aug(r, n) = rhs;
  }
  const RowEchelon e = row_reduce(f, aug);
  std::map<std::size_t, Element> out;
  std::vector<bool> is_pivot(n + 1, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  if (is_pivot[n]) throw decoding_failure("observations are inconsistent");
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    bool alone = true;
    for (std::size_t c = 0; c < n && alone; ++c)
      if (c != e.pivots[r] && !is_pivot[c] && e.reduced(r, c) != 0) alone = false;
    if (alone) out[vars[e.pivots[r]]] = e.reduced(r, n);
  }
  return out;
}

/// Replays a trace: every receiver decodes from its own equations and cache,
/// and the result is checked against the recorded payload. The retry count is
/// taken from the trailer; it is not observable in the slots.
inline DeliveryReport verify_trace(std::istream& in) {
  std::optional<SystemConfig> cfg;
  Demand demand;
  DeliveryReport report;
  std::size_t b = 1;
  std::map<UnitIndex, nlohmann::json> units;
  std::vector<std::vector<Observation>> obs;
  bool trailer = false;

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      cfg = normalize_config(raw_params_from_json(j.at("config")));
      demand = make_demand(*cfg, j.at("demand").get<std::vector<int>>());
      b = j.at("symbols_per_minifile").get<std::size_t>();
      const std::string regime = j.at("regime").get<std::string>();
      report.regime = regime == "full" ? Regime::full : regime == "delayed" ? Regime::delayed : Regime::mixed;
      obs.assign(static_cast<std::size_t>(cfg->k_r), {});
    } else if (!cfg) {
      throw decoding_failure("trace does not start with a header");
    } else if (type == "unit") {
      units[j.at("unit").get<UnitIndex>()] = j;
    } else if (type == "slot") {
      ++report.slot_count;
      const auto received = j.at("received").get<std::vector<Element>>();
      for (const auto& eq : j.at("equations")) {
        const int k = eq.at("receiver").get<int>();
        LinearForm form;
        for (const auto& t : eq.at("terms")) {
          LinearForm term = LinearForm::variable(t.at(0).get<std::size_t>());
          form.add_scaled(cfg->field(), term, t.at(1).get<Element>());
        }
        obs.at(static_cast<std::size_t>(k - 1)).push_back({std::move(form), received.at(static_cast<std::size_t>(k - 1))});
      }
    } else if (type == "report") {
      report.retries = j.at("report").at("retries").get<std::uint64_t>();
      trailer = true;
    } else {
      throw decoding_failure("unknown trace record type '" + type + "'");
    }
  }
  if (!cfg) throw decoding_failure("trace has no header");
  if (!trailer) throw decoding_failure("trace has no report trailer");

  const PrimeField f = cfg->field();
  report.seed = cfg->seed;
  report.symbols_per_minifile = b;
  for (int k = 1; k <= cfg->k_r; ++k) {
    std::map<std::size_t, Element> known;
    std::vector<std::size_t> wanted;
    for (const auto& [u, rec] : units) {
      const auto rx = rec.at("rx").get<std::vector<int>>();
      const auto payload = rec.at("payload").get<std::vector<Element>>();
      if (std::find(rx.begin(), rx.end(), k) != rx.end()) {
        for (std::size_t s = 0; s < b; ++s) known[symbol_var(u, s, b)] = payload.at(s);
      } else if (rec.at("n").get<int>() == demand.of(k)) {
        for (std::size_t s = 0; s < b; ++s) wanted.push_back(symbol_var(u, s, b));
      }
    }
    report.symbols_delivered += wanted.size();
    bool ok = true;
    try {
      const auto solved = eliminate(f, obs[static_cast<std::size_t>(k - 1)], known);
      for (std::size_t v : wanted) {
        auto it = solved.find(v);
        const auto payload = units.at(v / b).at("payload").get<std::vector<Element>>();
        if (it == solved.end() || it->second != payload.at(v % b)) {
          ok = false;
          break;
        }
      }
    } catch (const decoding_failure&) {
      ok = false;
    }
    report.decoded_ok.push_back(ok);
  }
  report.finalize_dof();
  return report;
}

}  // namespace cachedof
