// Command-line front end: dof | sweep | simulate | trace.
//
// Exit codes: 0 ok, 1 unexpected error, 2 invalid input, 3 some receiver failed
// to decode, 4 batch size does not clear the delayed scheduler.
#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cachedof/delayed_csit.hpp"
#include "cachedof/dof_calc.hpp"
#include "cachedof/errors.hpp"
#include "cachedof/full_csit.hpp"
#include "cachedof/mixed.hpp"
#include "cachedof/model.hpp"
#include "cachedof/rational.hpp"
#include "cachedof/trace.hpp"

namespace cachedof {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInvalid = 2, kExitDecoding = 3, kExitDivisibility = 4 };

/// Largest library (units x symbols) the simulator accepts.
inline constexpr std::uint64_t kMaxSimulatedSymbols = 4'000'000;

namespace detail {

/// Raw string flags; parsed to exact rationals after CLI11 is done.
struct ParamFlags {
  std::string k_t, k_r, n, m_t, m_r, t_t, t_r, alpha, t_c, t_f;
  std::optional<std::uint64_t> seed, field_prime;
  std::string config;

  void attach(CLI::App* app) {
    app->add_option("--k_t", k_t, "number of transmitters");
    app->add_option("--k_r", k_r, "number of receivers");
    app->add_option("--n", n, "number of files");
    app->add_option("--m_t", m_t, "transmitter cache size, in files");
    app->add_option("--m_r", m_r, "receiver cache size, in files");
    app->add_option("--t_t", t_t, "k_t*m_t/n, instead of --m_t");
    app->add_option("--t_r", t_r, "k_r*m_r/n, instead of --m_r");
    app->add_option("--alpha", alpha, "fraction of time without current CSIT");
    app->add_option("--t_c", t_c, "coherence time");
    app->add_option("--t_f", t_f, "training and feedback time per block");
    app->add_option("--seed", seed, "randomness seed");
    app->add_option("--field-prime", field_prime, "prime field size");
    app->add_option("--config", config, "JSON config file; flags override it");
  }

  RawParams resolve() const {
    RawParams r;
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw out_of_range("cannot open config file '" + config + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw out_of_range("config file is not valid JSON: " + std::string(e.what()));
      }
      r = raw_params_from_json(j);
    }
    RawParams over;
    auto num = [](const std::string& s) -> std::optional<Rational> {
      if (s.empty()) return std::nullopt;
      return parse_rational(s);
    };
    over.k_t = num(k_t);
    over.k_r = num(k_r);
    over.n_files = num(n);
    over.m_t = num(m_t);
    over.m_r = num(m_r);
    over.t_t = num(t_t);
    over.t_r = num(t_r);
    over.alpha = num(alpha);
    over.t_c = num(t_c);
    over.t_f = num(t_f);
    over.seed = seed;
    over.field_prime = field_prime;
    r.merge_from(over);
    return r;
  }
};

inline std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

/// Writes to `path` through a temporary file so a failed run leaves nothing behind.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw out_of_range("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw out_of_range("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

inline std::string dof_line(const char* name, const Rational& v, int precision) {
  return std::string(name) + " " + to_decimal_string(v, precision) + " (" + to_fraction_string(v) + ")\n";
}

struct SimFlags {
  std::string regime = "full";
  std::size_t batch = 0;
  std::string demand;
};

inline Demand resolve_demand(const SystemConfig& cfg, const std::string& text) {
  if (text.empty()) return default_demand(cfg);
  std::vector<int> files;
  for (const Rational& q : parse_list(text)) files.push_back(static_cast<int>(to_int64(q, "demand entry")));
  return make_demand(cfg, std::move(files));
}

inline void check_desk_scale(const SystemConfig& cfg, std::size_t batch) {
  require_simulatable(cfg);
  const Dimensions d = derived_dimensions(cfg, std::max<std::size_t>(batch, 1));
  if (d.total_units > kMaxSimulatedSymbols || d.total_units * d.symbols_per_minifile > kMaxSimulatedSymbols)
    throw out_of_range("configuration is too large to simulate (" + std::to_string(d.total_units) + " minifiles)");
}

/// Runs the selected regime and returns (report JSON, trace text if asked).
struct SimOutcome {
  DeliveryReport report;
  nlohmann::json json;
  std::string trace;
};

inline SimOutcome simulate(const SystemConfig& cfg, const Demand& demand, const SimFlags& sim, bool want_trace) {
  SimOutcome out;
  std::ostringstream trace;
  if (sim.regime == "full") {
    check_desk_scale(cfg, sim.batch);
    FullRun run = run_full_delivery(cfg, demand, sim.batch == 0 ? 1 : sim.batch);
    out.report = run.report;
    out.json = report_to_json(run.report);
    if (want_trace) write_trace(trace, {&cfg, &demand, &run.placement, &run.pipeline.log, &run.report});
  } else if (sim.regime == "delayed") {
    check_desk_scale(cfg, sim.batch);
    DelayedRun run = run_delayed_delivery(cfg, demand, sim.batch);
    out.report = run.report;
    out.json = report_to_json(run.report);
    if (want_trace) write_trace(trace, {&cfg, &demand, &run.placement, &run.pipeline.log, &run.report});
  } else if (sim.regime == "mixed") {
    check_desk_scale(cfg, sim.batch == 0 ? minimal_mixed_batch(cfg, cfg.alpha) : sim.batch);
    MixedRun run = run_mixed_delivery(cfg, demand, sim.batch);
    out.report = run.report;
    out.json = report_to_json(run.report);
    out.json["mixed"] = mixed_report_to_json(run.mixed);
    if (want_trace) write_trace(trace, {&cfg, &demand, &run.placement, &run.log, &run.report, &run.mixed});
  } else {
    throw out_of_range("regime must be full, delayed or mixed");
  }
  out.trace = trace.str();
  return out;
}

}  // namespace detail

/// Entry point shared by the tool and the tests. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degrees of freedom of cache-aided interference networks under full, delayed and mixed CSIT",
               "cachedof"};
  app.require_subcommand(1);

  // dof
  detail::ParamFlags dof_params;
  int precision = 6;
  bool dof_csv = false;
  CLI::App* dof = app.add_subcommand("dof", "closed-form DoF at one parameter point");
  dof_params.attach(dof);
  dof->add_option("--precision", precision, "significant digits of decimal output")->check(CLI::Range(1, 30));
  dof->add_flag("--csv", dof_csv, "print a sweep CSV row instead");

  // sweep
  std::string preset, mode = "alpha", sums, grid, beta = "1", alphas, sweep_out, sweep_k_r;
  int sweep_precision = 6;
  CLI::App* sw = app.add_subcommand("sweep", "DoF table over alpha or beta");
  sw->add_option("--preset", preset, "alpha-curves | beta-curves");
  sw->add_option("--mode", mode, "alpha | beta");
  sw->add_option("--sum", sums, "comma-separated cache sums t_t + t_r");
  sw->add_option("--grid", grid, "comma-separated alpha (alpha mode) or beta (beta mode) values");
  sw->add_option("--beta", beta, "t_r / t_t in alpha mode");
  sw->add_option("--alpha", alphas, "comma-separated alpha values in beta mode");
  sw->add_option("--k_r", sweep_k_r, "receivers; defaults to the cache sum");
  sw->add_option("--precision", sweep_precision, "significant digits")->check(CLI::Range(1, 30));
  sw->add_option("--out", sweep_out, "CSV file (default stdout)");

  // simulate
  detail::ParamFlags sim_params;
  detail::SimFlags sim;
  std::string sim_out;
  CLI::App* simc = app.add_subcommand("simulate", "run a delivery and print its report");
  sim_params.attach(simc);
  simc->add_option("--regime", sim.regime, "full | delayed | mixed");
  simc->add_option("--batch", sim.batch, "symbols per minifile (0 picks the smallest valid one)");
  simc->add_option("--demand", sim.demand, "comma-separated file index per receiver");
  simc->add_option("--out", sim_out, "report file (default stdout)");

  // trace
  detail::ParamFlags tr_params;
  detail::SimFlags tr_sim;
  std::string tr_out, verify;
  CLI::App* trc = app.add_subcommand("trace", "dump a replayable JSON-lines trace, or verify one");
  tr_params.attach(trc);
  trc->add_option("--regime", tr_sim.regime, "full | delayed | mixed");
  trc->add_option("--batch", tr_sim.batch, "symbols per minifile (0 picks the smallest valid one)");
  trc->add_option("--demand", tr_sim.demand, "comma-separated file index per receiver");
  trc->add_option("--out", tr_out, "trace file (default stdout)");
  trc->add_option("--verify", verify, "replay a trace file and print the report it implies");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (dof->parsed()) {
      const RawParams raw = dof_params.resolve();
      auto coord = [&](const std::optional<Rational>& t, const std::optional<Rational>& m,
                       const std::optional<Rational>& k, const char* name) -> Rational {
        if (t) return *t;
        if (m && k && raw.n_files) return *k * *m / *raw.n_files;
        throw out_of_range(std::string("--") + name + " (or --m and --k and --n) is required");
      };
      const Rational t_t = coord(raw.t_t, raw.m_t, raw.k_t, "t_t");
      const Rational t_r = coord(raw.t_r, raw.m_r, raw.k_r, "t_r");
      if (!raw.k_r) throw out_of_range("--k_r is required");
      const long k_r = static_cast<long>(to_int64(*raw.k_r, "k_r"));
      if (k_r < 1) throw out_of_range("k_r must be a positive integer");
      Rational alpha = 0;
      if (raw.alpha && (raw.t_c || raw.t_f)) throw out_of_range("give either alpha or (t_c, t_f), not both");
      if (raw.alpha) alpha = *raw.alpha;
      else if (raw.t_c && raw.t_f) alpha = alpha_from_block(*raw.t_f, *raw.t_c);
      else if (raw.t_c || raw.t_f) throw out_of_range("t_c and t_f must be given together");
      if (alpha < 0 || alpha > 1) throw out_of_range("alpha must lie in [0, 1]");
      const DofPoint p = evaluate_point(t_t, t_r, k_r, alpha);
      if (dof_csv) {
        out << kSweepCsvHeader << '\n';
        write_csv_row(out, p, precision);
      } else {
        out << detail::dof_line("d_full", p.d_full, precision) << detail::dof_line("d_delayed", p.d_delayed, precision)
            << detail::dof_line("d_mixed", p.d_mixed, precision);
      }
      return kExitOk;
    }

    if (sw->parsed()) {
      SweepSpec spec;
      if (preset == "alpha-curves") {
        spec = alpha_curves_preset();
      } else if (preset == "beta-curves") {
        spec = beta_curves_preset();
      } else if (!preset.empty()) {
        throw out_of_range("unknown preset '" + preset + "' (alpha-curves | beta-curves)");
      } else {
        if (mode == "alpha") spec.mode = SweepMode::alpha_sweep;
        else if (mode == "beta") spec.mode = SweepMode::beta_sweep;
        else throw out_of_range("mode must be alpha or beta");
        for (const Rational& s : detail::parse_list(sums)) spec.cache_sums.push_back(static_cast<long>(to_int64(s, "sum")));
        spec.grid = detail::parse_list(grid);
        spec.beta = parse_rational(beta);
        spec.alphas = detail::parse_list(alphas);
      }
      if (!sweep_k_r.empty()) spec.k_r = static_cast<long>(to_int64(parse_rational(sweep_k_r), "k_r"));
      std::ostringstream csv;
      write_csv(csv, sweep(spec), sweep_precision);
      detail::emit(sweep_out, csv.str(), out);
      return kExitOk;
    }

    if (simc->parsed()) {
      const SystemConfig cfg = normalize_config(sim_params.resolve());
      const Demand demand = detail::resolve_demand(cfg, sim.demand);
      const detail::SimOutcome o = detail::simulate(cfg, demand, sim, false);
      detail::emit(sim_out, o.json.dump() + "\n", out);
      if (!o.report.all_decoded()) {
        err << "decoding failed at some receiver\n";
        return kExitDecoding;
      }
      return kExitOk;
    }

    if (trc->parsed()) {
      if (!verify.empty()) {
        std::ifstream in(verify);
        if (!in) throw out_of_range("cannot open trace '" + verify + "'");
        const DeliveryReport r = verify_trace(in);
        detail::emit(tr_out, report_to_json(r).dump() + "\n", out);
        return r.all_decoded() ? kExitOk : kExitDecoding;
      }
      const SystemConfig cfg = normalize_config(tr_params.resolve());
      const Demand demand = detail::resolve_demand(cfg, tr_sim.demand);
      const detail::SimOutcome o = detail::simulate(cfg, demand, tr_sim, true);
      detail::emit(tr_out, o.trace, out);
      if (!o.report.all_decoded()) {
        err << "decoding failed at some receiver\n";
        return kExitDecoding;
      }
      return kExitOk;
    }
  } catch (const divisibility_error& e) {
    err << "error: " << e.what() << "\nrequired batch multiple: " << e.required_multiple() << '\n';
    return kExitDivisibility;
  } catch (const decoding_failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitDecoding;
  } catch (const genericity_failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitDecoding;
  } catch (const singular_system& e) {
    err << "error: " << e.what() << '\n';
    return kExitDecoding;
  } catch (const singular_matrix& e) {
    err << "error: " << e.what() << '\n';
    return kExitDecoding;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cachedof
