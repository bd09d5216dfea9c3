// SPDX-License-Identifier: Apache-2.0

#include "mmwee/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mmwee/eeopt.hpp"
#include "mmwee/io.hpp"
#include "mmwee/mathcore.hpp"
#include "mmwee/nlos.hpp"

namespace mmwee {

namespace {

double number_of(const std::string& key, const nlohmann::json& v) {
  if (!v.is_number()) throw ConfigError(key, "must be a number");
  return v.get<double>();
}

int integer_of(const std::string& key, const nlohmann::json& v) {
  if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
  return v.get<int>();
}

IntRange parse_range(const std::string& key, const std::string& text) {
  IntRange r;
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(key, "expected FIRST:LAST[:STEP], got '" + text + "'");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ConfigError(key, "expected FIRST:LAST[:STEP], got '" + text + "'");
  }
  r.first = parts[0];
  r.last = parts[1];
  r.step = parts.size() == 3 ? parts[2] : 1;
  if (r.first < 1 || r.step < 1 || r.last < r.first) {
    throw ConfigError(key, "need 1 <= FIRST <= LAST and STEP >= 1");
  }
  return r;
}

std::string range_text(const IntRange& r) {
  return std::to_string(r.first) + ":" + std::to_string(r.last) + ":" + std::to_string(r.step);
}

std::vector<Cell> breakdown_cells(const PowerBreakdown& b) {
  std::vector<Cell> cells;
  for (double v : breakdown_values(b)) cells.emplace_back(v);
  return cells;
}

void append(std::vector<Cell>& row, const std::vector<Cell>& more) {
  row.insert(row.end(), more.begin(), more.end());
}

std::vector<std::string> with_breakdown(std::vector<std::string> columns) {
  for (const auto& f : breakdown_fields()) columns.push_back(f);
  return columns;
}

// Global flags as parsed, before merging with the config file.
struct Flags {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  int k = 10;
  double lambda = 1.0;
  double fe_scale = 1.0;
  int trials = 100;
  std::string mode;
};

class Emitter {
 public:
  Emitter(std::string format, std::string path, std::ostream& out)
      : format_(std::move(format)), path_(std::move(path)), out_(out) {}

  void emit(const nlohmann::json& metadata, const Table& table,
            const std::optional<nlohmann::json>& extra = std::nullopt) const {
    std::ostringstream buf;
    if (format_ == "json") {
      nlohmann::ordered_json doc = table_to_json(metadata, table);
      if (extra) {
        for (const auto& [key, value] : extra->items()) {
          doc[key] = nlohmann::ordered_json::parse(value.dump());
        }
      }
      buf << doc.dump(2) << '\n';
    } else {
      write_csv(buf, metadata, table);
    }
    if (path_.empty()) {
      out_ << buf.str();
      return;
    }
    std::ofstream file(path_, std::ios::binary);
    if (!file) throw ConfigError("out", "cannot open " + path_ + " for writing");
    file << buf.str();
  }

 private:
  std::string format_;
  std::string path_;
  std::ostream& out_;
};

nlohmann::json base_metadata(const std::string& command, const RunConfig& cfg,
                             const std::string& mode) {
  nlohmann::json m;
  m["command"] = command;
  m["seed"] = cfg.seed;
  m["k"] = cfg.k;
  m["gamma"] = cfg.profile.link.gamma;
  m["mode"] = mode;
  m["config"] = to_json(cfg);
  return m;
}

PrecoderMode nlos_mode(const std::string& mode) {
  if (mode == "hybrid-svd") return PrecoderMode::hybrid_svd;
  if (mode == "fully-digital") return PrecoderMode::fully_digital;
  throw ConfigError("mode", "expected hybrid-svd or fully-digital, got '" + mode + "'");
}

const char* mode_name(PrecoderMode mode) {
  return mode == PrecoderMode::fully_digital ? "fully-digital" : "hybrid-svd";
}

}  // namespace

void apply_config(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  nlohmann::json profile = to_json(cfg.profile);
  for (const auto& [key, v] : j.items()) {
    if (key == "k") {
      cfg.k = integer_of(key, v);
    } else if (key == "lambda") {
      cfg.lambda = number_of(key, v);
    } else if (key == "fe_scale") {
      cfg.fe_scale = number_of(key, v);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(key, "must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "trials") {
      cfg.trials = integer_of(key, v);
    } else if (key == "n_cl") {
      cfg.cluster.n_cl = integer_of(key, v);
    } else if (key == "n_r") {
      cfg.cluster.n_r = integer_of(key, v);
    } else if (key == "angle_spread_deg") {
      cfg.cluster.angle_spread = number_of(key, v) * kPi / 180.0;
    } else if (key == "d_cl_min") {
      cfg.cluster.d_cl_min = number_of(key, v);
    } else if (key == "d_cl_max") {
      cfg.cluster.d_cl_max = number_of(key, v);
    } else if (key == "los_probability") {
      const double p = number_of(key, v);
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
      cfg.cluster.los = {LosProbabilityModel::Kind::constant, 0.0, 0.0, p};
    } else if (is_profile_key(key)) {
      profile[key] = v;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  cfg.profile = profile_from_json(profile);
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j = to_json(cfg.profile);
  j["k"] = cfg.k;
  j["lambda"] = cfg.lambda;
  j["fe_scale"] = cfg.fe_scale;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["n_cl"] = cfg.cluster.n_cl;
  j["n_r"] = cfg.cluster.n_r;
  j["angle_spread_deg"] = cfg.cluster.angle_spread * 180.0 / kPi;
  j["d_cl_min"] = cfg.cluster.d_cl_min;
  j["d_cl_max"] = cfg.cluster.d_cl_max;
  if (cfg.cluster.los.kind == LosProbabilityModel::Kind::constant) {
    j["los_probability"] = cfg.cluster.los.value;
  } else {
    j["los_probability"] = nullptr;
  }
  return j;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Antenna-count energy-efficiency optimizer for mmWave hybrid backhaul"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config_path, "JSON file of field overrides");
  app.add_option("--seed", flags.seed, "64-bit seed for Monte Carlo streams");
  app.add_option("--out", flags.out_path, "output file (default: standard output)");
  app.add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--k", flags.k, "number of small cells");
  app.add_option("--lambda", flags.lambda, "oversampling factor of the BS antenna floor");
  app.add_option("--fe-scale", flags.fe_scale, "factor on the front-end power coefficients");
  app.add_option("--trials", flags.trials, "Monte Carlo trials");
  app.add_option("--mode", flags.mode, "los, hybrid-svd, fully-digital or both")
      ->check(CLI::IsMember({"los", "hybrid-svd", "fully-digital", "both"}));

  auto* optimize = app.add_subcommand("optimize", "EE-optimal (M, N) for LoS channels");
  std::string method = "sequential";
  int fixed_n = 0;
  int m_max = 400;
  int n_max = 400;
  std::string trace_path;
  optimize->add_option("--method", method)
      ->check(CLI::IsMember({"sequential", "grid", "closed-form-fixed-N"}));
  optimize->add_option("--n", fixed_n, "BS antennas for closed-form-fixed-N (default mu_K)");
  optimize->add_option("--m-max", m_max, "grid bound on M");
  optimize->add_option("--n-max", n_max, "grid bound on N");
  optimize->add_option("--trace", trace_path, "write the optimizer trace as JSON lines");

  auto* surface = app.add_subcommand("surface", "EE over a grid of (M, N)");
  std::string m_range_text = "1:60";
  std::string n_range_text = "10:80";
  unsigned threads = 0;
  surface->add_option("--m-range", m_range_text, "FIRST:LAST[:STEP]");
  surface->add_option("--n-range", n_range_text, "FIRST:LAST[:STEP]");
  surface->add_option("--threads", threads, "worker threads for NLoS modes");

  auto* conditioning = app.add_subcommand("conditioning", "condition number of the RF precoder");
  std::string cond_range_text = "1:200";
  std::vector<int> cond_ks{2, 6, 8};
  conditioning->add_option("--n-range", cond_range_text, "FIRST:LAST[:STEP]");
  conditioning->add_option("--ks", cond_ks, "K values (ignored when --k is given)")
      ->delimiter(',');

  auto* breakdown = app.add_subcommand("power-breakdown", "component power shares");
  int bd_m = 0, bd_n = 0, bd_dm = 0, bd_dn = 0;
  breakdown->add_option("--m", bd_m, "small-cell antennas (default: LoS optimum)");
  breakdown->add_option("--n", bd_n, "BS antennas (default: LoS optimum)");
  breakdown->add_option("--digital-m", bd_dm, "fully-digital M (default: --m)");
  breakdown->add_option("--digital-n", bd_dn, "fully-digital N (default: --n)");

  auto* simulate = app.add_subcommand("simulate-nlos", "Monte Carlo EE optima over NLoS channels");
  std::string sim_m_text = "1:30";
  std::string sim_n_text = "10:70";
  std::string channel_out;
  simulate->add_option("--m-range", sim_m_text, "FIRST:LAST[:STEP]");
  simulate->add_option("--n-range", sim_n_text, "FIRST:LAST[:STEP]");
  simulate->add_option("--threads", threads, "worker threads");
  simulate->add_option("--channel-out", channel_out,
                       "write trial 0's channel at the first optimum (text matrix format)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg;
    if (!flags.config_path.empty()) {
      std::ifstream in(flags.config_path);
      if (!in) throw ConfigError("config", "cannot open " + flags.config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", e.what());
      }
      apply_config(cfg, j);
    }
    if (app.count("--k")) cfg.k = flags.k;
    if (app.count("--lambda")) cfg.lambda = flags.lambda;
    if (app.count("--fe-scale")) cfg.fe_scale = flags.fe_scale;
    if (app.count("--seed")) cfg.seed = flags.seed;
    if (app.count("--trials")) cfg.trials = flags.trials;
    if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
    validate(cfg.profile);

    const EeProblem pr = EeProblem::make(cfg.k, cfg.profile, cfg.lambda, cfg.fe_scale);
    const Emitter emitter(flags.format, flags.out_path, out);

    if (*optimize) {
      if (!flags.mode.empty() && flags.mode != "los") {
        throw ConfigError("mode", "optimize supports only los");
      }
      nlohmann::json meta = base_metadata("optimize", cfg, "los");
      meta["method"] = method;
      EEPoint pt;
      OptimizerTrace trace;
      if (method == "sequential") {
        OptimizeResult r = sequential_optimize(pr);
        pt = r.point;
        trace = r.trace;
      } else if (method == "grid") {
        meta["m_max"] = m_max;
        meta["n_max"] = n_max;
        pt = grid_search(pr, m_max, n_max);
      } else {
        const int n = fixed_n > 0 ? fixed_n : pr.mu_k;
        if (n < pr.mu_k) {
          throw InfeasibleError("N = " + std::to_string(n) + " is below mu_K = " +
                                std::to_string(pr.mu_k));
        }
        meta["n_fixed"] = n;
        pt = evaluate(pr, optimal_m_given_n(pr, n), n);
      }
      Table t;
      t.columns = with_breakdown({"method", "m", "n", "mu_k", "ee", "throughput",
                                  "throughput_per_cell", "iterations", "converged"});
      std::vector<Cell> row{method,
                            static_cast<long long>(pt.m),
                            static_cast<long long>(pt.n),
                            static_cast<long long>(pr.mu_k),
                            pt.ee,
                            pt.throughput,
                            pt.throughput / cfg.k,
                            static_cast<long long>(trace.iterations_count),
                            static_cast<long long>(method == "sequential" ? trace.converged : 1)};
      append(row, breakdown_cells(pt.breakdown));
      t.add(std::move(row));
      std::optional<nlohmann::json> extra;
      if (method == "sequential") extra = nlohmann::json{{"trace", to_json(trace)}};
      emitter.emit(meta, t, extra);
      if (!trace_path.empty()) {
        std::ofstream tf(trace_path, std::ios::binary);
        if (!tf) throw ConfigError("trace", "cannot open " + trace_path + " for writing");
        for (const auto& step : trace.iterations) {
          tf << nlohmann::json{{"m", step.m}, {"n", step.n}, {"ee", step.ee}}.dump() << '\n';
        }
      }
    } else if (*surface) {
      const std::string mode = flags.mode.empty() ? "los" : flags.mode;
      const IntRange mr = parse_range("m-range", m_range_text);
      const IntRange nr = parse_range("n-range", n_range_text);
      nlohmann::json meta = base_metadata("surface", cfg, mode);
      meta["m_range"] = range_text(mr);
      meta["n_range"] = range_text(nr);
      Table t;
      if (mode == "los") {
        const Surface s = ee_surface(pr, mr, nr);
        t.columns = with_breakdown({"m", "n", "feasible", "ee", "throughput"});
        for (const auto& p : s.points) {
          std::vector<Cell> row{static_cast<long long>(p.m), static_cast<long long>(p.n),
                                static_cast<long long>(p.n >= pr.mu_k), p.ee, p.throughput};
          append(row, breakdown_cells(p.breakdown));
          t.add(std::move(row));
        }
      } else {
        NlosSurfaceConfig sc;
        sc.cluster = cfg.cluster;
        sc.trials = cfg.trials;
        sc.seed = cfg.seed;
        sc.mode = nlos_mode(mode);
        sc.m_range = mr;
        sc.n_range = nr;
        sc.threads = threads;
        const NlosSurface s = ee_surface_nlos(pr, sc);
        meta["trials"] = cfg.trials;
        t.columns = {"m", "n", "ee", "std_ee", "std_error", "throughput", "total",
                     "infeasible_trials"};
        for (const auto& p : s.points) {
          t.add({static_cast<long long>(p.m), static_cast<long long>(p.n), p.mean_ee, p.std_ee,
                 p.std_error, p.mean_throughput, p.mean_power,
                 static_cast<long long>(p.infeasible_trials)});
        }
      }
      emitter.emit(meta, t);
    } else if (*conditioning) {
      const IntRange nr = parse_range("n-range", cond_range_text);
      std::vector<int> ks = app.count("--k") ? std::vector<int>{cfg.k} : cond_ks;
      nlohmann::json meta = base_metadata("conditioning", cfg, "los");
      meta["n_range"] = range_text(nr);
      meta["ks"] = ks;
      Table t;
      t.columns = {"k", "n", "kappa_exact", "kappa_bound", "delta", "mu_k"};
      for (int k : ks) {
        if (k < 1) throw ConfigError("ks", "every K must be >= 1");
        const Placement pl = place_uniform(k, cfg.profile.link.d);
        const int mu = min_bs_antennas(k, cfg.lambda);
        std::optional<double> delta;
        if (k >= 2) delta = node_separation(pl.aod);
        for (int n : nr.values()) {
          if (n < k) continue;
          Cell bound;
          if (k == 1) {
            bound = 1.0;
          } else {
            try {
              bound = condition_bound(k, n, *delta);
            } catch (const DomainError&) {
            }
          }
          t.add({static_cast<long long>(k), static_cast<long long>(n),
                 vandermonde_condition(pl.aod, n), bound,
                 delta ? Cell{*delta} : Cell{}, static_cast<long long>(mu)});
        }
      }
      emitter.emit(meta, t);
    } else if (*breakdown) {
      int m = bd_m, n = bd_n;
      if (m <= 0 || n <= 0) {
        const EEPoint opt = sequential_optimize(pr).point;
        if (m <= 0) m = opt.m;
        if (n <= 0) n = opt.n;
      }
      const int dm = bd_dm > 0 ? bd_dm : m;
      const int dn = bd_dn > 0 ? bd_dn : n;
      const EEPoint hyb = evaluate(pr, m, n);
      const double digital_rate = throughput(dm, dn, cfg.k, cfg.profile.link.gamma,
                                             cfg.profile.link.bandwidth);
      const PowerBreakdown dig = total_consumed_power_digital(
          dm, dn, cfg.k, cfg.profile.hardware, cfg.profile.link, digital_rate, cfg.fe_scale);
      nlohmann::json meta = base_metadata("power-breakdown", cfg, "los");
      Table t;
      t.columns = {"architecture", "m", "n", "component", "power_w", "share_pct"};
      auto emit_rows = [&](const std::string& arch, int mm, int nn, const PowerBreakdown& b) {
        const PowerShares s = b.circuit_shares();
        const std::vector<std::pair<std::string, std::pair<double, double>>> parts{
            {"tx", {b.p_tx_over_eta, s.tx}}, {"fix", {b.p_fix, s.fix}},
            {"rf", {b.p_rf, s.rf}},          {"fe", {b.p_fe_total, s.fe}},
            {"lp", {b.p_lp, s.lp}},          {"ce", {b.p_ce, s.ce}}};
        for (const auto& [name, vals] : parts) {
          t.add({arch, static_cast<long long>(mm), static_cast<long long>(nn), name, vals.first,
                 vals.second});
        }
        t.add({arch, static_cast<long long>(mm), static_cast<long long>(nn), "circuit",
               b.circuit_without_cbh(), 100.0});
        t.add({arch, static_cast<long long>(mm), static_cast<long long>(nn), "cbh", b.p_cbh,
               Cell{}});
        t.add({arch, static_cast<long long>(mm), static_cast<long long>(nn), "total", b.total,
               Cell{}});
      };
      emit_rows("hybrid", m, n, hyb.breakdown);
      emit_rows("fully-digital", dm, dn, dig);
      emitter.emit(meta, t);
    } else if (*simulate) {
      const std::string mode = flags.mode.empty() ? "both" : flags.mode;
      std::vector<PrecoderMode> modes;
      if (mode == "both") {
        modes = {PrecoderMode::hybrid_svd, PrecoderMode::fully_digital};
      } else {
        modes = {nlos_mode(mode)};
      }
      const IntRange mr = parse_range("m-range", sim_m_text);
      const IntRange nr = parse_range("n-range", sim_n_text);
      nlohmann::json meta = base_metadata("simulate-nlos", cfg, mode);
      meta["m_range"] = range_text(mr);
      meta["n_range"] = range_text(nr);
      meta["trials"] = cfg.trials;
      Table t;
      t.columns = {"mode",       "m_star",     "n_star",     "ee",    "std_ee",
                   "std_error",  "throughput", "total",      "trials"};
      std::optional<std::pair<int, int>> first_best;
      for (PrecoderMode pm : modes) {
        NlosSurfaceConfig sc;
        sc.cluster = cfg.cluster;
        sc.trials = cfg.trials;
        sc.seed = cfg.seed;
        sc.mode = pm;
        sc.m_range = mr;
        sc.n_range = nr;
        sc.threads = threads;
        const NlosSurface s = ee_surface_nlos(pr, sc);
        const NlosPoint& b = s.best();
        if (!first_best) first_best = {{b.m, b.n}};
        t.add({std::string(mode_name(pm)), static_cast<long long>(b.m),
               static_cast<long long>(b.n), b.mean_ee, b.std_ee, b.std_error,
               b.mean_throughput, b.mean_power, static_cast<long long>(cfg.trials)});
      }
      emitter.emit(meta, t);
      if (!channel_out.empty()) {
        Rng rng = make_stream(cfg.seed, 0);
        const NlosGeometry geo = draw_nlos_geometry(place_uniform(cfg.k, cfg.profile.link.d),
                                                    cfg.profile.link, cfg.cluster, rng);
        const NlosChannel ch = realize(geo, first_best->second, first_best->first);
        std::ofstream cf(channel_out, std::ios::binary);
        if (!cf) throw ConfigError("channel-out", "cannot open " + channel_out);
        write_matrices(cf, ch.matrices);
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

}  // namespace mmwee
