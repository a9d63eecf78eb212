#include "kitaev/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

#include "kitaev/cli/csv_writer.hpp"
#include "kitaev/ed_oracle.hpp"
#include "kitaev/echo.hpp"
#include "kitaev/floquet.hpp"
#include "kitaev/format.hpp"
#include "kitaev/parallel.hpp"

namespace kitaev::cli {

namespace {

constexpr double kVerifyTolerance = 1e-9;
constexpr double kCorruption = 1e-4;

MetaRecord base_meta(const RunConfig& c) {
  return {{"tool", std::string(kToolName) + " " + kToolVersion},
          {"invocation", canonical_invocation(c)},
          {"command", c.command}};
}

void append(MetaRecord& meta, const MetaRecord& more) { meta.insert(meta.end(), more.begin(), more.end()); }

ChainSpec chain(const RunConfig& c, int n, double h) { return ChainSpec{n, c.j_x, c.r, h}; }

double single_field(const RunConfig& c) { return parse_range(c.h_f).front(); }

std::string plot_target(const RunConfig& c) { return c.out == "-" ? "kitaev_echo.csv" : c.out; }

void emit(const RunConfig& c, const CsvTable& table, const PlotSpec& plot, std::ostream& out) {
  write_text(c.out, table.render(), out);
  if (!c.plot_script.empty()) write_text(c.plot_script, gnuplot_script(plot_target(c), plot), out);
}

std::string state_label(const RunConfig& c) { return c.state; }

PlotSpec line_plot(std::string title, std::string xlabel, std::string ylabel, int x_column = 1, int y_column = 2) {
  PlotSpec p;
  p.title = std::move(title);
  p.xlabel = std::move(xlabel);
  p.ylabel = std::move(ylabel);
  p.x_column = x_column;
  p.y_column = y_column;
  return p;
}

void series_rows(CsvTable& table, const EchoSeries& s) {
  for (std::size_t i = 0; i < s.size(); ++i) table.add_row({s.grid[i], s.values[i]});
}

int cmd_echo(const RunConfig& c, std::ostream& out) {
  const int n = c.chain_length();
  const InitialState state = parse_state(c.state, n);
  const TimeGrid grid{c.t_max, c.dt};
  const auto ts = grid.points();
  EchoSeries s = Quench(chain(c, n, single_field(c)), chain(c, n, c.h_b)).echo_series(state, ts, c.workers);
  if (c.window > 0) s = window_average(s, c.window);
  CsvTable table;
  table.meta = base_meta(c);
  append(table.meta, s.meta);
  table.meta.emplace_back("grid", grid.describe());
  table.columns = {"t", "L"};
  series_rows(table, s);
  emit(c, table, line_plot("Loschmidt echo, N=" + std::to_string(n) + ", " + state_label(c), "t j_x", "L(t)"), out);
  return kExitOk;
}

int cmd_momdist(const RunConfig& c, std::ostream& out) {
  const int n = c.chain_length();
  const InitialState state = parse_state(c.state, n);
  const Quench quench(chain(c, n, single_field(c)), chain(c, n, c.h_b));
  const MomentumSelection sel = parse_k_range(c.k_range);
  CsvTable table;
  table.meta = base_meta(c);
  append(table.meta, quench.describe());
  table.meta.emplace_back("state", describe(state));
  if (sel.single) {
    const TimeGrid grid{c.t_max, c.dt};
    const auto ts = grid.points();
    EchoSeries s = quench.momentum_series(state, sel.k, ts, c.workers);
    if (c.window > 0) s = window_average(s, c.window);
    table.meta.emplace_back("k", format_number(reduce_momentum(sel.k)));
    table.meta.emplace_back("grid", grid.describe());
    if (c.window > 0) table.meta.emplace_back("window", std::to_string(c.window));
    table.columns = {"t", "P"};
    series_rows(table, s);
    emit(c, table, line_plot("P(k,t), N=" + std::to_string(n) + ", k=" + c.k_range, "t j_x", "P(k,t)"), out);
    return kExitOk;
  }
  const auto ks = allowed_momenta(n);
  const auto profile = quench.momentum_profile(state, c.time);
  table.meta.emplace_back("t", format_number(c.time));
  table.meta.emplace_back("k_range", c.k_range);
  table.columns = {"k", "P"};
  const double tol = 1e-12;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] >= sel.lo - tol && ks[i] <= sel.hi + tol) table.add_row({ks[i], profile[i]});
  }
  if (table.rows.empty()) throw ValidationError({"k range '" + c.k_range + "' holds no allowed momentum"});
  emit(c, table, line_plot("P(k), N=" + std::to_string(n) + ", t=" + format_number(c.time), "k", "P(k)"), out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const std::vector<int> sizes = c.sizes.empty() ? std::vector<int>{c.chain_length()} : parse_sizes(c.sizes);
  const auto fields = parse_range(c.h_f);
  CsvTable table;
  table.meta = base_meta(c);
  table.meta.emplace_back("j_x", format_number(c.j_x));
  table.meta.emplace_back("r", format_number(c.r));
  table.meta.emplace_back("h_b", format_number(c.h_b));
  table.meta.emplace_back("t", format_number(c.time));
  table.meta.emplace_back("state", c.state);
  table.meta.emplace_back("h_f_range", c.h_f);
  table.columns = {"N", "h_f", "L"};
  PlotSpec plot{"L(h_f) at t=" + format_number(c.time), "h_f / j_x", "L", 2, 3, 1, {}, false};
  for (int n : sizes) {
    const EchoSeries s = field_sweep(chain(c, n, c.h_b), fields, c.time, parse_state(c.state, n), c.workers);
    for (std::size_t i = 0; i < s.size(); ++i) table.add_row({static_cast<double>(n), s.grid[i], s.values[i]});
    plot.groups.push_back(std::to_string(n));
  }
  emit(c, table, plot, out);
  return kExitOk;
}

int cmd_kicked(const RunConfig& c, std::ostream& out) {
  const int n = c.chain_length();
  const InitialState state = parse_state(c.state, n);
  const double tau = parse_angle(c.tau);
  const KickSpec f{chain(c, n, 0.0), tau, single_field(c)};
  const KickSpec b{chain(c, n, 0.0), tau, c.h_b};
  EchoSeries s = KickedQuench(f, b).echo_series(state, c.kicks, c.workers);
  if (c.window > 0) s = window_average(s, c.window);
  CsvTable table;
  table.meta = base_meta(c);
  append(table.meta, s.meta);
  table.meta.emplace_back("kicks", std::to_string(c.kicks));
  table.columns = {"n", "t", "L"};
  for (std::size_t i = 0; i < s.size(); ++i) table.add_row({s.grid[i], s.grid[i] * tau, s.values[i]});
  emit(c, table, line_plot("Kicked Loschmidt echo, N=" + std::to_string(n) + ", tau=" + c.tau, "kick n", "L", 1, 3),
       out);
  return kExitOk;
}

int cmd_scaling(const RunConfig& c, std::ostream& out) {
  const auto sizes = parse_sizes(c.sizes);
  PowerLawFit fit;
  if (c.synthetic_peaks) {
    std::vector<double> ns(sizes.begin(), sizes.end());
    std::vector<double> peaks;
    for (double n : ns) peaks.push_back(1.0 / n);
    fit = fit_power_law(ns, peaks);
  } else {
    const double hf = single_field(c);
    fit = peak_scaling_fit(chain(c, sizes.front(), hf), chain(c, sizes.front(), c.h_b), sizes, c.time,
                           c.workers);
  }
  CsvTable table;
  table.meta = base_meta(c);
  table.meta.emplace_back("j_x", format_number(c.j_x));
  table.meta.emplace_back("r", format_number(c.r));
  table.meta.emplace_back("h_f", c.h_f);
  table.meta.emplace_back("h_b", format_number(c.h_b));
  table.meta.emplace_back("t", format_number(c.time));
  table.meta.emplace_back("peaks", c.synthetic_peaks ? "synthetic 1/N" : "max_k P(k,t), uniform state");
  table.meta.emplace_back("fit_amplitude", format_number(fit.amplitude));
  table.meta.emplace_back("fit_exponent", format_number(fit.exponent));
  table.columns = {"N", "P_max"};
  for (std::size_t i = 0; i < fit.sizes.size(); ++i) table.add_row({fit.sizes[i], fit.peaks[i]});
  emit(c, table,
       {"Peak scaling, P_max = " + format_number(fit.amplitude) + " N^" + format_number(fit.exponent), "N",
        "P_max", 1, 2, 0, {}, true},
       out);
  return kExitOk;
}

struct Deviation {
  std::string observable;
  double max_dev = 0.0;
};

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int n = c.chain_length();
  const double hf = single_field(c);
  const ChainSpec f = chain(c, n, hf);
  const ChainSpec b = chain(c, n, c.h_b);
  const ChainSpec engine_f = c.corrupt_engine ? f.with_field(hf + kCorruption) : f;
  const Quench quench(engine_f, b);
  const OracleQuench oracle(f, b);
  const auto ts = TimeGrid{c.t_max, c.dt}.points();
  const auto ks = allowed_momenta(n);

  std::vector<std::pair<std::string, InitialState>> states{
      {"vacuum", VacuumState{}},
      {"magnon:pi/" + std::to_string(n), DefiniteMomentumState{kPi / n}},
      {"magnon:-3pi/" + std::to_string(n), DefiniteMomentumState{-3.0 * kPi / n}},
      {"magnon:" + std::to_string(n - 1) + "pi/" + std::to_string(n), DefiniteMomentumState{kPi - kPi / n}},
      {"uniform", UniformSiteState{}}};

  std::vector<Deviation> report;
  for (const auto& [label, state] : states) {
    const auto samples = oracle.evaluate(state, ts);
    std::vector<double> dl(ts.size(), 0.0);
    std::vector<double> dp(ts.size(), 0.0);
    parallel_for(ts.size(), c.workers, [&](std::size_t i) {
      const auto amps = quench.amplitudes(ts[i]);
      dl[i] = std::abs(assemble_loschmidt(amps, n, state) - samples[i].loschmidt);
      if (std::holds_alternative<VacuumState>(state)) return;
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const double p = assemble_momentum_dist(amps, n, state, locate_momentum(n, ks[j]));
        dp[i] = std::max(dp[i], std::abs(p - samples[i].momentum_dist[j]));
      }
    });
    report.push_back({"L " + label, *std::max_element(dl.begin(), dl.end())});
    if (!std::holds_alternative<VacuumState>(state)) {
      report.push_back({"P " + label, *std::max_element(dp.begin(), dp.end())});
    }
  }

  const double tau = parse_angle(c.tau);
  const KickSpec kf{chain(c, n, 0.0), tau, hf};
  const KickSpec kb{chain(c, n, 0.0), tau, c.h_b};
  const KickSpec engine_kf{kf.base, tau, c.corrupt_engine ? hf + kCorruption : hf};
  const KickedQuench kicked(engine_kf, kb);
  for (const auto& [label, state] : {std::pair<std::string, InitialState>{"vacuum", VacuumState{}},
                                     std::pair<std::string, InitialState>{"uniform", UniformSiteState{}}}) {
    const auto ref = oracle_kicked_series(kf, kb, state, c.kicks);
    double dev = 0.0;
    for (long long k = 0; k <= c.kicks; ++k) {
      dev = std::max(dev, std::abs(kicked.loschmidt(state, k) - ref[static_cast<std::size_t>(k)]));
    }
    report.push_back({"L kicked " + label, dev});
  }

  CsvTable table;
  table.meta = base_meta(c);
  append(table.meta, quench.describe());
  table.meta.emplace_back("grid", TimeGrid{c.t_max, c.dt}.describe());
  table.meta.emplace_back("tau", c.tau);
  table.meta.emplace_back("kicks", std::to_string(c.kicks));
  table.columns = {"observable", "max_deviation", "tolerance", "status"};
  bool all_ok = true;
  for (const auto& d : report) {
    const bool ok = d.max_dev <= kVerifyTolerance;
    all_ok = all_ok && ok;
    table.rows.push_back({d.observable, format_number(d.max_dev), format_number(kVerifyTolerance), ok ? "pass" : "fail"});
  }
  write_text(c.out, table.render(), out);
  err << "verify N=" << n << ": " << (all_ok ? "PASS" : "FAIL") << " (" << report.size() << " observables)\n";
  return all_ok ? kExitOk : kExitVerification;
}

}  // namespace

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "echo") return cmd_echo(c, out);
  if (c.command == "momdist") return cmd_momdist(c, out);
  if (c.command == "sweep") return cmd_sweep(c, out);
  if (c.command == "kicked") return cmd_kicked(c, out);
  if (c.command == "scaling") return cmd_scaling(c, out);
  if (c.command == "verify") return cmd_verify(c, out, err);
  throw ValidationError({"unknown command '" + c.command + "'"});
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.workers = default_workers();

  CLI::App app{"Loschmidt echo and magnon momentum distributions of the Kitaev spin chain", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "Flat key=value file (keys are long flag names); flags override it");
  app.require_subcommand(1, 1);

  const auto env = [](const std::string& name) { return std::string(kEnvPrefix) + name; };
  app.add_option("--n", cfg.n_sites, "Chain length N, multiple of 4 (default 32; 8 for verify)")
      ->envname(env("N"));
  app.add_option("--r", cfg.r, "Coupling ratio j_y/j_x")->envname(env("R"))->capture_default_str();
  app.add_option("--jx", cfg.j_x, "Coupling j_x (energy unit)")->envname(env("JX"))->capture_default_str();
  app.add_option("--hf", cfg.h_f, "Forward field h_f/j_x; start:step:stop for sweep")
      ->envname(env("HF"))
      ->capture_default_str();
  app.add_option("--hb", cfg.h_b, "Backward field h_b/j_x")->envname(env("HB"))->capture_default_str();
  app.add_option("--state", cfg.state, "vacuum | uniform | magnon:<m or momentum, e.g. 15pi/32>")
      ->envname(env("STATE"))
      ->capture_default_str();
  app.add_option("--tmax", cfg.t_max, "Last time of the grid (1/j_x)")->envname(env("TMAX"))->capture_default_str();
  app.add_option("--dt", cfg.dt, "Time step (1/j_x)")->envname(env("DT"))->capture_default_str();
  app.add_option("--tau", cfg.tau, "Kick period, e.g. pi/12")->envname(env("TAU"))->capture_default_str();
  app.add_option("--kicks", cfg.kicks, "Number of kicks")->envname(env("KICKS"))->capture_default_str();
  app.add_option("--time", cfg.time, "Fixed time for momentum scans, sweeps and scaling")
      ->envname(env("TIME"))
      ->capture_default_str();
  app.add_option("--k-range", cfg.k_range, "all | lo:hi | single momentum (time series)")
      ->envname(env("K_RANGE"))
      ->capture_default_str();
  app.add_option("--window", cfg.window, "Sliding-window length in samples (0 = off)")
      ->envname(env("WINDOW"))
      ->capture_default_str();
  app.add_option("--sizes", cfg.sizes, "Comma-separated chain lengths (scaling, sweep)")->envname(env("SIZES"));
  app.add_option("--out", cfg.out, "Output CSV path, - for stdout")->envname(env("OUT"))->capture_default_str();
  app.add_option("--plot-script", cfg.plot_script, "Write a gnuplot script for the CSV here")
      ->envname(env("PLOT_SCRIPT"));
  app.add_option("--workers", cfg.workers, "Worker threads (default: available cores)")
      ->envname(env("WORKERS"))
      ->capture_default_str();
  app.add_flag("--corrupt-engine", cfg.corrupt_engine, "Perturb the engine (verify negative control)")
      ->envname(env("CORRUPT_ENGINE"))
      ->group("");
  app.add_flag("--synthetic-peaks", cfg.synthetic_peaks, "Use P_max = 1/N (scaling test hook)")
      ->envname(env("SYNTHETIC_PEAKS"))
      ->group("");

  app.add_subcommand("echo", "L(t) time series")->fallthrough();
  app.add_subcommand("momdist", "P(k) at fixed time, or P(k,t) for one momentum")->fallthrough();
  app.add_subcommand("sweep", "L versus forward field at fixed time")->fallthrough();
  app.add_subcommand("kicked", "Stroboscopic L under a kicked field")->fallthrough();
  app.add_subcommand("scaling", "Peak P_max(N) of the uniform state and its power-law fit")->fallthrough();
  app.add_subcommand("verify", "Compare the engine against exact diagonalisation (N <= 12)")->fallthrough();

  std::vector<std::string> storage(args);
  if (storage.empty()) storage.emplace_back(kToolName);
  std::vector<char*> argv;
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const auto problems = validate(cfg);
  if (!problems.empty()) {
    err << "error: " << ValidationError(problems).what() << '\n';
    return kExitValidation;
  }
  try {
    return execute(cfg, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace kitaev::cli
