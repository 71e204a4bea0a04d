#include "circfilt/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "circfilt/config.hpp"
#include "circfilt/errors.hpp"
#include "circfilt/experiments.hpp"
#include "circfilt/report.hpp"
#include "circfilt/selftest.hpp"

namespace circfilt {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  std::string config_path;
  std::vector<std::string> sets;               // "section.key=value"
  std::map<std::string, std::string> flags;    // key → value from dedicated flags
  std::string out;
  std::string trajectory;
};

void add_flag(CLI::App* app, Invocation& inv, const std::string& name, const std::string& key,
              const std::string& help, bool numeric = true) {
  auto* opt = app->add_option_function<std::string>(
      name, [&inv, key](const std::string& v) { inv.flags[key] = v; }, help + " [" + key + "]");
  if (numeric) opt->check(CLI::Number);
}

void add_common(CLI::App* app, Invocation& inv) {
  app->add_option("--config", inv.config_path, "INI file with [model], [filters], [experiment], [init], [output]")
      ->check(CLI::ExistingFile);
  app->add_option("--set", inv.sets, "Override any key, e.g. --set model.kappa_u=100");
  add_flag(app, inv, "--seed", "experiment.seed", "Root random seed");
}

void add_model_flags(CLI::App* app, Invocation& inv) {
  add_flag(app, inv, "--model", "model.kind", "circular or linear", false);
  add_flag(app, inv, "--kappa-phi", "model.kappa_phi", "State diffusion precision");
  add_flag(app, inv, "--kappa-u", "model.kappa_u", "Increment observation precision");
  add_flag(app, inv, "--kappa-z", "model.kappa_z", "Direct observation precision rate (omit for none)");
  add_flag(app, inv, "--dt", "model.dt", "Time step");
  add_flag(app, inv, "--alpha-mode", "model.alpha_mode", "ideal, sqrt, sqrt-caption or linear", false);
  add_flag(app, inv, "--T", "experiment.T", "Horizon");
}

void add_experiment_flags(CLI::App* app, Invocation& inv) {
  add_flag(app, inv, "--filters", "filters.list", "Comma list: circkf, vm_increment, gauss_adf, gkbf, gvm(K), pf(N)",
           false);
  add_flag(app, inv, "--runs", "experiment.runs", "Monte Carlo runs");
  add_flag(app, inv, "--jobs", "experiment.jobs", "Worker threads (0: OpenMP default)");
  add_flag(app, inv, "--record-stride", "experiment.record_stride", "Record every k-th step");
  add_flag(app, inv, "--traces", "output.traces", "Write per-run traces for the first n runs");
  add_flag(app, inv, "--out-dir", "output.dir", "Output directory", false);
}

Settings resolve(const Invocation& inv, const std::vector<std::string>& base_header = {}) {
  Settings s = Settings::defaults();
  s.merge_header(base_header);
  if (!inv.config_path.empty()) s.merge_file(inv.config_path);
  for (const auto& item : inv.sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + item + "'");
    s.set(item.substr(0, eq), item.substr(eq + 1));
  }
  for (const auto& [key, value] : inv.flags) s.set(key, value);
  return s;
}

std::vector<std::string> header_for(const std::string& command, const Settings& s) {
  std::vector<std::string> h{"circfilt " + command};
  const auto lines = s.header_lines();
  h.insert(h.end(), lines.begin(), lines.end());
  return h;
}

int cmd_simulate(const Invocation& inv, std::ostream& out) {
  const Settings s = resolve(inv);
  const ExperimentConfig c = s.experiment(false);
  const fs::path path = inv.out.empty() ? fs::path(s.get("output.dir")) / "trajectory.csv" : fs::path(inv.out);
  CounterRng init_rng = CounterRng(c.seed).split("init");
  TrajectoryRecord traj;
  if (c.model == ModelKind::kCircular) {
    CircularSimOptions opt;
    opt.increments = c.increments;
    opt.static_state = c.static_state;
    opt.phi0 = c.init.mode == InitMode::kPrior
                   ? vm_sample(Angle(c.init.mu0), Precision(c.init.kappa0), init_rng).radians()
                   : c.init.mu0;
    traj = simulate_circular(c.circular, c.T, c.seed, opt);
  } else {
    const double x0 = c.init.mode == InitMode::kPrior ? c.init.mu0 + std::sqrt(c.init.sigma2_0) * init_rng.normal()
                                                      : c.init.mu0;
    traj = simulate_linear(c.linear, x0, c.T, c.seed);
  }
  auto file = open_output(path);
  write_trajectory_csv(file, traj, header_for("simulate", s));
  if (!file) throw IoError("write failed: " + path.string());
  out << "wrote " << traj.t.size() << " rows to " << path.string() << '\n';
  return kExitOk;
}

int cmd_filter(const Invocation& inv, std::ostream& out) {
  std::ifstream in(inv.trajectory);
  if (!in) throw IoError("cannot open trajectory " + inv.trajectory);
  std::vector<std::string> traj_header;
  TrajectoryRecord traj = read_trajectory_csv(in, true, &traj_header);
  const Settings s = resolve(inv, traj_header);
  const ExperimentConfig c = s.experiment();
  traj.circular = c.model == ModelKind::kCircular;
  if (c.filters.size() != 1) throw ConfigError("filter: exactly one filter expected in filters.list");
  const FilterTrace trace = filter_trajectory(c, c.filters.front(), traj, c.seed);

  const fs::path path = inv.out.empty() ? fs::path(s.get("output.dir")) / "trace.csv" : fs::path(inv.out);
  auto file = open_output(path);
  for (const auto& line : header_for("filter", s)) file << "# " << line << '\n';
  file << "# trajectory = " << inv.trajectory << '\n';
  file << "t," << (traj.circular ? "phi,mu,r\n" : "x,mu,sigma2\n");
  for (std::size_t k = 0; k < trace.t.size(); ++k)
    file << format_number(trace.t[k]) << ',' << format_number(traj.phi[k]) << ',' << format_number(trace.mu[k]) << ','
         << format_number(trace.spread[k]) << '\n';
  if (!file) throw IoError("write failed: " + path.string());
  out << "wrote " << trace.t.size() << " rows to " << path.string() << '\n';
  return kExitOk;
}

void write_summary_outputs(const Settings& s, const std::string& command, const RunSummary& summary,
                           const fs::path& dir, std::ostream& out) {
  const auto header = header_for(command, s);
  {
    auto file = open_output(dir / "summary.csv");
    write_summary_csv(file, header, summary);
  }
  for (const auto& trace : summary.traces) {
    auto file = open_output(dir / "traces" / ("run_" + std::to_string(trace.run) + ".csv"));
    write_trace_csv(file, header, summary, trace);
  }
  if (s.get_bool("output.plots")) {
    auto file = open_output(dir / "summary.svg");
    for (const auto& line : header) file << "<!-- " << line << " -->\n";
    write_summary_svg(file, summary, command);
  }
  {
    auto file = open_output(dir / "timing.csv");
    for (const auto& line : header) file << "# " << line << '\n';
    file << "filter,wall_seconds_total,n_runs\n";
    for (const auto& f : summary.filters)
      file << f.label << ',' << format_number(f.wall_seconds) << ',' << summary.runs_completed << '\n';
  }
  out << "runs completed: " << summary.runs_completed << " / " << summary.runs_requested << '\n';
  for (const auto& f : summary.failures) out << "  " << f << '\n';
  for (const auto& f : summary.filters) {
    if (!f.r_mean.empty())
      out << "  " << f.label << ": r_mean(T) = " << f.r_mean.back() << ", r_hat(T) = " << f.r_hat.back() << '\n';
    else if (!f.mse.empty())
      out << "  " << f.label << ": sigma2(T) = " << f.sigma2_mean.back() << ", mse(T) = " << f.mse.back() << '\n';
  }
  out << "wrote " << (dir / "summary.csv").string() << '\n';
}

int cmd_mc(const Invocation& inv, std::ostream& out) {
  const Settings s = resolve(inv);
  const RunSummary summary = run_monte_carlo(s.experiment());
  write_summary_outputs(s, "mc", summary, s.get("output.dir"), out);
  return summary.complete() ? kExitOk : kExitNumeric;
}

int cmd_sweep(const Invocation& inv, std::ostream& out) {
  const Settings s = resolve(inv);
  const auto parameter = parse_sweep_parameter(s.get("sweep.parameter"));
  std::vector<double> values;
  for (const auto& v : s.get_list("sweep.values")) {
    Settings probe = Settings::defaults();
    probe.set("sweep.values", v);
    values.push_back(probe.get_double("sweep.values"));
  }
  const SweepResult result = sweep(s.experiment(), parameter, values);
  const fs::path dir = s.get("output.dir");
  const auto header = header_for("sweep", s);
  {
    auto file = open_output(dir / "sweep.csv");
    write_sweep_csv(file, header, result);
  }
  if (s.get_bool("output.plots")) {
    auto file = open_output(dir / "sweep.svg");
    for (const auto& line : header) file << "<!-- " << line << " -->\n";
    write_sweep_svg(file, result, "sweep over " + std::string(to_string(parameter)));
  }
  bool complete = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << to_string(parameter) << " = " << values[i] << '\n';
    for (const auto& f : result.summaries[i].filters)
      if (!f.r_mean.empty())
        out << "  " << f.label << ": r_mean(T) = " << f.r_mean.back() << ", r_hat(T) = " << f.r_hat.back() << '\n';
    complete = complete && result.summaries[i].complete();
  }
  out << "wrote " << (dir / "sweep.csv").string() << '\n';
  return complete ? kExitOk : kExitNumeric;
}

int cmd_timing(const Invocation& inv, std::ostream& out) {
  const Settings s = resolve(inv);
  const TimingReport report = timing_report(s.experiment(), static_cast<int>(s.get_int("timing.repeats")));
  const fs::path path = fs::path(s.get("output.dir")) / "timing.csv";
  auto file = open_output(path);
  write_timing_csv(file, header_for("timing", s), report);
  for (const auto& e : report.entries) out << e.label << ": median " << e.median << " s\n";
  if (report.circkf_to_pf) out << "pf / circkf = " << *report.circkf_to_pf << '\n';
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous-time circular filtering: simulation, filters and Monte Carlo experiments", "circfilt"};
  app.require_subcommand(1);
  Invocation inv;

  auto* simulate = app.add_subcommand("simulate", "Simulate a trajectory with observations to CSV");
  add_common(simulate, inv);
  add_model_flags(simulate, inv);
  simulate->add_option("--out", inv.out, "Output CSV (default <output.dir>/trajectory.csv)");

  auto* filter = app.add_subcommand("filter", "Run one filter over a trajectory CSV");
  add_common(filter, inv);
  add_model_flags(filter, inv);
  filter->add_option("--trajectory", inv.trajectory, "Trajectory CSV from 'simulate'")->required();
  add_flag(filter, inv, "--filter", "filters.list", "Filter name, e.g. circkf or pf(1000)", false);
  add_flag(filter, inv, "--init", "init.mode", "prior or truth", false);
  filter->add_option("--out", inv.out, "Output CSV (default <output.dir>/trace.csv)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo consistency experiment");
  add_common(mc, inv);
  add_model_flags(mc, inv);
  add_experiment_flags(mc, inv);

  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat the Monte Carlo experiment over parameter values");
  add_common(sweep_cmd, inv);
  add_model_flags(sweep_cmd, inv);
  add_experiment_flags(sweep_cmd, inv);
  add_flag(sweep_cmd, inv, "--parameter", "sweep.parameter", "kappa_u, kappa_z or dt", false);
  add_flag(sweep_cmd, inv, "--values", "sweep.values", "Comma list of values", false);

  auto* timing = app.add_subcommand("timing", "Median wall-clock per filter on one shared trajectory");
  add_common(timing, inv);
  add_model_flags(timing, inv);
  add_flag(timing, inv, "--filters", "filters.list", "Comma list of filters", false);
  add_flag(timing, inv, "--repeats", "timing.repeats", "Timed repetitions per filter");
  add_flag(timing, inv, "--out-dir", "output.dir", "Output directory", false);

  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(inv, out);
    if (filter->parsed()) return cmd_filter(inv, out);
    if (mc->parsed()) return cmd_mc(inv, out);
    if (sweep_cmd->parsed()) return cmd_sweep(inv, out);
    if (timing->parsed()) return cmd_timing(inv, out);
    if (selftest->parsed()) return print_selftest(out, run_selftest()) ? kExitOk : kExitNumeric;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace circfilt
