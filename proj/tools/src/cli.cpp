#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <utility>

#include "csvio.hpp"
#include "experiment.hpp"
#include "jumpsde/montecarlo.hpp"
#include "jumpsde/noise.hpp"
#include "jumpsde/schemes.hpp"
#include "jumpsde/stability.hpp"
#include "problems.hpp"

namespace jumpsde::tools {

namespace {

void print_ledger(const StabilityVerdict& v, std::ostream& out) {
  out << "indicator " << v.indicator_name << " = " << fmt17(v.indicator) << "\n";
  for (const HypothesisCheck& h : v.hypotheses) {
    out << "hypothesis " << h.name << ": " << (h.passed ? "pass" : "FAIL")
        << " (" << fmt17(h.value) << ")\n";
  }
  for (const NamedBound& b : v.bounds) {
    out << "bound " << b.name << " = " << fmt17(b.value) << "\n";
  }
}

/// Threshold-style report: exit 0 with a threshold, 2 without one.
int report_threshold(const StabilityVerdict& v, std::ostream& out) {
  print_ledger(v, out);
  if (v.threshold) {
    if (!v.case_label.empty()) out << "note: " << v.case_label << "\n";
    out << "threshold = " << fmt17(*v.threshold) << "\n";
    return 0;
  }
  out << "no threshold: " << v.case_label << "\n";
  return 2;
}

/// Per-step-size certificate report: exit 0 when certified, 2 otherwise.
int report_certificate(const StabilityVerdict& v, std::ostream& out) {
  print_ledger(v, out);
  if (v.certified) {
    out << "certified at dt = " << fmt_shortest(*v.dt)
        << " via case: " << v.case_label << "\n";
    return 0;
  }
  out << "not certified at dt = " << fmt_shortest(*v.dt) << ": " << v.case_label
      << "\n";
  return 2;
}

std::filesystem::path trajectory_file(const std::filesystem::path& base,
                                      long path_index, long n_paths) {
  if (n_paths == 1) return base;
  std::filesystem::path p = base;
  const std::string ext = p.extension().string();
  p.replace_extension();
  p += "_path" + std::to_string(path_index) + ext;
  return p;
}

struct ThresholdFlags {
  LinearTestParams linear{-1.0, 2.0, -0.9, 9.0};
  // Cubic-drift defaults matching the builtin nonlinear-sec4 problem.
  NonlinearConstants nonlinear{0.12, 0.12, 0.25, 1.0, 3.0, 0.1, 0.1, 0.1, 1.0};
  double dt = 0.0;
};

void add_linear_flags(CLI::App* cmd, LinearTestParams& p) {
  cmd->add_option("--a", p.a, "drift coefficient a")->capture_default_str();
  cmd->add_option("--b", p.b, "diffusion coefficient b")->capture_default_str();
  cmd->add_option("--c", p.c, "jump coefficient c")->capture_default_str();
  cmd->add_option("--lambda", p.lambda, "jump intensity")->capture_default_str();
}

void add_nonlinear_flags(CLI::App* cmd, NonlinearConstants& k) {
  cmd->add_option("--rho", k.rho, "contractivity of the Lipschitz drift part")
      ->capture_default_str();
  cmd->add_option("--K", k.K, "Lipschitz constant of the drift part u")
      ->capture_default_str();
  cmd->add_option("--beta", k.beta, "one-sided decay of the superlinear part v")
      ->capture_default_str();
  cmd->add_option("--beta-bar", k.beta_bar, "growth constant of v")
      ->capture_default_str();
  cmd->add_option("--a-exp", k.a_exp, "growth exponent of v (> 1)")
      ->capture_default_str();
  cmd->add_option("--theta", k.theta, "Lipschitz constant of the diffusion")
      ->capture_default_str();
  cmd->add_option("--C", k.C, "Lipschitz constant of the jump coefficient")
      ->capture_default_str();
  cmd->add_option("--mu", k.mu, "one-sided constant of the jump coefficient")
      ->capture_default_str();
  cmd->add_option("--lambda", k.lambda, "jump intensity")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Jump-diffusion SDE toolkit: tamed/semi-tamed/implicit Euler "
               "schemes, mean-square stability thresholds, Monte Carlo "
               "moment experiments"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ---- threshold ---------------------------------------------------------
  auto* threshold = app.add_subcommand(
      "threshold", "Closed-form mean-square stability analysis");
  threshold->require_subcommand(1);
  auto flags = std::make_shared<ThresholdFlags>();

  auto* sts_linear = threshold->add_subcommand(
      "sts-linear",
      "Semi-tamed scheme on the linear test equation (sharp step-size threshold)");
  add_linear_flags(sts_linear, flags->linear);
  sts_linear->callback([&action, flags, &out]() {
    action = [flags, &out]() {
      return report_threshold(sts_linear_threshold(flags->linear), out);
    };
  });

  auto* ncts_linear = threshold->add_subcommand(
      "ncts-linear",
      "Tamed scheme on the linear test equation (per-step-size certificate)");
  add_linear_flags(ncts_linear, flags->linear);
  ncts_linear->add_option("--dt", flags->dt, "step size to certify")->required();
  ncts_linear->callback([&action, flags, &out]() {
    action = [flags, &out]() {
      return report_certificate(ncts_linear_verdict(flags->linear, flags->dt), out);
    };
  });

  auto* sts_nonlinear = threshold->add_subcommand(
      "sts-nonlinear",
      "Semi-tamed scheme under structural constants (split drift)");
  add_nonlinear_flags(sts_nonlinear, flags->nonlinear);
  sts_nonlinear->callback([&action, flags, &out]() {
    action = [flags, &out]() {
      return report_threshold(sts_nonlinear_threshold(flags->nonlinear), out);
    };
  });

  auto* ncts_nonlinear = threshold->add_subcommand(
      "ncts-nonlinear", "Tamed scheme under structural constants (whole drift)");
  add_nonlinear_flags(ncts_nonlinear, flags->nonlinear);
  ncts_nonlinear->callback([&action, flags, &out]() {
    action = [flags, &out]() {
      return report_threshold(ncts_nonlinear_threshold(flags->nonlinear), out);
    };
  });

  // ---- amplification -----------------------------------------------------
  auto* amplification = app.add_subcommand(
      "amplification",
      "Exact one-step second-moment multiplier R(dt) of the semi-tamed "
      "scheme on the linear test equation");
  auto amp_params = std::make_shared<LinearTestParams>(LinearTestParams{-1.0, 2.0, -0.9, 9.0});
  auto amp_dts = std::make_shared<std::vector<double>>(
      std::vector<double>{0.02, 0.01, 0.005});
  add_linear_flags(amplification, *amp_params);
  amplification->add_option("--dt", *amp_dts, "step sizes to tabulate")
      ->expected(-1);
  amplification->callback([&action, amp_params, amp_dts, &out, &err]() {
    action = [amp_params, amp_dts, &out, &err]() {
      for (double dt : *amp_dts) {
        if (!(dt > 0.0)) {
          err << "amplification: dt must be > 0\n";
          return 1;
        }
      }
      out << "dt,R,stable\n";
      for (double dt : *amp_dts) {
        const double r = sts_linear_amplification(*amp_params, dt);
        out << fmt_shortest(dt) << ',' << fmt17(r) << ','
            << (r < 1.0 ? "yes" : "no") << "\n";
      }
      return 0;
    };
  });

  // ---- simulate ----------------------------------------------------------
  struct SimulateFlags {
    std::string problem;
    std::string scheme = "ncts";
    double dt = 0.0;
    long steps = -1;
    long paths = 1;
    std::uint64_t seed = 42;
    std::string out_file;
    bool dump_config = false;
  };
  auto sim = std::make_shared<SimulateFlags>();
  auto* simulate = app.add_subcommand(
      "simulate", "Write sample trajectories to CSV (step,time,x0,...)");
  simulate->add_option("--problem", sim->problem,
                       "builtin problem name or config file path")
      ->required();
  simulate->add_option("--scheme", sim->scheme, "em|ncts|sts|be|ssbe")
      ->capture_default_str();
  simulate->add_option("--dt", sim->dt, "step size");
  simulate->add_option("--steps", sim->steps, "number of steps");
  simulate->add_option("--paths", sim->paths, "number of independent paths")
      ->capture_default_str();
  simulate->add_option("--seed", sim->seed, "master seed")->capture_default_str();
  simulate->add_option("--out", sim->out_file, "output CSV path");
  simulate->add_flag("--dump-config", sim->dump_config,
                     "print the resolved problem config and exit");
  simulate->callback([&action, sim, &out, &err]() {
    action = [sim, &out, &err]() {
      const ResolvedProblem rp = resolve_problem(sim->problem);
      if (sim->dump_config) {
        out << rp.config_text;
        return 0;
      }
      const std::optional<Scheme> scheme = parse_scheme(sim->scheme);
      if (!scheme) {
        err << "simulate: unknown scheme '" << sim->scheme << "'\n";
        return 1;
      }
      if (!(sim->dt > 0.0)) {
        err << "simulate: --dt must be > 0\n";
        return 1;
      }
      if (sim->steps < 0) {
        err << "simulate: --steps is required and must be >= 0\n";
        return 1;
      }
      if (sim->paths < 1) {
        err << "simulate: --paths must be >= 1\n";
        return 1;
      }
      if (sim->out_file.empty()) {
        err << "simulate: --out is required\n";
        return 1;
      }
      for (long k = 0; k < sim->paths; ++k) {
        NoiseStream stream =
            derive_path_stream(sim->seed, static_cast<std::uint64_t>(k));
        const Trajectory trajectory =
            simulate_path(rp.problem, *scheme, sim->dt, sim->steps, stream);
        const std::filesystem::path file =
            trajectory_file(sim->out_file, k, sim->paths);
        write_trajectory_csv(file, trajectory);
        out << "wrote " << file.string() << "\n";
        if (trajectory.overflowed) {
          out << "note: path " << k << " overflowed at step "
              << trajectory.states.size() - 1 << "; trajectory truncated\n";
        }
      }
      return 0;
    };
  });

  // ---- experiment --------------------------------------------------------
  struct ExperimentFlags {
    std::string problem;
    std::vector<std::string> schemes{"ncts", "sts", "be", "ssbe"};
    std::vector<double> dts;
    long paths = 0;
    std::uint64_t seed = 42;
    std::string out_dir;
    int threads = 0;
    bool dump_config = false;
  };
  auto exp = std::make_shared<ExperimentFlags>();
  auto* experiment = app.add_subcommand(
      "experiment",
      "Monte Carlo second-moment study: per-(scheme,dt) CSVs, per-scheme "
      "log-scale SVGs, and a summary with fitted decay rates and thresholds");
  experiment->add_option("--problem", exp->problem,
                         "builtin problem name or config file path")
      ->required();
  experiment->add_option("--scheme", exp->schemes,
                         "schemes to run (default: ncts sts be ssbe)")
      ->expected(-1);
  experiment->add_option("--dt", exp->dts,
                         "step sizes (default: the problem's standard set)")
      ->expected(-1);
  experiment->add_option("--paths", exp->paths,
                         "paths per series (default: the problem's standard count)");
  experiment->add_option("--seed", exp->seed, "master seed")->capture_default_str();
  experiment->add_option("--out", exp->out_dir, "output directory");
  experiment->add_option("--threads", exp->threads,
                         "worker threads, 0 = all cores (never changes output bytes)")
      ->capture_default_str();
  experiment->add_flag("--dump-config", exp->dump_config,
                       "print the resolved problem config and exit");
  experiment->callback([&action, exp, &out, &err]() {
    action = [exp, &out, &err]() {
      ResolvedProblem rp = resolve_problem(exp->problem);
      if (exp->dump_config) {
        out << rp.config_text;
        return 0;
      }
      if (exp->out_dir.empty()) {
        err << "experiment: --out is required\n";
        return 1;
      }
      std::vector<Scheme> schemes;
      for (const std::string& name : exp->schemes) {
        const std::optional<Scheme> s = parse_scheme(name);
        if (!s) {
          err << "experiment: unknown scheme '" << name << "'\n";
          return 1;
        }
        schemes.push_back(*s);
      }
      const long n_paths = exp->paths == 0 ? rp.default_paths : exp->paths;
      if (n_paths < 2) {
        err << "experiment: --paths must be >= 2\n";
        return 1;
      }
      std::vector<double> dts = exp->dts.empty() ? rp.default_dts : exp->dts;
      ExperimentPlan plan{.problem = std::move(rp),
                          .schemes = std::move(schemes),
                          .dts = std::move(dts),
                          .n_paths = n_paths,
                          .master_seed = exp->seed,
                          .out_dir = exp->out_dir,
                          .n_threads = exp->threads};
      run_experiment(plan, out);
      return 0;
    };
  });

  // ---- parse and dispatch ------------------------------------------------
  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("jumpsde");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    return action ? action() : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace jumpsde::tools
