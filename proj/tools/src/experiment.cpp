#include "experiment.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "csvio.hpp"
#include "jumpsde/errors.hpp"
#include "jumpsde/montecarlo.hpp"
#include "jumpsde/stability.hpp"
#include "svg.hpp"

namespace jumpsde::tools {

namespace {

long steps_for(double horizon, double dt) {
  const long n = static_cast<long>(std::floor(horizon / dt + 1e-9));
  if (n < 1) {
    throw std::invalid_argument("dt " + fmt_shortest(dt) +
                                " exceeds the problem horizon " +
                                fmt_shortest(horizon));
  }
  return n;
}

// threshold and certified cells of one summary row; empty when no
// closed-form analysis applies to this scheme/problem pair.
std::pair<std::string, std::string> stability_cells(const ResolvedProblem& rp,
                                                    Scheme scheme, double dt) {
  if (rp.linear) {
    if (scheme == Scheme::STS) {
      const StabilityVerdict v = sts_linear_threshold(*rp.linear);
      if (!v.hypotheses_ok()) return {"", "hypothesis-failed"};
      return {fmt17(*v.threshold), dt < *v.threshold ? "yes" : "no"};
    }
    if (scheme == Scheme::NCTS) {
      const StabilityVerdict v = ncts_linear_verdict(*rp.linear, dt);
      if (!v.hypotheses_ok()) return {"", "hypothesis-failed"};
      // The certificate is per step size, so there is no single threshold.
      return {"", v.certified ? "yes" : "no"};
    }
  }
  if (rp.nonlinear) {
    if (scheme == Scheme::STS) {
      const StabilityVerdict v = sts_nonlinear_threshold(*rp.nonlinear);
      if (!v.hypotheses_ok()) return {"", "hypothesis-failed"};
      return {fmt17(*v.threshold), dt < *v.threshold ? "yes" : "no"};
    }
    if (scheme == Scheme::NCTS) {
      const StabilityVerdict v = ncts_nonlinear_threshold(*rp.nonlinear);
      if (!v.hypotheses_ok()) return {"", "hypothesis-failed"};
      return {fmt17(*v.threshold), dt < *v.threshold ? "yes" : "no"};
    }
  }
  return {"", ""};
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(const ExperimentPlan& plan,
                                                  std::ostream& log) {
  if (plan.schemes.empty()) throw std::invalid_argument("no schemes requested");
  if (plan.dts.empty()) throw std::invalid_argument("no step sizes requested");
  for (double dt : plan.dts) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  }

  std::filesystem::create_directories(plan.out_dir);
  std::vector<std::filesystem::path> written;
  const auto cleanup = [&]() {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
  };

  try {
    std::string summary = "scheme,dt,final_msq,fitted_rate,fit_residual,threshold,certified\n";
    const JumpDiffusionProblem& problem = plan.problem.problem;
    EstimateOptions options;
    options.n_threads = plan.n_threads;

    for (Scheme scheme : plan.schemes) {
      std::vector<MomentSeries> runs;
      runs.reserve(plan.dts.size());
      for (double dt : plan.dts) {
        const long n_steps = steps_for(problem.horizon(), dt);
        MomentSeries series = estimate_second_moments(
            problem, scheme, dt, n_steps, plan.n_paths, plan.master_seed, options);

        const std::filesystem::path csv =
            plan.out_dir / ("moments_" + std::string(scheme_name(scheme)) +
                            "_dt" + fmt_shortest(dt) + ".csv");
        write_moments_csv(csv, series);
        written.push_back(csv);
        log << "wrote " << csv.string() << "\n";

        std::string rate_cell, residual_cell;
        try {
          const DecayFit fit = fit_decay_rate(series);
          rate_cell = fmt17(fit.rate);
          residual_cell = fmt17(fit.residual);
        } catch (const InsufficientData&) {
          // Leave the fit cells empty: overflow or too few usable points.
        }
        const auto [threshold_cell, certified_cell] =
            stability_cells(plan.problem, scheme, dt);
        summary += std::string(scheme_name(scheme)) + "," + fmt_shortest(dt) +
                   "," + fmt17(series.points.back().msq) + "," + rate_cell +
                   "," + residual_cell + "," + threshold_cell + "," +
                   certified_cell + "\n";
        runs.push_back(std::move(series));
      }

      std::vector<std::pair<std::string, const MomentSeries*>> labeled;
      labeled.reserve(runs.size());
      for (const MomentSeries& s : runs) {
        labeled.emplace_back("dt=" + fmt_shortest(s.dt), &s);
      }
      const std::filesystem::path svg_path =
          plan.out_dir / (std::string(scheme_name(scheme)) + ".svg");
      const std::string svg = render_moments_svg(
          plan.problem.name + ": " + std::string(scheme_name(scheme)), labeled);
      std::ofstream out(svg_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write file: " + svg_path.string());
      out << svg;
      if (!out) throw std::runtime_error("write failed: " + svg_path.string());
      out.close();
      written.push_back(svg_path);
      log << "wrote " << svg_path.string() << "\n";
    }

    const std::filesystem::path summary_path = plan.out_dir / "summary.csv";
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + summary_path.string());
    out << summary;
    if (!out) throw std::runtime_error("write failed: " + summary_path.string());
    out.close();
    written.push_back(summary_path);
    log << "wrote " << summary_path.string() << "\n";
  } catch (...) {
    cleanup();
    throw;
  }
  return written;
}

}  // namespace jumpsde::tools
