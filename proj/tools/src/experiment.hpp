#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "jumpsde/schemes.hpp"
#include "problems.hpp"

namespace jumpsde::tools {

struct ExperimentPlan {
  ResolvedProblem problem;
  std::vector<Scheme> schemes;
  std::vector<double> dts;  // all positive
  long n_paths = 2;
  std::uint64_t master_seed = 42;
  std::filesystem::path out_dir;
  int n_threads = 0;  // affects speed only, never output bytes
};

/// Runs every (scheme, dt) pair and writes, under out_dir:
///   moments_<scheme>_dt<dt>.csv   one per pair
///   <scheme>.svg                  log-scale moment plot, one per scheme
///   summary.csv                   scheme,dt,final_msq,fitted_rate,
///                                 fit_residual,threshold,certified
/// Progress lines go to `log`. On any failure every file already written is
/// removed before the error propagates. Returns the files written.
std::vector<std::filesystem::path> run_experiment(const ExperimentPlan& plan,
                                                  std::ostream& log);

}  // namespace jumpsde::tools
