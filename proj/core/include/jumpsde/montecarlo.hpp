#pragma once

#include <cstdint>
#include <vector>

#include "jumpsde/problem.hpp"
#include "jumpsde/schemes.hpp"

namespace jumpsde {

/// Second-moment estimate at one step. `std_error` is the sample standard
/// deviation of |Y_n|^2 over surviving paths divided by sqrt(survivors);
/// `overflowed` counts the paths excluded at this step (overflow is
/// absorbing, so the count is nondecreasing in n).
struct MomentPoint {
  long step = 0;
  double time = 0.0;
  double msq = 0.0;
  double std_error = 0.0;
  long overflowed = 0;
};

struct MomentSeries {
  Scheme scheme = Scheme::EM;
  double dt = 0.0;
  long n_paths = 0;
  std::uint64_t master_seed = 0;
  std::vector<MomentPoint> points;  // one per step, ordered, size n_steps+1
  long overflow_count = 0;          // paths lost by the final step
};

struct EstimateOptions {
  int n_threads = 0;  // 0 = hardware concurrency
};

/// Estimates E|Y_n|^2 over n_paths independent paths seeded by
/// derive_path_stream(master_seed, i). The result is bit-identical for any
/// thread count: paths are reduced block-by-block in index order with
/// compensated summation. Overflowed paths are excluded from the estimate
/// with the exclusion recorded, never silently. Throws AllPathsOverflowed if
/// some step has no surviving path, and propagates NonConvergence from
/// implicit schemes. Preconditions: n_paths >= 2, dt > 0, n_steps >= 0,
/// n_steps*dt <= horizon + 1e-9.
MomentSeries estimate_second_moments(const JumpDiffusionProblem& problem,
                                     Scheme scheme, double dt, long n_steps,
                                     long n_paths, std::uint64_t master_seed,
                                     const EstimateOptions& options = {});

/// Closed step range [first, last] of a decay fit.
struct FitWindow {
  long first = 0;
  long last = 0;
};

/// Least-squares line through (t_n, ln msq_n); rate = -slope, so a positive
/// rate means decay as in e^(-rate * t). `residual` is the RMS of the log
/// residuals over the fitted points.
struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  FitWindow window;
};

/// Default window: drops the first 10% of steps (transient) and every step
/// from the first overflow exclusion onward. Only points with finite
/// msq > 0 enter the fit; fewer than three such points raises
/// InsufficientData.
DecayFit fit_decay_rate(const MomentSeries& series);
DecayFit fit_decay_rate(const MomentSeries& series, FitWindow window);

}  // namespace jumpsde
