#pragma once

#include "jumpsde/errors.hpp"
#include "jumpsde/noise.hpp"
#include "jumpsde/problem.hpp"
#include "jumpsde/schemes.hpp"

namespace jumpsde::detail {

/// One-step engine with reusable work buffers; one instance per thread.
/// The public step_* functions and the Monte Carlo harness both route
/// through this class, so "states[n+1] = step(states[n])" holds bit-exactly.
class Stepper {
 public:
  Stepper(const JumpDiffusionProblem& problem, Scheme scheme);

  void step(const Vec& x, const Increment& inc, Vec& out);

 private:
  void add_noise(const Vec& at, const Increment& inc, Vec& out);
  /// Root of z = base + dt*f(z) by damped Newton with a forward-difference
  /// Jacobian, fixed-point fallback; throws NonConvergence past the budget.
  void solve_drift_implicit(const Vec& base, double dt, const Vec& guess, Vec& z);
  double residual_norm(const Vec& z, double dt, const Vec& base);

  const JumpDiffusionProblem* problem_;
  Scheme scheme_;
  Vec f_, u_, v_, h_, base_, zt_, dz_, ftmp_, rcur_, rtmp_, fcur_, ystar_;
  Mat g_, jac_;
};

/// Fills dW (m components) then dN, in that fixed order, so every scheme
/// sees identical noise on a shared stream.
inline void fill_increment(NoiseStream& stream, const JumpDiffusionProblem& p,
                           double dt, Increment& inc) {
  inc.dt = dt;
  if (inc.dW.size() != p.wiener_dim()) inc.dW.resize(p.wiener_dim());
  brownian_increment(stream, dt, inc.dW);
  inc.dN = poisson_increment(stream, p.lambda(), dt);
}

}  // namespace jumpsde::detail
