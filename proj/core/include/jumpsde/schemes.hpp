#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "jumpsde/noise.hpp"
#include "jumpsde/problem.hpp"
#include "jumpsde/types.hpp"

namespace jumpsde {

/// STS requires a split-form problem; the others accept whole drift.
enum class Scheme { EM, NCTS, STS, BE, SSBE };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Increments driving one step: dW holds m Brownian components, dN the jump
/// count. Invariants: dt > 0, dN >= 0.
struct Increment {
  Vec dW;
  long dN = 0;
  double dt = 0.0;
};

/// States visited by one simulated path. states[0] == x0 and
/// times[n] == n*dt. If `overflowed` is set the path was truncated: the last
/// stored state is the first offending one and no further steps were taken.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  bool overflowed = false;
};

/// Overflow policy shared by the path simulator and the moment estimator:
/// a state has overflowed when any component is non-finite or exceeds 1e150
/// in magnitude. Far beyond any stable regime, so explicit-Euler blow-ups are
/// recorded rather than crashed on.
inline constexpr double kOverflowLimit = 1e150;
bool state_overflowed(const Vec& x);

// One-step maps. All are pure: same inputs, same outputs. Preconditions:
// dimensions agree with the problem and inc.dt > 0 (std::invalid_argument).

/// x + f(x) dt + g(x) dW + h(x) dN. Expected to blow up on superlinear
/// drift; overflow is the caller's to detect (see state_overflowed).
Vec step_em(const JumpDiffusionProblem& problem, const Vec& x, const Increment& inc);

/// x + dt f(x)/(1 + dt|f(x)|) + g(x) dW + h(x) dN. The tamed drift increment
/// has norm <= min(1, dt|f(x)|), which rules out drift overflow.
Vec step_ncts(const JumpDiffusionProblem& problem, const Vec& x, const Increment& inc);

/// y + u(y) dt + dt v(y)/(1 + dt|v(y)|) + g(y) dW + h(y) dN. Requires the
/// split-drift form.
Vec step_sts(const JumpDiffusionProblem& problem, const Vec& y, const Increment& inc);

/// Drift-implicit step: the root z of z = x + dt f(z) + g(x) dW + h(x) dN,
/// solved to residual <= 1e-12 (noise terms explicit). Throws NonConvergence
/// when the damped Newton + fixed-point fallback budget is exhausted.
Vec step_be(const JumpDiffusionProblem& problem, const Vec& x, const Increment& inc);

/// Split-step variant: solve y* = x + dt f(y*), then add g(y*) dW + h(y*) dN.
Vec step_ssbe(const JumpDiffusionProblem& problem, const Vec& x, const Increment& inc);

Vec step_scheme(const JumpDiffusionProblem& problem, Scheme scheme, const Vec& x,
                const Increment& inc);

/// Iterates one path: states[n+1] = step(states[n], increment_n), consuming
/// per step first the m Brownian components, then the Poisson count.
/// Preconditions: dt > 0, n_steps >= 0, n_steps*dt <= horizon + 1e-9.
/// Propagates NonConvergence; on overflow the trajectory is truncated and
/// flagged instead of aborting.
Trajectory simulate_path(const JumpDiffusionProblem& problem, Scheme scheme,
                         double dt, long n_steps, NoiseStream& stream);

}  // namespace jumpsde
