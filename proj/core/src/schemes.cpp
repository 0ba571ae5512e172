#include "jumpsde/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stepper.hpp"

namespace jumpsde {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::EM: return "em";
    case Scheme::NCTS: return "ncts";
    case Scheme::STS: return "sts";
    case Scheme::BE: return "be";
    case Scheme::SSBE: return "ssbe";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "em") return Scheme::EM;
  if (name == "ncts") return Scheme::NCTS;
  if (name == "sts") return Scheme::STS;
  if (name == "be") return Scheme::BE;
  if (name == "ssbe") return Scheme::SSBE;
  return std::nullopt;
}

bool state_overflowed(const Vec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (!std::isfinite(v) || std::abs(v) > kOverflowLimit) return true;
  }
  return false;
}

namespace detail {

Stepper::Stepper(const JumpDiffusionProblem& problem, Scheme scheme)
    : problem_(&problem), scheme_(scheme) {
  if (scheme_ == Scheme::STS && !problem.has_split()) {
    throw std::invalid_argument("semi-tamed scheme requires a split-form drift");
  }
}

void Stepper::add_noise(const Vec& at, const Increment& inc, Vec& out) {
  problem_->diffusion(at, g_);
  problem_->jump(at, h_);
  out.noalias() += g_ * inc.dW;
  out += static_cast<double>(inc.dN) * h_;
}

double Stepper::residual_norm(const Vec& z, double dt, const Vec& base) {
  problem_->drift(z, ftmp_);
  rtmp_ = z;
  rtmp_.noalias() -= dt * ftmp_;
  rtmp_ -= base;
  return rtmp_.norm();
}

void Stepper::solve_drift_implicit(const Vec& base, double dt, const Vec& guess,
                                   Vec& z) {
  const int d = problem_->dim();
  const double scale = std::max(1.0, base.norm());
  const double target = 1e-13 * scale;
  const double accept = 1e-12 * scale;
  const double fd_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  z = guess;
  double rn = residual_norm(z, dt, base);
  rcur_ = rtmp_;
  fcur_ = ftmp_;

  for (int it = 0; it < 50 && rn > target; ++it) {
    jac_.resize(d, d);
    for (int j = 0; j < d; ++j) {
      const double h = fd_eps * std::max(1.0, std::abs(z[j]));
      zt_ = z;
      zt_[j] += h;
      problem_->drift(zt_, ftmp_);
      jac_.col(j) = (-dt / h) * (ftmp_ - fcur_);
      jac_(j, j) += 1.0;
    }
    dz_ = jac_.fullPivLu().solve(-rcur_);
    if (!dz_.allFinite()) break;

    bool improved = false;
    double alpha = 1.0;
    for (int halving = 0; halving < 10; ++halving, alpha *= 0.5) {
      zt_ = z + alpha * dz_;
      const double rt = residual_norm(zt_, dt, base);
      if (rt < rn) {
        z.swap(zt_);
        rn = rt;
        rcur_ = rtmp_;
        fcur_ = ftmp_;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  if (rn <= accept) return;

  // Fixed-point fallback: z <- base + dt*f(z), keeping the best iterate.
  Vec best = z;
  double best_rn = rn;
  for (int sweep = 0; sweep < 200; ++sweep) {
    problem_->drift(z, ftmp_);
    zt_ = base;
    zt_.noalias() += dt * ftmp_;
    z.swap(zt_);
    const double rt = residual_norm(z, dt, base);
    if (rt < best_rn) {
      best_rn = rt;
      best = z;
      if (best_rn <= target) break;
    }
  }
  if (best_rn <= accept) {
    z = best;
    return;
  }
  throw NonConvergence("implicit drift solve stalled at residual " +
                       std::to_string(best_rn));
}

void Stepper::step(const Vec& x, const Increment& inc, Vec& out) {
  if (!(inc.dt > 0.0)) throw std::invalid_argument("increment dt must be > 0");
  if (inc.dN < 0) throw std::invalid_argument("increment dN must be >= 0");
  if (x.size() != problem_->dim() || inc.dW.size() != problem_->wiener_dim()) {
    throw std::invalid_argument("state or increment dimension mismatch");
  }
  const double dt = inc.dt;

  switch (scheme_) {
    case Scheme::EM: {
      problem_->drift(x, f_);
      out = x;
      out.noalias() += dt * f_;
      add_noise(x, inc, out);
      return;
    }
    case Scheme::NCTS: {
      problem_->drift(x, f_);
      out = x;
      out.noalias() += (dt / (1.0 + dt * f_.norm())) * f_;
      add_noise(x, inc, out);
      return;
    }
    case Scheme::STS: {
      problem_->drift_lipschitz(x, u_);
      problem_->drift_superlinear(x, v_);
      out = x;
      out.noalias() += dt * u_;
      out.noalias() += (dt / (1.0 + dt * v_.norm())) * v_;
      add_noise(x, inc, out);
      return;
    }
    case Scheme::BE: {
      base_ = x;
      add_noise(x, inc, base_);
      solve_drift_implicit(base_, dt, base_, out);
      return;
    }
    case Scheme::SSBE: {
      solve_drift_implicit(x, dt, x, ystar_);
      out = ystar_;
      add_noise(ystar_, inc, out);
      return;
    }
  }
  throw std::logic_error("unhandled scheme");
}

}  // namespace detail

namespace {

Vec run_one_step(const JumpDiffusionProblem& problem, Scheme scheme,
                 const Vec& x, const Increment& inc) {
  detail::Stepper stepper(problem, scheme);
  Vec out(problem.dim());
  stepper.step(x, inc, out);
  return out;
}

}  // namespace

Vec step_em(const JumpDiffusionProblem& p, const Vec& x, const Increment& inc) {
  return run_one_step(p, Scheme::EM, x, inc);
}
Vec step_ncts(const JumpDiffusionProblem& p, const Vec& x, const Increment& inc) {
  return run_one_step(p, Scheme::NCTS, x, inc);
}
Vec step_sts(const JumpDiffusionProblem& p, const Vec& y, const Increment& inc) {
  return run_one_step(p, Scheme::STS, y, inc);
}
Vec step_be(const JumpDiffusionProblem& p, const Vec& x, const Increment& inc) {
  return run_one_step(p, Scheme::BE, x, inc);
}
Vec step_ssbe(const JumpDiffusionProblem& p, const Vec& x, const Increment& inc) {
  return run_one_step(p, Scheme::SSBE, x, inc);
}
Vec step_scheme(const JumpDiffusionProblem& p, Scheme scheme, const Vec& x,
                const Increment& inc) {
  return run_one_step(p, scheme, x, inc);
}

Trajectory simulate_path(const JumpDiffusionProblem& problem, Scheme scheme,
                         double dt, long n_steps, NoiseStream& stream) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (n_steps < 0) throw std::invalid_argument("n_steps must be >= 0");
  if (static_cast<double>(n_steps) * dt > problem.horizon() + 1e-9) {
    throw std::invalid_argument("n_steps*dt exceeds the problem horizon");
  }

  detail::Stepper stepper(problem, scheme);
  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);

  Vec x = problem.x0();
  Vec xnext(problem.dim());
  Increment inc;
  for (long n = 0; n <= n_steps; ++n) {
    traj.times.push_back(static_cast<double>(n) * dt);
    traj.states.push_back(x);
    if (state_overflowed(x)) {
      traj.overflowed = true;
      break;
    }
    if (n == n_steps) break;
    detail::fill_increment(stream, problem, dt, inc);
    stepper.step(x, inc, xnext);
    x.swap(xnext);
  }
  return traj;
}

}  // namespace jumpsde
