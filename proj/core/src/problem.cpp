#include "jumpsde/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "jumpsde/noise.hpp"

namespace jumpsde {

namespace {

// Seed of the internal probe stream; fixed so construction is deterministic.
constexpr std::uint64_t kProbeSeed = 0x9E3779B97F4A7C15ull;
constexpr int kProbePoints = 32;
constexpr double kSplitTolerance = 1e-12;

void check_vec_shape(const VecFn& fn, const Vec& x, int dim, const char* name) {
  Vec out(dim);
  fn(x, out);
  if (out.size() != dim) {
    throw std::invalid_argument(std::string(name) + " output dimension mismatch");
  }
}

}  // namespace

void JumpDiffusionProblem::validate() const {
  if (dim_ < 1) throw std::invalid_argument("dim must be >= 1");
  if (wiener_dim_ < 1) throw std::invalid_argument("wiener_dim must be >= 1");
  if (!(lambda_ >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (x0_.size() != dim_) throw std::invalid_argument("x0 must have dim entries");
  if (!g_ || !h_) throw std::invalid_argument("diffusion and jump coefficients are required");
  if (!f_ && !u_) throw std::invalid_argument("a drift (whole or split) is required");
  if (static_cast<bool>(u_) != static_cast<bool>(v_)) {
    throw std::invalid_argument("a split drift requires both u and v");
  }

  if (f_) check_vec_shape(f_, x0_, dim_, "drift");
  if (u_) check_vec_shape(u_, x0_, dim_, "drift_lipschitz");
  if (v_) check_vec_shape(v_, x0_, dim_, "drift_superlinear");
  check_vec_shape(h_, x0_, dim_, "jump");
  Mat gout(dim_, wiener_dim_);
  g_(x0_, gout);
  if (gout.rows() != dim_ || gout.cols() != wiener_dim_) {
    throw std::invalid_argument("diffusion output must be dim x wiener_dim");
  }

  if (f_ && u_) {
    // Smoke check, not a proof: the split must reproduce f on a Gaussian
    // probe grid around the origin.
    NoiseStream probe(kProbeSeed, 0);
    Vec x(dim_), fx(dim_), ux(dim_), vx(dim_);
    for (int k = 0; k < kProbePoints; ++k) {
      for (int i = 0; i < dim_; ++i) x[i] = probe.next_normal();
      f_(x, fx);
      u_(x, ux);
      v_(x, vx);
      const double gap = (fx - ux - vx).cwiseAbs().maxCoeff();
      if (!(gap <= kSplitTolerance)) {
        throw std::invalid_argument(
            "split drift inconsistent with f: |f - u - v| = " + std::to_string(gap));
      }
    }
  }
}

JumpDiffusionProblem JumpDiffusionProblem::with_whole_drift(
    int dim, int wiener_dim, VecFn f, MatFn g, VecFn h, double lambda, Vec x0,
    double horizon) {
  JumpDiffusionProblem p;
  p.dim_ = dim;
  p.wiener_dim_ = wiener_dim;
  p.f_ = std::move(f);
  p.g_ = std::move(g);
  p.h_ = std::move(h);
  p.lambda_ = lambda;
  p.x0_ = std::move(x0);
  p.horizon_ = horizon;
  p.validate();
  return p;
}

JumpDiffusionProblem JumpDiffusionProblem::with_split_drift(
    int dim, int wiener_dim, VecFn u, VecFn v, MatFn g, VecFn h, double lambda,
    Vec x0, double horizon, std::optional<VecFn> f) {
  JumpDiffusionProblem p;
  p.dim_ = dim;
  p.wiener_dim_ = wiener_dim;
  p.u_ = std::move(u);
  p.v_ = std::move(v);
  if (f) p.f_ = std::move(*f);
  p.g_ = std::move(g);
  p.h_ = std::move(h);
  p.lambda_ = lambda;
  p.x0_ = std::move(x0);
  p.horizon_ = horizon;
  p.validate();
  return p;
}

void JumpDiffusionProblem::drift(const Vec& x, Vec& out) const {
  if (f_) {
    out.resize(dim_);
    f_(x, out);
    return;
  }
  out.resize(dim_);
  u_(x, out);
  Vec vx(dim_);
  v_(x, vx);
  out += vx;
}

void JumpDiffusionProblem::drift_lipschitz(const Vec& x, Vec& out) const {
  if (!u_) throw std::invalid_argument("problem has no split drift");
  out.resize(dim_);
  u_(x, out);
}

void JumpDiffusionProblem::drift_superlinear(const Vec& x, Vec& out) const {
  if (!v_) throw std::invalid_argument("problem has no split drift");
  out.resize(dim_);
  v_(x, out);
}

void JumpDiffusionProblem::diffusion(const Vec& x, Mat& out) const {
  out.resize(dim_, wiener_dim_);
  g_(x, out);
}

void JumpDiffusionProblem::jump(const Vec& x, Vec& out) const {
  out.resize(dim_);
  h_(x, out);
}

JumpDiffusionProblem linear_problem(const LinearTestParams& p, double x0,
                                    double horizon) {
  if (!(std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c) &&
        std::isfinite(p.lambda))) {
    throw std::invalid_argument("linear parameters must be finite");
  }
  const double a = p.a;
  const double b = p.b;
  const double c = p.c;
  Vec init(1);
  init[0] = x0;
  return JumpDiffusionProblem::with_split_drift(
      1, 1,
      [a](const Vec& x, Vec& out) { out[0] = a * x[0]; },
      [](const Vec&, Vec& out) { out[0] = 0.0; },
      [b](const Vec& x, Mat& out) { out(0, 0) = b * x[0]; },
      [c](const Vec& x, Vec& out) { out[0] = c * x[0]; },
      p.lambda, init, horizon);
}

}  // namespace jumpsde
