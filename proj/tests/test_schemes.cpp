#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "jumpsde/errors.hpp"
#include "jumpsde/noise.hpp"
#include "jumpsde/problem.hpp"
#include "jumpsde/schemes.hpp"

using namespace jumpsde;

namespace {

Vec scalar(double v) { return Vec::Constant(1, v); }

Increment make_inc(double dt, double dw, long dn) {
  Increment inc;
  inc.dt = dt;
  inc.dW = scalar(dw);
  inc.dN = dn;
  return inc;
}

// f(x) = -x, no noise: the tamed map contracts 1 -> 10/11 -> 109/132.
JumpDiffusionProblem decaying_scalar(double x0, double horizon) {
  return JumpDiffusionProblem::with_whole_drift(
      1, 1, [](const Vec& x, Vec& o) { o = -x; },
      [](const Vec&, Mat& o) { o.setZero(); },
      [](const Vec&, Vec& o) { o.setZero(); }, 0.0, scalar(x0), horizon);
}

JumpDiffusionProblem cubic_scalar(double x0, double horizon) {
  return JumpDiffusionProblem::with_whole_drift(
      1, 1, [](const Vec& x, Vec& o) { o = -x.array().cube().matrix(); },
      [](const Vec&, Mat& o) { o.setZero(); },
      [](const Vec&, Vec& o) { o.setZero(); }, 0.0, scalar(x0), horizon);
}

}  // namespace

TEST_SUITE_BEGIN("schemes");

TEST_CASE("scheme names round-trip through the parser") {
  for (Scheme s : {Scheme::EM, Scheme::NCTS, Scheme::STS, Scheme::BE, Scheme::SSBE}) {
    CHECK(parse_scheme(scheme_name(s)) == s);
  }
  CHECK(!parse_scheme("euler"));
  CHECK(!parse_scheme("NCTS"));
  CHECK(!parse_scheme(""));
}

TEST_CASE("explicit Euler applies drift, diffusion, and jump literally") {
  const auto p = linear_problem({-1.0, 2.0, -0.9, 9.0}, 1.0, 1.0);

  // 1 + (-1)(0.005) + 2(0.02) + (-0.9)(1), in the implementation's order.
  const Vec y = step_em(p, scalar(1.0), make_inc(0.005, 0.02, 1));
  CHECK(y[0] == 0.1349999999999999);

  SUBCASE("zero coefficients leave the state untouched") {
    const auto idle = JumpDiffusionProblem::with_whole_drift(
        1, 1, [](const Vec&, Vec& o) { o.setZero(); },
        [](const Vec&, Mat& o) { o.setZero(); },
        [](const Vec&, Vec& o) { o.setZero(); }, 3.0, scalar(2.5), 1.0);
    const Vec z = step_em(idle, scalar(2.5), make_inc(0.1, 1.7, 4));
    CHECK(z[0] == 2.5);
  }

  SUBCASE("scalar decay without noise") {
    const auto d = decaying_scalar(1.0, 1.0);
    const Vec z = step_em(d, scalar(1.0), make_inc(0.1, 0.0, 0));
    CHECK(z[0] == doctest::Approx(0.9).epsilon(1e-15));
  }
}

TEST_CASE("tamed scheme divides the drift increment by 1 + dt|f|") {
  const auto p = decaying_scalar(1.0, 1.0);
  const Increment inc = make_inc(0.1, 0.0, 0);

  const Vec x1 = step_ncts(p, scalar(1.0), inc);
  const Vec x2 = step_ncts(p, x1, inc);
  CHECK(x1[0] == 0.90909090909090906);  // 1 - 0.1/1.1
  CHECK(x2[0] == 0.82575757575757569);  // 10/11 - (1/11)/(12/11)

  SUBCASE("zero drift reduces the tamed map to explicit Euler exactly") {
    const auto flat = JumpDiffusionProblem::with_whole_drift(
        1, 1, [](const Vec&, Vec& o) { o.setZero(); },
        [](const Vec& x, Mat& o) { o = 2.0 * x; },
        [](const Vec& x, Vec& o) { o = -0.9 * x; }, 9.0, scalar(1.0), 1.0);
    const Increment j = make_inc(0.01, 0.3, 2);
    CHECK(step_ncts(flat, scalar(1.0), j)[0] == step_em(flat, scalar(1.0), j)[0]);
  }

  SUBCASE("a huge drift still moves the state less than one unit") {
    const auto steep = JumpDiffusionProblem::with_whole_drift(
        1, 1, [](const Vec&, Vec& o) { o = Vec::Constant(1, 1e6); },
        [](const Vec&, Mat& o) { o.setZero(); },
        [](const Vec&, Vec& o) { o.setZero(); }, 0.0, scalar(0.0), 2.0);
    const Vec z = step_ncts(steep, scalar(0.0), make_inc(1.0, 0.0, 0));
    CHECK(z[0] == doctest::Approx(1e6 / (1.0 + 1e6)).epsilon(1e-15));
    CHECK(z[0] < 1.0);
  }
}

TEST_CASE("taming bound: |tamed drift| <= min(1, dt|f|) for random states") {
  const auto p = cubic_scalar(1.0, 1.0);
  NoiseStream rng(2024, 0);
  for (int i = 0; i < 500; ++i) {
    const double x = 40.0 * (rng.next_uniform() - 0.5);
    const double dt = 0.5 * rng.next_uniform() + 1e-6;
    const Vec out = step_ncts(p, scalar(x), make_inc(dt, 0.0, 0));
    const double moved = std::abs(out[0] - x);
    const double fnorm = std::abs(x * x * x);
    // The 1e-15*(1+|x|) term covers representation noise in x + tamed when
    // the tamed increment is many orders below x itself.
    CHECK(moved <= std::min(1.0, dt * fnorm) * (1.0 + 1e-14) + 1e-15 * (1.0 + std::abs(x)));
  }
}

TEST_CASE("tamed and explicit Euler differ by at most dt^2 |f|^2") {
  const auto p = cubic_scalar(1.0, 1.0);
  NoiseStream rng(2025, 0);
  for (int i = 0; i < 500; ++i) {
    const double x = 6.0 * (rng.next_uniform() - 0.5);
    const double dt = 0.25 * rng.next_uniform() + 1e-6;
    const Increment inc = make_inc(dt, 0.0, 0);
    const double diff = std::abs(step_ncts(p, scalar(x), inc)[0] -
                                 step_em(p, scalar(x), inc)[0]);
    const double fnorm = std::abs(x * x * x);
    CHECK(diff <= dt * dt * fnorm * fnorm * (1.0 + 1e-13) + 1e-15 * (1.0 + std::abs(x)));
  }
}

TEST_CASE("semi-tamed scheme tames only the superlinear half") {
  const auto p = JumpDiffusionProblem::with_split_drift(
      1, 1, [](const Vec& x, Vec& o) { o = -0.12 * x; },
      [](const Vec& x, Vec& o) { o = -x.array().cube().matrix(); },
      [](const Vec&, Mat& o) { o.setZero(); },
      [](const Vec&, Vec& o) { o.setZero(); }, 0.0, scalar(1.0), 1.0);

  // 1 - 0.012 - 0.1/1.1
  const Vec y = step_sts(p, scalar(1.0), make_inc(0.1, 0.0, 0));
  CHECK(y[0] == 0.89709090909090905);

  SUBCASE("with v = 0 the map is explicit Euler with drift u") {
    const auto split = JumpDiffusionProblem::with_split_drift(
        1, 1, [](const Vec& x, Vec& o) { o = -0.12 * x; },
        [](const Vec&, Vec& o) { o.setZero(); },
        [](const Vec& x, Mat& o) { o = 0.3 * x; },
        [](const Vec& x, Vec& o) { o = -0.2 * x; }, 2.0, scalar(1.0), 1.0);
    const auto whole = JumpDiffusionProblem::with_whole_drift(
        1, 1, [](const Vec& x, Vec& o) { o = -0.12 * x; },
        [](const Vec& x, Mat& o) { o = 0.3 * x; },
        [](const Vec& x, Vec& o) { o = -0.2 * x; }, 2.0, scalar(1.0), 1.0);
    const Increment inc = make_inc(0.05, -0.4, 1);
    CHECK(step_sts(split, scalar(0.8), inc)[0] == step_em(whole, scalar(0.8), inc)[0]);
  }

  SUBCASE("whole-drift problems are rejected") {
    const auto whole = decaying_scalar(1.0, 1.0);
    CHECK_THROWS_AS((void)step_sts(whole, scalar(1.0), make_inc(0.1, 0.0, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("semi-tamed compensated and uncompensated forms agree") {
  const auto p = JumpDiffusionProblem::with_split_drift(
      1, 1, [](const Vec& x, Vec& o) { o = -0.12 * x; },
      [](const Vec& x, Vec& o) { o = -x.array().cube().matrix(); },
      [](const Vec&, Mat& o) { o.setZero(); },
      [](const Vec& x, Vec& o) { o = -0.1 * x; }, 1.0, scalar(1.0), 1.0);
  const double lambda = 1.0;

  // Moving lambda*h(y)*dt from the jump term into the Lipschitz drift leaves
  // the update algebraically unchanged:
  //   y + u dt + tamed v + h dN  ==  y + (u + lambda h) dt + tamed v + h (dN - lambda dt).
  const auto compensated = [&](double y, double dt, long dn) {
    const double u = -0.12 * y;
    const double v = -y * y * y;
    const double h = -0.1 * y;
    return y + (u + lambda * h) * dt + dt * v / (1.0 + dt * std::abs(v)) +
           h * compensate(dn, lambda, dt);
  };

  const Vec direct = step_sts(p, scalar(1.0), make_inc(0.1, 0.0, 2));
  CHECK(direct[0] == 0.69709090909090898);
  CHECK(compensated(1.0, 0.1, 2) == 0.69709090909090898);

  // "Agreement to a few ulp" is measured against the magnitude of the summed
  // terms: near-cancelling results cannot be accurate relative to themselves.
  NoiseStream rng(99, 3);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 400; ++i) {
    const double y = 4.0 * (rng.next_uniform() - 0.5);
    const double dt = 0.3 * rng.next_uniform() + 1e-4;
    const long dn = rng.next_poisson(0.7);
    const double a = step_sts(p, scalar(y), make_inc(dt, 0.0, dn))[0];
    const double b = compensated(y, dt, dn);
    const double v = -y * y * y;
    const double scale = std::abs(y) + 0.22 * std::abs(y) * dt +
                         dt * std::abs(v) / (1.0 + dt * std::abs(v)) +
                         0.1 * std::abs(y) * (static_cast<double>(dn) + dt);
    CHECK(std::abs(a - b) <= 4.0 * eps * scale);
  }
}

TEST_CASE("backward Euler returns the root of the implicit equation") {
  SUBCASE("linear drift reduces to division by 1 - a dt") {
    const auto p = decaying_scalar(1.0, 1.0);
    const Vec z = step_be(p, scalar(1.0), make_inc(0.1, 0.0, 0));
    CHECK(z[0] == doctest::Approx(1.0 / 1.1).epsilon(1e-14));
  }

  SUBCASE("cubic drift: z + z^3 = 1") {
    const auto p = cubic_scalar(1.0, 2.0);
    const Vec z = step_be(p, scalar(1.0), make_inc(1.0, 0.0, 0));
    CHECK(z[0] == doctest::Approx(0.68232780382801927).epsilon(1e-13));
    CHECK(std::abs(z[0] + z[0] * z[0] * z[0] - 1.0) <= 1e-12);
  }

  SUBCASE("zero drift makes the step explicit") {
    const auto flat = JumpDiffusionProblem::with_whole_drift(
        1, 1, [](const Vec&, Vec& o) { o.setZero(); },
        [](const Vec& x, Mat& o) { o = 1.5 * x; },
        [](const Vec& x, Vec& o) { o = -0.4 * x; }, 3.0, scalar(1.0), 1.0);
    const Increment inc = make_inc(0.2, 0.7, 1);
    CHECK(step_be(flat, scalar(1.2), inc)[0] ==
          doctest::Approx(step_em(flat, scalar(1.2), inc)[0]).epsilon(1e-14));
  }

  SUBCASE("closed form on the linear jump problem, random increments") {
    const LinearTestParams lp{-1.0, 2.0, -0.9, 9.0};
    const auto p = linear_problem(lp, 1.0, 1.0);
    NoiseStream rng(7, 11);
    for (int i = 0; i < 300; ++i) {
      const double x = 2.0 * (rng.next_uniform() - 0.5);
      const double dt = 0.2 * rng.next_uniform() + 1e-4;
      const double dw = std::sqrt(dt) * rng.next_normal();
      const long dn = rng.next_poisson(lp.lambda * dt);
      const Vec z = step_be(p, scalar(x), make_inc(dt, dw, dn));
      const double closed =
          x * (1.0 + lp.b * dw + lp.c * static_cast<double>(dn)) / (1.0 - lp.a * dt);
      CHECK(std::abs(z[0] - closed) <= 1e-12);
    }
  }
}

TEST_CASE("split-step backward Euler evaluates noise at the drift-implicit point") {
  SUBCASE("cubic predictor then explicit diffusion") {
    const auto p = JumpDiffusionProblem::with_whole_drift(
        1, 1, [](const Vec& x, Vec& o) { o = -x.array().cube().matrix(); },
        [](const Vec& x, Mat& o) { o = x; },
        [](const Vec&, Vec& o) { o.setZero(); }, 0.0, scalar(1.0), 2.0);
    // y* solves y + y^3 = 1; the result is y* (1 + dW).
    const Vec out = step_ssbe(p, scalar(1.0), make_inc(1.0, 0.1, 0));
    CHECK(out[0] == doctest::Approx(0.75056058421082117).epsilon(1e-13));
  }

  SUBCASE("without noise terms it coincides with backward Euler") {
    const auto p = cubic_scalar(1.0, 2.0);
    const Increment inc = make_inc(0.5, 0.0, 0);
    CHECK(step_ssbe(p, scalar(1.0), inc)[0] ==
          doctest::Approx(step_be(p, scalar(1.0), inc)[0]).epsilon(1e-13));
  }

  SUBCASE("closed form on the linear jump problem, random increments") {
    const LinearTestParams lp{-1.0, 2.0, -0.9, 9.0};
    const auto p = linear_problem(lp, 1.0, 1.0);
    NoiseStream rng(8, 12);
    for (int i = 0; i < 300; ++i) {
      const double x = 2.0 * (rng.next_uniform() - 0.5);
      const double dt = 0.2 * rng.next_uniform() + 1e-4;
      const double dw = std::sqrt(dt) * rng.next_normal();
      const long dn = rng.next_poisson(lp.lambda * dt);
      const Vec z = step_ssbe(p, scalar(x), make_inc(dt, dw, dn));
      const double ystar = x / (1.0 - lp.a * dt);
      const double closed = ystar * (1.0 + lp.b * dw + lp.c * static_cast<double>(dn));
      CHECK(std::abs(z[0] - closed) <= 1e-12);
    }
  }
}

TEST_CASE("implicit solver reports non-convergence instead of a bogus root") {
  // z = 1 + z^2 has no real root, so the budgeted solve must fail loudly.
  const auto p = JumpDiffusionProblem::with_whole_drift(
      1, 1, [](const Vec& x, Vec& o) { o = x.array().square().matrix(); },
      [](const Vec&, Mat& o) { o.setZero(); },
      [](const Vec&, Vec& o) { o.setZero(); }, 0.0, scalar(1.0), 2.0);
  CHECK_THROWS_AS((void)step_be(p, scalar(1.0), make_inc(1.0, 0.0, 0)),
                  NonConvergence);
  CHECK_THROWS_AS((void)step_ssbe(p, scalar(1.0), make_inc(1.0, 0.0, 0)),
                  NonConvergence);
}

TEST_CASE("step preconditions") {
  const auto p = linear_problem({-1.0, 2.0, -0.9, 9.0}, 1.0, 1.0);
  CHECK_THROWS_AS((void)step_em(p, scalar(1.0), make_inc(0.0, 0.0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)step_em(p, scalar(1.0), make_inc(-0.1, 0.0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)step_em(p, scalar(1.0), make_inc(0.1, 0.0, -1)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)step_em(p, Vec::Zero(2), make_inc(0.1, 0.0, 0)),
                  std::invalid_argument);
  Increment wide = make_inc(0.1, 0.0, 0);
  wide.dW = Vec::Zero(3);
  CHECK_THROWS_AS((void)step_em(p, scalar(1.0), wide), std::invalid_argument);
}

TEST_CASE("scheme dispatch matches the named step functions bit for bit") {
  const auto p = linear_problem({-1.0, 2.0, -0.9, 9.0}, 1.0, 1.0);
  const Increment inc = make_inc(0.02, 0.05, 1);
  const Vec x = scalar(0.9);
  CHECK(step_scheme(p, Scheme::EM, x, inc)[0] == step_em(p, x, inc)[0]);
  CHECK(step_scheme(p, Scheme::NCTS, x, inc)[0] == step_ncts(p, x, inc)[0]);
  CHECK(step_scheme(p, Scheme::STS, x, inc)[0] == step_sts(p, x, inc)[0]);
  CHECK(step_scheme(p, Scheme::BE, x, inc)[0] == step_be(p, x, inc)[0]);
  CHECK(step_scheme(p, Scheme::SSBE, x, inc)[0] == step_ssbe(p, x, inc)[0]);
}

TEST_CASE("path simulation iterates the one-step map") {
  SUBCASE("tamed decay without noise hits the hand-iterated values") {
    const auto p = decaying_scalar(1.0, 1.0);
    NoiseStream s = derive_path_stream(42, 0);
    const Trajectory t = simulate_path(p, Scheme::NCTS, 0.1, 2, s);
    REQUIRE(t.states.size() == 3);
    REQUIRE(t.times.size() == 3);
    CHECK(!t.overflowed);
    CHECK(t.states[0][0] == 1.0);
    CHECK(t.states[1][0] == 0.90909090909090906);
    CHECK(t.states[2][0] == 0.82575757575757569);
    CHECK(t.times[0] == 0.0);
    CHECK(t.times[2] == doctest::Approx(0.2).epsilon(1e-15));
  }

  SUBCASE("zero steps returns just the initial state") {
    const auto p = decaying_scalar(0.7, 1.0);
    NoiseStream s = derive_path_stream(1, 1);
    const Trajectory t = simulate_path(p, Scheme::EM, 0.25, 0, s);
    REQUIRE(t.states.size() == 1);
    CHECK(t.states[0][0] == 0.7);
    CHECK(t.times[0] == 0.0);
    CHECK(!t.overflowed);
  }

  SUBCASE("replaying the same stream reproduces every state bit for bit") {
    const auto p = linear_problem({-1.0, 2.0, -0.9, 9.0}, 1.0, 1.0);
    NoiseStream s1 = derive_path_stream(42, 5);
    NoiseStream s2 = derive_path_stream(42, 5);
    const Trajectory a = simulate_path(p, Scheme::STS, 0.02, 50, s1);
    const Trajectory b = simulate_path(p, Scheme::STS, 0.02, 50, s2);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t n = 0; n < a.states.size(); ++n) {
      CHECK(a.states[n][0] == b.states[n][0]);
    }
  }

  SUBCASE("explicit Euler on a steep cubic overflows and is truncated") {
    const auto p = cubic_scalar(10.0, 10.0);
    NoiseStream s = derive_path_stream(1, 0);
    const Trajectory t = simulate_path(p, Scheme::EM, 0.1, 20, s);
    CHECK(t.overflowed);
    CHECK(t.states.size() == 7);  // six finite iterates, then the blow-up
    CHECK(t.times.size() == t.states.size());
    CHECK(state_overflowed(t.states.back()));
    for (std::size_t n = 0; n + 1 < t.states.size(); ++n) {
      CHECK(!state_overflowed(t.states[n]));
    }
  }

  SUBCASE("preconditions") {
    const auto p = decaying_scalar(1.0, 1.0);
    NoiseStream s = derive_path_stream(0, 0);
    CHECK_THROWS_AS((void)simulate_path(p, Scheme::EM, 0.0, 1, s),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_path(p, Scheme::EM, 0.1, -1, s),
                    std::invalid_argument);
    // 11 * 0.1 overruns the unit horizon.
    CHECK_THROWS_AS((void)simulate_path(p, Scheme::EM, 0.1, 11, s),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_path(p, Scheme::STS, 0.1, 5, s),
                    std::invalid_argument);
  }
}

TEST_SUITE_END();
