#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jumpsde/problem.hpp"

namespace jumpsde {

/// Structural constants of the split nonlinear model:
///   <x-y, u(x)-u(y)> <= -rho |x-y|^2,      |u(x)-u(y)| <= K |x-y|,
///   <x-y, v(x)-v(y)> <= -beta |x-y|^(a+1), |v(x)|      <= beta_bar |x|^a,
///   |g(x)-g(y)| <= theta |x-y|,            |h(x)-h(y)| <= C |x-y|,
///   <x-y, h(x)-h(y)> <= -mu |x-y|^2.
/// a_exp is the growth exponent a > 1. All other constants are nonnegative
/// except mu, which may take any sign.
struct NonlinearConstants {
  double rho;
  double K;
  double beta;
  double beta_bar;
  double a_exp;
  double theta;
  double C;
  double mu;
  double lambda;
};

/// Constants of the exact-solution stability test:
///   <x-y, f(x)-f(y)> <= mu_f |x-y|^2, |g(x)-g(y)|^2 <= sigma |x-y|^2,
///   |h(x)-h(y)|^2 <= gamma_h |x-y|^2.
struct ExactSolutionConstants {
  double mu_f;
  double sigma;
  double gamma_h;
  double lambda;
};

struct HypothesisCheck {
  std::string name;
  double value;
  bool passed;
};

/// Informational step-size bound; +infinity when its denominator vanishes.
struct NamedBound {
  std::string name;
  double value;
};

/// Outcome of one closed-form stability analysis. The hypothesis ledger is
/// always filled so callers can report why a configuration was rejected;
/// `threshold` is present only when every hypothesis holds (and may be
/// +infinity). For the per-step-size certificate, `dt` carries the queried
/// step and `certified` says whether some case covers it; elsewhere
/// `certified` mirrors threshold presence.
struct StabilityVerdict {
  double indicator = 0.0;
  std::string indicator_name;
  std::vector<HypothesisCheck> hypotheses;
  std::vector<NamedBound> bounds;
  std::optional<double> threshold;
  std::string case_label;
  bool certified = false;
  std::optional<double> dt;

  bool hypotheses_ok() const;
};

/// l = 2a + b^2 + lambda c (2 + c); the exact linear equation is mean-square
/// stable iff l < 0.
double linear_indicator(const LinearTestParams& p);
bool exact_linear_stable(const LinearTestParams& p);

/// Semi-tamed scheme on the linear equation: mean-square stable iff
/// dt < -l/(a + lambda c)^2 (threshold +infinity when a + lambda c = 0).
StabilityVerdict sts_linear_threshold(const LinearTestParams& p);

/// Exact one-step second-moment multiplier of the semi-tamed scheme on the
/// linear equation: R(dt) = 1 + (a+lambda c)^2 dt^2 + (b^2 + lambda c^2 +
/// 2a + 2 lambda c) dt, so E|Y_{n+1}|^2 = R(dt) E|Y_n|^2 exactly.
double sts_linear_amplification(const LinearTestParams& p, double dt);

/// Per-step-size certificate for the tamed scheme on the linear equation.
/// The sign-case table (the union of both certificate branches, split by the
/// signs of a and c and the boundary dt = -1/(lambda c)) is authoritative;
/// a negative verdict means "not certified at this dt", not "unstable".
StabilityVerdict ncts_linear_verdict(const LinearTestParams& p, double dt);

/// alpha = 2 mu_f + sigma + lambda sqrt(gamma_h)(sqrt(gamma_h) + 2); the
/// exact solution satisfies E|X(t)|^2 <= E|X0|^2 e^(alpha t).
double exact_nonlinear_alpha(const ExactSolutionConstants& c);

/// x0_msq * e^(alpha t).
double exponential_bound(double alpha, double x0_msq, double t);

/// Semi-tamed nonlinear threshold: hypotheses alpha1 < 0 (with
/// alpha1 = -2 rho + theta^2 + lambda C(C+2)) and 2 beta - beta_bar > 0;
/// threshold = min of the three bounds reported in `bounds`.
StabilityVerdict sts_nonlinear_threshold(const NonlinearConstants& k);

/// Tamed nonlinear threshold: hypotheses beta - C beta_bar > 0,
/// beta_bar(1 + 2C) - 2 beta < 0 and alpha3 < 0 (with alpha3 = K + theta^2 +
/// lambda C(2K + C) - 2 lambda mu); threshold = min of the two bounds.
StabilityVerdict ncts_nonlinear_threshold(const NonlinearConstants& k);

}  // namespace jumpsde
