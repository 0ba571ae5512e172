#include "jumpsde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jumpsde {

namespace {

// A vanishing denominator removes the constraint, so the bound is +infinity.
double safe_div(double num, double den) {
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

void require_finite(const LinearTestParams& p) {
  if (!(std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c) &&
        std::isfinite(p.lambda))) {
    throw std::invalid_argument("linear parameters must be finite");
  }
}

void require_valid(const NonlinearConstants& k) {
  const double vals[] = {k.rho, k.K,     k.beta, k.beta_bar, k.a_exp,
                         k.theta, k.C,   k.mu,   k.lambda};
  for (double v : vals) {
    if (!std::isfinite(v)) throw std::invalid_argument("nonlinear constants must be finite");
  }
  if (!(k.a_exp > 1.0)) throw std::invalid_argument("growth exponent must exceed 1");
  if (k.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (k.rho < 0.0 || k.K < 0.0 || k.beta < 0.0 || k.beta_bar < 0.0 ||
      k.theta < 0.0 || k.C < 0.0) {
    throw std::invalid_argument("structural constants must be >= 0");
  }
}

}  // namespace

bool StabilityVerdict::hypotheses_ok() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const HypothesisCheck& h) { return h.passed; });
}

double linear_indicator(const LinearTestParams& p) {
  require_finite(p);
  return 2.0 * p.a + p.b * p.b + p.lambda * p.c * (2.0 + p.c);
}

bool exact_linear_stable(const LinearTestParams& p) {
  return linear_indicator(p) < 0.0;
}

StabilityVerdict sts_linear_threshold(const LinearTestParams& p) {
  const double l = linear_indicator(p);
  StabilityVerdict v;
  v.indicator = l;
  v.indicator_name = "l";
  v.hypotheses.push_back({"l < 0", l, l < 0.0});
  const double alc = p.a + p.lambda * p.c;
  const double bound = safe_div(-l, alc * alc);
  v.bounds.push_back({"-l/(a+lambda*c)^2", bound});
  if (l < 0.0) {
    v.threshold = bound;
    v.certified = true;
    v.case_label = "mean-square stable iff dt < threshold";
  } else {
    v.case_label = "exact equation not mean-square stable";
  }
  return v;
}

double sts_linear_amplification(const LinearTestParams& p, double dt) {
  require_finite(p);
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be >= 0");
  const double alc = p.a + p.lambda * p.c;
  const double lin = p.b * p.b + p.lambda * p.c * p.c + 2.0 * p.a + 2.0 * p.lambda * p.c;
  return 1.0 + alc * alc * dt * dt + lin * dt;
}

StabilityVerdict ncts_linear_verdict(const LinearTestParams& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double l = linear_indicator(p);
  StabilityVerdict v;
  v.indicator = l;
  v.indicator_name = "l";
  v.dt = dt;
  v.hypotheses.push_back({"l < 0", l, l < 0.0});

  const double alc = p.a + p.lambda * p.c;
  const double bound_a = safe_div(2.0 * p.a - l, p.a * p.a + p.lambda * p.lambda * p.c * p.c);
  const double bound_b = safe_div(-l, alc * alc);
  const double lc = p.lambda * p.c;
  // Sign boundary of a(1 + lambda c dt); +infinity when the jump term cannot
  // flip the sign.
  const double dt_flip = lc == 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lc;
  v.bounds.push_back({"(2a-l)/(a^2+lambda^2*c^2)", bound_a});
  v.bounds.push_back({"-l/(a+lambda*c)^2", bound_b});
  v.bounds.push_back({"-1/(lambda*c)", dt_flip});

  if (!(l < 0.0)) {
    v.case_label = "exact equation not mean-square stable";
    return v;
  }

  const bool two_a_minus_l = p.a > l / 2.0;  // 2a - l > 0
  struct Case {
    const char* label;
    bool holds;
  };
  const Case cases[] = {
      {"a in (l/2,0], c >= 0, dt < (2a-l)/(a^2+lambda^2*c^2)",
       two_a_minus_l && p.a <= 0.0 && p.c >= 0.0 && dt < bound_a},
      {"a in (l/2,0), c < 0, dt < (2a-l)/(a^2+lambda^2*c^2), dt <= -1/(lambda*c)",
       two_a_minus_l && p.a < 0.0 && p.c < 0.0 && dt < bound_a && dt <= dt_flip},
      {"a > 0, c < 0, dt < (2a-l)/(a^2+lambda^2*c^2), dt >= -1/(lambda*c)",
       p.a > 0.0 && p.c < 0.0 && dt < bound_a && dt >= dt_flip},
      {"a > 0, c > 0, dt < -l/(a+lambda*c)^2",
       p.a > 0.0 && p.c > 0.0 && dt < bound_b},
      {"a > 0, c < 0, dt < min(-l/(a+lambda*c)^2, -1/(lambda*c))",
       p.a > 0.0 && p.c < 0.0 && dt < bound_b && dt < dt_flip},
      {"a < 0, c < 0, dt < -l/(a+lambda*c)^2, dt > -1/(lambda*c)",
       p.a < 0.0 && p.c < 0.0 && dt < bound_b && dt > dt_flip},
  };
  for (const Case& c : cases) {
    if (c.holds) {
      v.certified = true;
      v.case_label = c.label;
      return v;
    }
  }
  v.case_label = "not certified by the sign-case table at this dt";
  return v;
}

double exact_nonlinear_alpha(const ExactSolutionConstants& c) {
  if (!(std::isfinite(c.mu_f) && std::isfinite(c.sigma) &&
        std::isfinite(c.gamma_h) && std::isfinite(c.lambda))) {
    throw std::invalid_argument("exact-solution constants must be finite");
  }
  if (c.sigma < 0.0 || c.gamma_h < 0.0 || c.lambda < 0.0) {
    throw std::invalid_argument("sigma, gamma_h and lambda must be >= 0");
  }
  const double root = std::sqrt(c.gamma_h);
  return 2.0 * c.mu_f + c.sigma + c.lambda * root * (root + 2.0);
}

double exponential_bound(double alpha, double x0_msq, double t) {
  if (!(x0_msq >= 0.0)) throw std::invalid_argument("x0_msq must be >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  return x0_msq * std::exp(alpha * t);
}

StabilityVerdict sts_nonlinear_threshold(const NonlinearConstants& k) {
  require_valid(k);
  const double alpha1 = -2.0 * k.rho + k.theta * k.theta + k.lambda * k.C * (k.C + 2.0);
  const double margin = 2.0 * k.beta - k.beta_bar;

  StabilityVerdict v;
  v.indicator = alpha1;
  v.indicator_name = "alpha1";
  v.hypotheses.push_back({"alpha1 < 0", alpha1, alpha1 < 0.0});
  v.hypotheses.push_back({"2*beta - beta_bar > 0", margin, margin > 0.0});

  const double kc = k.K + k.lambda * k.C;
  const NamedBound bounds[] = {
      {"-alpha1/(K+lambda*C)^2", safe_div(-alpha1, kc * kc)},
      {"2*beta/((2*(K+lambda*C)+beta_bar)*beta_bar)",
       safe_div(2.0 * k.beta, (2.0 * kc + k.beta_bar) * k.beta_bar)},
      {"(2*beta-beta_bar)/(2*(K+lambda*C)*beta_bar)",
       safe_div(margin, 2.0 * kc * k.beta_bar)},
  };
  for (const NamedBound& b : bounds) v.bounds.push_back(b);

  if (v.hypotheses_ok()) {
    const NamedBound* binding = &v.bounds[0];
    for (const NamedBound& b : v.bounds) {
      if (b.value < binding->value) binding = &b;
    }
    v.threshold = binding->value;
    v.certified = true;
    v.case_label = std::string("binding bound: ") + binding->name;
  } else {
    v.case_label = "hypothesis failure";
  }
  return v;
}

StabilityVerdict ncts_nonlinear_threshold(const NonlinearConstants& k) {
  require_valid(k);
  const double alpha3 =
      k.K + k.theta * k.theta + k.lambda * k.C * (2.0 * k.K + k.C) - 2.0 * k.lambda * k.mu;
  const double jump_gap = k.beta - k.C * k.beta_bar;
  const double growth_gap = k.beta_bar * (1.0 + 2.0 * k.C) - 2.0 * k.beta;

  StabilityVerdict v;
  v.indicator = alpha3;
  v.indicator_name = "alpha3";
  v.hypotheses.push_back({"beta - C*beta_bar > 0", jump_gap, jump_gap > 0.0});
  v.hypotheses.push_back({"beta_bar*(1+2*C) - 2*beta < 0", growth_gap, growth_gap < 0.0});
  v.hypotheses.push_back({"alpha3 < 0", alpha3, alpha3 < 0.0});

  const NamedBound bounds[] = {
      {"-alpha3/(2*K^2+lambda^2*C^2)",
       safe_div(-alpha3, 2.0 * k.K * k.K + k.lambda * k.lambda * k.C * k.C)},
      {"(beta-C*beta_bar)/beta_bar^2", safe_div(jump_gap, k.beta_bar * k.beta_bar)},
  };
  for (const NamedBound& b : bounds) v.bounds.push_back(b);

  if (v.hypotheses_ok()) {
    const NamedBound* binding = &v.bounds[0];
    for (const NamedBound& b : v.bounds) {
      if (b.value < binding->value) binding = &b;
    }
    v.threshold = binding->value;
    v.certified = true;
    v.case_label = std::string("binding bound: ") + binding->name;
  } else {
    v.case_label = "hypothesis failure";
  }
  return v;
}

}  // namespace jumpsde
