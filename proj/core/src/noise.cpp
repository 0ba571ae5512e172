#include "jumpsde/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jumpsde {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, counter[0], hi0, lo0);
    mulhilo(kPhiloxM1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t path_index)
    : master_seed_(master_seed), path_index_(path_index) {}

void NoiseStream::refill() {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(block_),
      static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(path_index_),
      static_cast<std::uint32_t>(path_index_ >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(master_seed_),
      static_cast<std::uint32_t>(master_seed_ >> 32)};
  buf_ = philox4x32(counter, key);
  ++block_;
  buf_used_ = 0;
}

std::uint64_t NoiseStream::next_u64() {
  if (buf_used_ >= 2) refill();
  const int i = 2 * buf_used_++;
  return static_cast<std::uint64_t>(buf_[i]) |
         (static_cast<std::uint64_t>(buf_[i + 1]) << 32);
}

double NoiseStream::next_uniform() {
  // (x >> 11) has 53 random bits; the half-offset keeps the result in (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double NoiseStream::next_normal() { return inverse_normal_cdf(next_uniform()); }

long NoiseStream::next_poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be >= 0");
  if (mean <= 10.0) {
    // Sequential-search inversion: exact and one uniform per draw.
    const double u = next_uniform();
    double p = std::exp(-mean);
    double cdf = p;
    long k = 0;
    while (u > cdf && k < 4096) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  // Transformed rejection with squeeze; constants from the PTRS sampler.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = next_uniform() - 0.5;
    const double v = next_uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * std::log(mean) - mean - std::lgamma(kf + 1.0)) {
      return static_cast<long>(kf);
    }
  }
}

NoiseStream derive_path_stream(std::uint64_t master_seed,
                               std::uint64_t path_index) {
  return NoiseStream(master_seed, path_index);
}

double inverse_normal_cdf(double p) {
  // Rational minimax approximation (Wichura), relative error ~1e-16.
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw std::invalid_argument("inverse_normal_cdf requires p in [0,1]");
  }
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

void brownian_increment(NoiseStream& stream, double dt, Vec& out) {
  if (!(dt > 0.0)) throw std::invalid_argument("brownian_increment: dt must be > 0");
  const double scale = std::sqrt(dt);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = scale * stream.next_normal();
  }
}

Vec brownian_increment(NoiseStream& stream, int m, double dt) {
  if (m < 1) throw std::invalid_argument("brownian_increment: m must be >= 1");
  Vec out(m);
  brownian_increment(stream, dt, out);
  return out;
}

long poisson_increment(NoiseStream& stream, double lambda, double dt) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("poisson_increment: lambda must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("poisson_increment: dt must be > 0");
  return stream.next_poisson(lambda * dt);
}

double compensate(long dn, double lambda, double dt) {
  return static_cast<double>(dn) - lambda * dt;
}

}  // namespace jumpsde
