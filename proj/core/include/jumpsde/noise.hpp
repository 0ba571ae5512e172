#pragma once

#include <array>
#include <cstdint>

#include "jumpsde/types.hpp"

namespace jumpsde {

/// One keyed 128-bit block of the 10-round Philox4x32 function. The output is
/// a pure function of (counter, key), which is what makes streams replayable
/// and order-independent.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Per-path random source. The draw sequence is a pure function of
/// (master_seed, path_index); distinct path indices use disjoint counter
/// blocks of the same keyed generator, so their streams are independent.
/// Single-owner mutable state: safe to move across threads, not to share.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t path_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t path_index() const noexcept { return path_index_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1) with 53-bit resolution.
  double next_uniform();

  /// Standard normal via the inverse CDF; consumes exactly one uniform.
  double next_normal();

  /// Poisson draw with the given mean. Sequential-search inversion for
  /// mean <= 10 (one uniform per draw), transformed rejection above.
  long next_poisson(double mean);

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t path_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_used_ = 2;  // 64-bit slots consumed from buf_; 2 means empty
};

/// Deterministic substream for one path: same arguments, same sequence.
NoiseStream derive_path_stream(std::uint64_t master_seed, std::uint64_t path_index);

/// Inverse of the standard normal CDF, accurate to ~1e-15 relative error on
/// (0,1). Returns +-infinity at the closed endpoints.
double inverse_normal_cdf(double p);

/// Fills `out` (dimension m) with independent N(0, dt) draws.
void brownian_increment(NoiseStream& stream, double dt, Vec& out);
Vec brownian_increment(NoiseStream& stream, int m, double dt);

/// Poisson(lambda * dt) count over one step.
long poisson_increment(NoiseStream& stream, double lambda, double dt);

/// Compensated jump count dN - lambda*dt (a mean-zero increment).
double compensate(long dn, double lambda, double dt);

}  // namespace jumpsde
