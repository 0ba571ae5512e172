#include "jumpsde/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jumpsde/errors.hpp"
#include "stepper.hpp"

namespace jumpsde {

namespace {

// Paths are grouped into fixed blocks; each block is reduced independently
// and blocks are merged in index order, which makes the estimate a pure
// function of (problem, scheme, dt, n_steps, n_paths, master_seed).
constexpr long kBlockSize = 64;

// Neumaier-compensated accumulator. long double keeps |x|^4 sums finite even
// for states near the overflow limit.
struct Accumulator {
  long double sum = 0.0L;
  long double comp = 0.0L;

  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  long double result() const { return sum + comp; }
};

// Finished per-step reductions of one block of paths.
struct BlockPartial {
  std::vector<long double> q;   // sum of |Y_n|^2 over surviving paths
  std::vector<long double> q2;  // sum of |Y_n|^4 over surviving paths
  std::vector<long> alive;      // surviving paths at step n
};

void reduce_block(const JumpDiffusionProblem& problem, detail::Stepper& stepper,
                  double dt, long n_steps, long first_path, long last_path,
                  std::uint64_t master_seed, BlockPartial& out) {
  const std::size_t n_points = static_cast<std::size_t>(n_steps) + 1;
  std::vector<Accumulator> q(n_points), q2(n_points);
  std::vector<long> alive(n_points, 0);

  Vec x(problem.dim()), xnext(problem.dim());
  Increment inc;
  for (long path = first_path; path < last_path; ++path) {
    NoiseStream stream =
        derive_path_stream(master_seed, static_cast<std::uint64_t>(path));
    x = problem.x0();
    for (long n = 0; n <= n_steps; ++n) {
      if (state_overflowed(x)) break;  // absorbing: excluded from here on
      const double sq = x.squaredNorm();
      const std::size_t i = static_cast<std::size_t>(n);
      q[i].add(sq);
      q2[i].add(static_cast<long double>(sq) * static_cast<long double>(sq));
      ++alive[i];
      if (n == n_steps) break;
      detail::fill_increment(stream, problem, dt, inc);
      stepper.step(x, inc, xnext);
      x.swap(xnext);
    }
  }

  out.q.resize(n_points);
  out.q2.resize(n_points);
  out.alive = std::move(alive);
  for (std::size_t i = 0; i < n_points; ++i) {
    out.q[i] = q[i].result();
    out.q2[i] = q2[i].result();
  }
}

}  // namespace

MomentSeries estimate_second_moments(const JumpDiffusionProblem& problem,
                                     Scheme scheme, double dt, long n_steps,
                                     long n_paths, std::uint64_t master_seed,
                                     const EstimateOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (n_steps < 0) throw std::invalid_argument("n_steps must be >= 0");
  if (n_paths < 2) throw std::invalid_argument("n_paths must be >= 2");
  if (static_cast<double>(n_steps) * dt > problem.horizon() + 1e-9) {
    throw std::invalid_argument("n_steps*dt exceeds the problem horizon");
  }
  detail::Stepper{problem, scheme};  // validate scheme/problem pairing up front

  const long n_blocks = (n_paths + kBlockSize - 1) / kBlockSize;
  std::vector<BlockPartial> partials(static_cast<std::size_t>(n_blocks));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_blocks));

  std::atomic<long> next_block{0};
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    detail::Stepper stepper(problem, scheme);
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const long b = next_block.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      // A claimed block is always reduced in full, so the set of reduced
      // blocks is a prefix and the lowest failing block is thread-invariant.
      const long first = b * kBlockSize;
      const long last = std::min(first + kBlockSize, n_paths);
      try {
        reduce_block(problem, stepper, dt, n_steps, first, last, master_seed,
                     partials[static_cast<std::size_t>(b)]);
      } catch (...) {
        errors[static_cast<std::size_t>(b)] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  int n_threads = options.n_threads;
  if (n_threads < 0) throw std::invalid_argument("n_threads must be >= 0");
  if (n_threads == 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }
  n_threads = static_cast<int>(
      std::min<long>(n_threads, std::max<long>(n_blocks, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t n_points = static_cast<std::size_t>(n_steps) + 1;
  MomentSeries series;
  series.scheme = scheme;
  series.dt = dt;
  series.n_paths = n_paths;
  series.master_seed = master_seed;
  series.points.resize(n_points);

  for (std::size_t i = 0; i < n_points; ++i) {
    Accumulator q, q2;
    long alive = 0;
    for (const BlockPartial& p : partials) {
      q.add(p.q[i]);
      q2.add(p.q2[i]);
      alive += p.alive[i];
    }
    if (alive == 0) {
      throw AllPathsOverflowed("every path overflowed by step " +
                               std::to_string(i));
    }
    const long double n = static_cast<long double>(alive);
    const long double total = q.result();
    const long double msq = total / n;
    long double std_error = 0.0L;
    if (alive > 1) {
      long double var = (q2.result() - total * total / n) / (n - 1.0L);
      if (var < 0.0L) var = 0.0L;  // rounding guard; variance is nonnegative
      std_error = std::sqrt(var / n);
    }
    MomentPoint& pt = series.points[i];
    pt.step = static_cast<long>(i);
    pt.time = static_cast<double>(i) * dt;
    pt.msq = static_cast<double>(msq);
    pt.std_error = static_cast<double>(std_error);
    pt.overflowed = n_paths - alive;
  }
  series.overflow_count = series.points.back().overflowed;
  return series;
}

DecayFit fit_decay_rate(const MomentSeries& series) {
  if (series.points.empty()) throw InsufficientData("empty moment series");
  const long n_steps = static_cast<long>(series.points.size()) - 1;
  FitWindow window;
  window.first = static_cast<long>(
      std::ceil(0.1 * static_cast<double>(n_steps)));
  window.last = n_steps;
  for (const MomentPoint& p : series.points) {
    if (p.overflowed > 0) {
      window.last = p.step - 1;  // fit only the pre-overflow segment
      break;
    }
  }
  return fit_decay_rate(series, window);
}

DecayFit fit_decay_rate(const MomentSeries& series, FitWindow window) {
  const long n_steps = static_cast<long>(series.points.size()) - 1;
  std::vector<double> ts, ys;
  // The returned window reports the range actually fitted, so clamp it to the
  // series before use rather than echoing out-of-range caller bounds.
  if (window.first < 0) window.first = 0;
  if (window.last > n_steps) window.last = n_steps;
  for (long n = window.first; n <= window.last; ++n) {
    const MomentPoint& p = series.points[static_cast<std::size_t>(n)];
    if (std::isfinite(p.msq) && p.msq > 0.0) {
      ts.push_back(p.time);
      ys.push_back(std::log(p.msq));
    }
  }
  if (ts.size() < 3) {
    throw InsufficientData("decay fit needs at least 3 usable points, got " +
                           std::to_string(ts.size()));
  }

  const double n = static_cast<double>(ts.size());
  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    y_mean += ys[i];
  }
  t_mean /= n;
  y_mean /= n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double dtc = ts[i] - t_mean;
    stt += dtc * dtc;
    sty += dtc * (ys[i] - y_mean);
  }
  if (stt == 0.0) throw InsufficientData("decay fit needs distinct times");

  DecayFit fit;
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.intercept = y_mean - slope * t_mean;
  fit.window = window;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (fit.intercept + slope * ts[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace jumpsde
