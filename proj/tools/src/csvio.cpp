#include "csvio.hpp"

#include <cassert>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace jumpsde::tools {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable output
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  assert(ec == std::errc{});
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  assert(ec == std::errc{});
  (void)ec;
  return std::string(buf, ptr);
}

void write_moments_csv(std::ostream& out, const MomentSeries& series) {
  out << "step,time,msq,stderr,overflowed\n";
  for (const MomentPoint& p : series.points) {
    out << p.step << ',' << fmt17(p.time) << ',' << fmt17(p.msq) << ','
        << fmt17(p.std_error) << ',' << p.overflowed << '\n';
  }
}

void write_moments_csv(const std::filesystem::path& path,
                       const MomentSeries& series) {
  std::ofstream out = open_for_write(path);
  write_moments_csv(out, series);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const Eigen::Index dim = trajectory.states.empty() ? 0 : trajectory.states[0].size();
  out << "step,time";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t n = 0; n < trajectory.states.size(); ++n) {
    out << n << ',' << fmt17(trajectory.times[n]);
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << fmt17(trajectory.states[n][i]);
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory) {
  std::ofstream out = open_for_write(path);
  write_trajectory_csv(out, trajectory);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace jumpsde::tools
