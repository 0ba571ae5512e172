#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "jumpsde/montecarlo.hpp"
#include "jumpsde/schemes.hpp"

namespace jumpsde::tools {

/// 17 significant digits, locale-independent (round-trips any double).
std::string fmt17(double v);
/// Shortest round-trip form, locale-independent (for dt tags and configs).
std::string fmt_shortest(double v);

/// Schema: step,time,msq,stderr,overflowed (one row per step).
void write_moments_csv(std::ostream& out, const MomentSeries& series);
void write_moments_csv(const std::filesystem::path& path, const MomentSeries& series);

/// Schema: step,time,x0,...,x{d-1}; truncated trajectories end at the first
/// overflowed state.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory);

}  // namespace jumpsde::tools
