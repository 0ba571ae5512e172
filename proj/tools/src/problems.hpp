#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "jumpsde/problem.hpp"
#include "jumpsde/stability.hpp"

namespace jumpsde::tools {

/// A problem the CLI can run: the constructed SDE plus whatever closed-form
/// stability data is known for it (drives the threshold/certified columns of
/// experiment summaries) and per-problem experiment defaults.
struct ResolvedProblem {
  std::string name;
  JumpDiffusionProblem problem;
  std::optional<LinearTestParams> linear = std::nullopt;
  std::optional<NonlinearConstants> nonlinear = std::nullopt;
  std::optional<ExactSolutionConstants> exact = std::nullopt;
  std::string config_text = {};  // canonical; reparses to the same problem
  std::vector<double> default_dts = {};
  long default_paths = 1000;
};

/// Builtin names, currently "linear-sec4" and "nonlinear-sec4".
std::vector<std::string> builtin_problem_names();
bool is_builtin_problem(std::string_view name);
ResolvedProblem resolve_builtin(std::string_view name);  // throws ConfigError

/// Builtin name, else a path to a config file (problem name = file stem).
ResolvedProblem resolve_problem(const std::string& selector);

}  // namespace jumpsde::tools
