#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expr.hpp"
#include "jumpsde/problem.hpp"

namespace jumpsde::tools {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain-text problem description, one `key = value` pair per line. '#'
/// starts a comment. Keys: dim (default 1), lambda (default 0), x0
/// (space-separated, one entry per dimension, required), horizon (required),
/// diffusion and jump (coefficient expressions, required), and either drift
/// or the pair drift_u/drift_v (exactly one form). Unknown and duplicate keys
/// are rejected; every parse diagnostic carries its line number.
struct ProblemConfig {
  int dim = 1;
  double lambda = 0.0;
  std::vector<double> x0;
  double horizon = 0.0;
  std::optional<Expr> drift;             // whole-drift form
  std::optional<Expr> drift_u, drift_v;  // split form (both or neither)
  std::optional<Expr> diffusion;
  std::optional<Expr> jump;
};

ProblemConfig parse_problem_config(std::string_view text);
ProblemConfig load_problem_config(const std::filesystem::path& path);

/// Canonical text whose reparse yields a configuration that evaluates
/// identically (expressions are serialized in canonical form).
std::string dump_problem_config(const ProblemConfig& config);

/// Coefficients apply componentwise with a diagonal diffusion matrix, so the
/// Wiener dimension equals dim.
JumpDiffusionProblem build_problem(const ProblemConfig& config);

}  // namespace jumpsde::tools
