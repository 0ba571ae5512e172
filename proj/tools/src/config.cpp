#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace jumpsde::tools {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& message) {
  throw ConfigError("line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view token, std::size_t line, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    fail_line(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

long parse_long(std::string_view token, std::size_t line, const char* what) {
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail_line(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

Expr parse_expr_value(std::string_view text, std::size_t line, const char* key) {
  try {
    return Expr::parse(text);
  } catch (const ExprError& e) {
    fail_line(line, std::string(key) + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

ProblemConfig parse_problem_config(std::string_view text) {
  ProblemConfig config;
  std::set<std::string, std::less<>> seen;
  bool have_dim = false, have_lambda = false, have_x0 = false, have_horizon = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view raw = text.substr(
        start, end == std::string_view::npos ? text.size() - start : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string_view content = trim(raw);
    if (content.empty()) continue;

    const std::size_t eq = content.find('=');
    if (eq == std::string_view::npos) {
      fail_line(line_no, "expected 'key = value'");
    }
    const std::string key{trim(content.substr(0, eq))};
    const std::string_view value = trim(content.substr(eq + 1));
    if (key.empty()) fail_line(line_no, "empty key");
    if (value.empty()) fail_line(line_no, "empty value for key '" + key + "'");
    if (!seen.insert(key).second) fail_line(line_no, "duplicate key '" + key + "'");

    if (key == "dim") {
      const long dim = parse_long(value, line_no, "dim");
      if (dim < 1) fail_line(line_no, "dim must be >= 1");
      config.dim = static_cast<int>(dim);
      have_dim = true;
    } else if (key == "lambda") {
      config.lambda = parse_double(value, line_no, "lambda");
      if (config.lambda < 0.0) fail_line(line_no, "lambda must be >= 0");
      have_lambda = true;
    } else if (key == "x0") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const std::size_t space = rest.find_first_of(" \t");
        const std::string_view token =
            space == std::string_view::npos ? rest : rest.substr(0, space);
        rest = space == std::string_view::npos ? std::string_view{}
                                               : trim(rest.substr(space + 1));
        config.x0.push_back(parse_double(token, line_no, "x0 entry"));
      }
      have_x0 = true;
    } else if (key == "horizon") {
      config.horizon = parse_double(value, line_no, "horizon");
      if (!(config.horizon > 0.0)) fail_line(line_no, "horizon must be > 0");
      have_horizon = true;
    } else if (key == "drift") {
      config.drift = parse_expr_value(value, line_no, "drift");
    } else if (key == "drift_u") {
      config.drift_u = parse_expr_value(value, line_no, "drift_u");
    } else if (key == "drift_v") {
      config.drift_v = parse_expr_value(value, line_no, "drift_v");
    } else if (key == "diffusion") {
      config.diffusion = parse_expr_value(value, line_no, "diffusion");
    } else if (key == "jump") {
      config.jump = parse_expr_value(value, line_no, "jump");
    } else {
      fail_line(line_no, "unknown key '" + key + "'");
    }
  }
  (void)have_dim;
  (void)have_lambda;

  if (!have_x0) throw ConfigError("missing required key 'x0'");
  if (!have_horizon) throw ConfigError("missing required key 'horizon'");
  if (!config.diffusion) throw ConfigError("missing required key 'diffusion'");
  if (!config.jump) throw ConfigError("missing required key 'jump'");
  const bool split = config.drift_u.has_value() || config.drift_v.has_value();
  if (split && (!config.drift_u || !config.drift_v)) {
    throw ConfigError("drift_u and drift_v must be given together");
  }
  if (config.drift.has_value() == split) {
    throw ConfigError("exactly one of 'drift' or 'drift_u'+'drift_v' is required");
  }
  if (static_cast<long>(config.x0.size()) != config.dim) {
    throw ConfigError("x0 has " + std::to_string(config.x0.size()) +
                      " entries but dim = " + std::to_string(config.dim));
  }
  return config;
}

ProblemConfig load_problem_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_problem_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_problem_config(const ProblemConfig& config) {
  std::string out;
  out += "dim = " + std::to_string(config.dim) + "\n";
  out += "lambda = " + format_double(config.lambda) + "\n";
  out += "x0 =";
  for (double v : config.x0) out += " " + format_double(v);
  out += "\n";
  out += "horizon = " + format_double(config.horizon) + "\n";
  if (config.drift) {
    out += "drift = " + config.drift->canonical() + "\n";
  } else {
    out += "drift_u = " + config.drift_u->canonical() + "\n";
    out += "drift_v = " + config.drift_v->canonical() + "\n";
  }
  out += "diffusion = " + config.diffusion->canonical() + "\n";
  out += "jump = " + config.jump->canonical() + "\n";
  return out;
}

JumpDiffusionProblem build_problem(const ProblemConfig& config) {
  const int dim = config.dim;
  Vec x0(dim);
  for (int i = 0; i < dim; ++i) x0[i] = config.x0[static_cast<std::size_t>(i)];

  auto componentwise = [](Expr e) {
    return [e](const Vec& x, Vec& out) {
      for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = e.eval(x[i]);
    };
  };
  auto diagonal = [](Expr e) {
    return [e](const Vec& x, Mat& out) {
      out.setZero();
      for (Eigen::Index i = 0; i < x.size(); ++i) out(i, i) = e.eval(x[i]);
    };
  };

  if (config.drift) {
    return JumpDiffusionProblem::with_whole_drift(
        dim, dim, componentwise(*config.drift), diagonal(*config.diffusion),
        componentwise(*config.jump), config.lambda, std::move(x0),
        config.horizon);
  }
  return JumpDiffusionProblem::with_split_drift(
      dim, dim, componentwise(*config.drift_u), componentwise(*config.drift_v),
      diagonal(*config.diffusion), componentwise(*config.jump), config.lambda,
      std::move(x0), config.horizon);
}

}  // namespace jumpsde::tools
