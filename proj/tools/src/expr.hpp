#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jumpsde::tools {

/// Parse failure; `position` is a 1-based column into the parsed text.
class ExprError : public std::runtime_error {
 public:
  ExprError(const std::string& message, std::size_t position)
      : std::runtime_error("column " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Scalar arithmetic expression in one variable x: literals, + - * / ^ and
/// parentheses. '^' is right-associative and binds tighter than unary minus
/// (so -x^2 is -(x^2)).
///
/// Evaluation is deterministic: an exponent that is an integer of magnitude
/// <= 16 is evaluated by a left-to-right multiplication chain
/// (x^3 == (x*x)*x exactly); anything else falls back to std::pow.
class Expr {
 public:
  static Expr parse(std::string_view text);  // throws ExprError

  double eval(double x) const;
  /// Minimal-parenthesis form whose reparse is structurally identical, so
  /// canonical() is a fixed point and evaluation survives round-trips bitwise.
  std::string canonical() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;  // immutable: copies share safely
};

}  // namespace jumpsde::tools
