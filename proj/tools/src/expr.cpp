#include "expr.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace jumpsde::tools {

struct Expr::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow } kind;
  double value = 0.0;  // Number only
  std::shared_ptr<const Node> lhs, rhs;  // Neg uses lhs only
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr make_number(double v) {
  return std::make_shared<Node>(Node{Kind::Number, v, nullptr, nullptr});
}
NodePtr make_var() {
  return std::make_shared<Node>(Node{Kind::Var, 0.0, nullptr, nullptr});
}
NodePtr make_unary(NodePtr operand) {
  return std::make_shared<Node>(Node{Kind::Neg, 0.0, std::move(operand), nullptr});
}
NodePtr make_binary(Kind k, NodePtr l, NodePtr r) {
  return std::make_shared<Node>(Node{k, 0.0, std::move(l), std::move(r)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr root = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ExprError(message, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr node = parse_product();
    for (;;) {
      if (consume('+')) {
        node = make_binary(Kind::Add, std::move(node), parse_product());
      } else if (consume('-')) {
        node = make_binary(Kind::Sub, std::move(node), parse_product());
      } else {
        return node;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr node = parse_unary();
    for (;;) {
      if (consume('*')) {
        node = make_binary(Kind::Mul, std::move(node), parse_unary());
      } else if (consume('/')) {
        node = make_binary(Kind::Div, std::move(node), parse_unary());
      } else {
        return node;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return make_unary(parse_unary());
    return parse_power();
  }

  // Right-associative, exponent at unary level so x^-2 and x^2^3 both parse.
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      return make_binary(Kind::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  NodePtr parse_atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'x') {
      ++pos_;
      if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                  text_[pos_] == '_')) {
        fail("unknown identifier (only the variable 'x' is defined)");
      }
      return make_var();
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (c == '\0') fail("unexpected end of expression");
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t exp_pos = pos_ + 1;
      if (exp_pos < text_.size() && (text_[exp_pos] == '+' || text_[exp_pos] == '-')) {
        ++exp_pos;
      }
      std::size_t digits = exp_pos;
      while (digits < text_.size() && text_[digits] >= '0' && text_[digits] <= '9') {
        ++digits;
      }
      if (digits > exp_pos) pos_ = digits;
    }
    const std::string_view token = text_.substr(start, pos_ - start);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      pos_ = start;
      fail("invalid number '" + std::string(token) + "'");
    }
    return make_number(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double int_pow(double base, long exponent) {
  if (exponent < 0) return 1.0 / int_pow(base, -exponent);
  if (exponent == 0) return 1.0;
  double result = base;
  for (long i = 1; i < exponent; ++i) result *= base;
  return result;
}

double eval_node(const Node& node, double x) {
  switch (node.kind) {
    case Kind::Number: return node.value;
    case Kind::Var: return x;
    case Kind::Neg: return -eval_node(*node.lhs, x);
    case Kind::Add: return eval_node(*node.lhs, x) + eval_node(*node.rhs, x);
    case Kind::Sub: return eval_node(*node.lhs, x) - eval_node(*node.rhs, x);
    case Kind::Mul: return eval_node(*node.lhs, x) * eval_node(*node.rhs, x);
    case Kind::Div: return eval_node(*node.lhs, x) / eval_node(*node.rhs, x);
    case Kind::Pow: {
      const double base = eval_node(*node.lhs, x);
      const double exponent = eval_node(*node.rhs, x);
      if (exponent == std::floor(exponent) && std::fabs(exponent) <= 16.0) {
        return int_pow(base, static_cast<long>(exponent));
      }
      return std::pow(base, exponent);
    }
  }
  assert(false);
  return 0.0;
}

// Binding strength used to decide parenthesization: atoms 5, pow 4, unary 3,
// mul/div 2, add/sub 1.
int precedence(const Node& node) {
  switch (node.kind) {
    case Kind::Number:
    case Kind::Var: return 5;
    case Kind::Pow: return 4;
    case Kind::Neg: return 3;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Add:
    case Kind::Sub: return 1;
  }
  return 5;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  assert(ec == std::errc{});
  return std::string(buf, ptr);
}

void print_node(const Node& node, std::string& out);

void print_child(const Node& child, bool needs_parens, std::string& out) {
  if (needs_parens) out += '(';
  print_node(child, out);
  if (needs_parens) out += ')';
}

void print_node(const Node& node, std::string& out) {
  switch (node.kind) {
    case Kind::Number:
      out += format_number(node.value);
      return;
    case Kind::Var:
      out += 'x';
      return;
    case Kind::Neg:
      out += '-';
      print_child(*node.lhs, precedence(*node.lhs) < 3, out);
      return;
    case Kind::Add:
    case Kind::Sub: {
      print_child(*node.lhs, precedence(*node.lhs) < 1, out);
      out += node.kind == Kind::Add ? '+' : '-';
      // The right operand keeps parentheses at equal precedence so the
      // reparsed tree (left-associative) matches node for node.
      print_child(*node.rhs, precedence(*node.rhs) <= 1, out);
      return;
    }
    case Kind::Mul:
    case Kind::Div: {
      print_child(*node.lhs, precedence(*node.lhs) < 2, out);
      out += node.kind == Kind::Mul ? '*' : '/';
      print_child(*node.rhs, precedence(*node.rhs) <= 2, out);
      return;
    }
    case Kind::Pow: {
      // Right-associative: parenthesize the left at equal precedence and a
      // unary-minus left always (the grammar reads -x^2 as -(x^2)).
      print_child(*node.lhs, precedence(*node.lhs) <= 4, out);
      out += '^';
      print_child(*node.rhs, precedence(*node.rhs) < 3, out);
      return;
    }
  }
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  return Expr(Parser(text).run());
}

double Expr::eval(double x) const { return eval_node(*root_, x); }

std::string Expr::canonical() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

}  // namespace jumpsde::tools
