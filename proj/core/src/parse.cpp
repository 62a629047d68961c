#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mcir/expr.hpp"

namespace mcir {

namespace {

// Recursive descent over
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" ["-"|"+"] INT)?
//   atom  := NUMBER | "x" INT | FUNC "(" expr ("," expr)? ")" | "(" expr ")"
class Parser {
 public:
  Parser(std::string_view text, std::size_t dims, int first_line)
      : text_(text), dims_(dims), line_(first_line) {}

  Expr parse_all() {
    Expr e = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(std::string("expected '") + c + "'" +
           (at_end() ? std::string(" at end of input") : std::string(", found '") + peek() + "'"));
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, static_cast<int>(pos_ - line_start_) + 1);
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip_space();
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      advance();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
    const long exponent = integer();
    if (exponent > 1'000'000) fail("exponent too large");
    return pow(base, static_cast<int>(negative ? -exponent : exponent));
  }

  long integer() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    long value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) fail("integer out of range");
    return value;
  }

  Expr number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.') {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t mark = pos_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = mark;
        fail("malformed exponent in number");
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr(value);
  }

  Expr atom() {
    skip_space();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      advance();
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      const int column = static_cast<int>(pos_ - line_start_) + 1;
      if (c == 'x' && std::isdigit(static_cast<unsigned char>(
                          pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'))) {
        advance();
        const long index = integer();
        if (static_cast<std::size_t>(index) >= dims_) {
          throw ParseError("variable index out of range: x" + std::to_string(index) +
                               " with " + std::to_string(dims_) + " dimension(s)",
                           line_, column);
        }
        return Expr::var(static_cast<std::size_t>(index));
      }
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      const std::string name(text_.substr(start, pos_ - start));
      return call(name, column);
    }
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  Expr call(const std::string& name, int column) {
    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "exp") op = Op::Exp;
    else if (name == "log") op = Op::Log;
    else if (name == "sqrt") op = Op::Sqrt;
    else if (name == "abs") op = Op::Abs;
    else if (name == "max") op = Op::Max;
    else if (name == "min") op = Op::Min;
    else if (name == "sign") op = Op::Sign;
    else if (name == "step") op = Op::Step;
    else throw ParseError("unknown function '" + name + "'", line_, column);

    expect('(');
    Expr a = expr();
    Expr b;
    if (arity(op) == 2) {
      expect(',');
      b = expr();
    } else if (peek() == ',') {
      fail("'" + name + "' takes one argument");
    }
    expect(')');
    return make(op, a, b);
  }

  std::string_view text_;
  std::size_t dims_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_;
};

// Binding strength used by the printer. Negation and negative literals share
// the unary level; only a power base needs them parenthesized.
int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Const:
      return std::signbit(n.value) ? 3 : 5;
    default:
      return 5;
  }
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Const: {
      if (!std::isfinite(n.value)) throw std::domain_error("cannot print a non-finite constant");
      char buf[64];
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), n.value);
      out.append(buf, ptr);
      return;
    }
    case Op::Var:
      out += 'x';
      out += std::to_string(n.param);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n);
      print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
      out += ' ';
      out += op_name(n.op);
      out += ' ';
      print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
      return;
    }
    case Op::Neg:
      out += '-';
      print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
      return;
    case Op::Pow:
      print_wrapped(*n.lhs, precedence(*n.lhs) < 5, out);
      out += '^';
      out += std::to_string(n.param);
      return;
    default:
      out += op_name(n.op);
      out += '(';
      print(*n.lhs, out);
      if (arity(n.op) == 2) {
        out += ", ";
        print(*n.rhs, out);
      }
      out += ')';
      return;
  }
}

}  // namespace

Expression parse(std::string_view text, std::size_t dims, int first_line) {
  if (dims == 0) throw std::invalid_argument("parse: dims must be positive");
  Parser parser(text, dims, first_line);
  return Expression(parser.parse_all(), dims);
}

std::string unparse(const Expr& e) {
  std::string out;
  print(e.node(), out);
  return out;
}

}  // namespace mcir
