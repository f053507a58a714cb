#include "hjsym/expression.hpp"

#include <cctype>
#include <charconv>

namespace hjsym {

struct Expression::Node {
  enum class Op { number, x, y, add, sub, mul, div, pow, neg, sqrt, abs, min, max } op = Op::number;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double y) const {
    switch (op) {
      case Op::number: return value;
      case Op::x: return x;
      case Op::y: return y;
      case Op::add: return a->eval(x, y) + b->eval(x, y);
      case Op::sub: return a->eval(x, y) - b->eval(x, y);
      case Op::mul: return a->eval(x, y) * b->eval(x, y);
      case Op::div: return a->eval(x, y) / b->eval(x, y);
      case Op::pow: return std::pow(a->eval(x, y), b->eval(x, y));
      case Op::neg: return -a->eval(x, y);
      case Op::sqrt: return std::sqrt(a->eval(x, y));
      case Op::abs: return std::abs(a->eval(x, y));
      case Op::min: return std::min(a->eval(x, y), b->eval(x, y));
      case Op::max: return std::max(a->eval(x, y), b->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using Ptr = std::shared_ptr<const Node>;
using Op = Node::Op;

Ptr make(Op op, Ptr a = nullptr, Ptr b = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Ptr parse() {
    Ptr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Ptr expr() {
    Ptr left = term();
    for (;;) {
      if (eat('+')) left = make(Op::add, left, term());
      else if (eat('-')) left = make(Op::sub, left, term());
      else return left;
    }
  }

  Ptr term() {
    Ptr left = unary();
    for (;;) {
      if (eat('*')) left = make(Op::mul, left, unary());
      else if (eat('/')) left = make(Op::div, left, unary());
      else return left;
    }
  }

  Ptr unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  Ptr power() {
    Ptr base = primary();
    if (eat('^')) return make(Op::pow, base, unary());
    return base;
  }

  Ptr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      Ptr e = expr();
      expect(')');
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Ptr number() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    const auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("bad number");
    pos_ += std::size_t(end - begin);
    return make(Op::number, nullptr, nullptr, v);
  }

  Ptr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);
    if (id == "x") return make(Op::x);
    if (id == "y") return make(Op::y);
    if (id == "pi") return make(Op::number, nullptr, nullptr, std::numbers::pi);
    Op op;
    int arity = 1;
    if (id == "sqrt") op = Op::sqrt;
    else if (id == "abs") op = Op::abs;
    else if (id == "min") op = Op::min, arity = 2;
    else if (id == "max") op = Op::max, arity = 2;
    else {
      pos_ = start;
      fail("unknown name '" + std::string(id) + "'");
    }
    expect('(');
    Ptr a = expr();
    Ptr b;
    if (arity == 2) {
      expect(',');
      b = expr();
    }
    expect(')');
    return make(op, a, b);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string_view text) : text_(text), root_(Parser(text).parse()) {}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace hjsym
