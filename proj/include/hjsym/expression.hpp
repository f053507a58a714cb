#pragma once

#include "hjsym/core.hpp"

#include <memory>
#include <string_view>

namespace hjsym {

/// Arithmetic expression in x and y.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | 'x' | 'y' | 'pi' | func '(' args ')' | '(' expr ')'
///   func    := sqrt | abs (one argument), min | max (two arguments)
///
/// Parse errors throw ConfigError with the offending position.
class Expression {
 public:
  explicit Expression(std::string_view text);

  double operator()(double x, double y) const;
  double operator()(const Vec2& p) const { return (*this)(p.x(), p.y()); }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace hjsym
