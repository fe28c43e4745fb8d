#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace nlnt {

/// A real function of x parsed from text.
///
/// Grammar: numbers, x, pi, e, + - * / ^ (right-associative), parentheses,
/// unary minus and the functions sin cos tan exp log sqrt abs min max and
/// box(a, b), the indicator of [a, b] evaluated at x.
class Expression {
 public:
  /// Throws InputDataError with the offending position on malformed text.
  static Expression parse(std::string_view text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace nlnt
