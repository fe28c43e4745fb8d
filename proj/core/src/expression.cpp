#include "nlnt/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "nlnt/errors.hpp"

namespace nlnt {

struct Expression::Node {
  enum class Kind { Number, X, Neg, Add, Sub, Mul, Div, Pow, Call } kind = Kind::Number;
  double value = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, double value = 0.0, std::string fn = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->value = value;
  n->fn = std::move(fn);
  return n;
}

int arity(const std::string& fn) {
  if (fn == "sin" || fn == "cos" || fn == "tan" || fn == "exp" || fn == "log" || fn == "sqrt" ||
      fn == "abs") {
    return 1;
  }
  if (fn == "min" || fn == "max" || fn == "box") return 2;
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputDataError("expression '" + std::string(text_) + "': " + what + " at position " +
                         std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (eat('+')) {
        lhs = make(Kind::Add, {lhs, term()});
      } else if (eat('-')) {
        lhs = make(Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (eat('*')) {
        lhs = make(Kind::Mul, {lhs, unary()});
      } else if (eat('/')) {
        lhs = make(Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Kind::Number, {}, v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id(text_.substr(start, pos_ - start));
    if (id == "x") return make(Kind::X);
    if (id == "pi") return make(Kind::Number, {}, std::numbers::pi);
    if (id == "e") return make(Kind::Number, {}, std::numbers::e);
    const int n = arity(id);
    if (n < 0) {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    if (!eat('(')) fail("expected '(' after " + id);
    std::vector<NodePtr> args{expr()};
    while (eat(',')) args.push_back(expr());
    if (!eat(')')) fail("expected ')'");
    if (static_cast<int>(args.size()) != n) {
      fail(id + " takes " + std::to_string(n) + " argument(s)");
    }
    return make(Kind::Call, std::move(args), 0.0, id);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double x) {
  auto arg = [&](std::size_t i) { return eval(*n.args[i], x); };
  switch (n.kind) {
    case Kind::Number:
      return n.value;
    case Kind::X:
      return x;
    case Kind::Neg:
      return -arg(0);
    case Kind::Add:
      return arg(0) + arg(1);
    case Kind::Sub:
      return arg(0) - arg(1);
    case Kind::Mul:
      return arg(0) * arg(1);
    case Kind::Div:
      return arg(0) / arg(1);
    case Kind::Pow:
      return std::pow(arg(0), arg(1));
    case Kind::Call:
      break;
  }
  const std::string& f = n.fn;
  if (f == "sin") return std::sin(arg(0));
  if (f == "cos") return std::cos(arg(0));
  if (f == "tan") return std::tan(arg(0));
  if (f == "exp") return std::exp(arg(0));
  if (f == "log") return std::log(arg(0));
  if (f == "sqrt") return std::sqrt(arg(0));
  if (f == "abs") return std::abs(arg(0));
  if (f == "min") return std::min(arg(0), arg(1));
  if (f == "max") return std::max(arg(0), arg(1));
  // box
  return (x >= arg(0) && x <= arg(1)) ? 1.0 : 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(double x) const { return eval(*root_, x); }

}  // namespace nlnt
