#include "tw/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "tw/errors.hpp"

namespace tw {

struct Expression::Node {
  enum Kind { number, variable, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  int var = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

const char* const kFunctions[] = {"exp", "log",  "sqrt", "sin",  "cos", "tan",
                                  "tanh", "atan", "sinh", "cosh", "abs"};

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw InputError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
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
  static NodePtr make(Node::Kind k, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = std::move(args);
    return n;
  }

  NodePtr sum() {
    NodePtr l = product();
    for (;;) {
      if (eat('+')) l = make(Node::add, {l, product()});
      else if (eat('-')) l = make(Node::sub, {l, product()});
      else return l;
    }
  }
  NodePtr product() {
    NodePtr l = unary();
    for (;;) {
      if (eat('*')) l = make(Node::mul, {l, unary()});
      else if (eat('/')) l = make(Node::div, {l, unary()});
      else return l;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Node::neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Node::pow, {base, unary()});  // right associative
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      NodePtr n = sum();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->kind = Node::number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      auto n = std::make_shared<Node>();
      if (id == "pi" || id == "e") {
        n->kind = Node::number;
        n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
        return n;
      }
      static const char* const vars[] = {"zeta", "alpha", "x1", "x2", "x3", "x4"};
      for (int v = 0; v < Expression::kVarCount; ++v)
        if (id == vars[v]) {
          n->kind = Node::variable;
          n->var = v;
          return n;
        }
      for (const char* f : kFunctions)
        if (id == f) {
          if (!eat('(')) fail("expected '(' after " + id);
          n->kind = Node::call;
          n->fn = id;
          n->args.push_back(sum());
          if (!eat(')')) fail("expected ')'");
          return n;
        }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

template <class T>
T apply(const std::string& fn, const T& x) {
  using std::exp, std::log, std::sqrt, std::sin, std::cos, std::tanh, std::atan, std::sinh,
      std::cosh;
  using tw::exp, tw::log, tw::sqrt, tw::sin, tw::cos, tw::tanh, tw::atan, tw::sinh, tw::cosh;
  if (fn == "exp") return exp(x);
  if (fn == "log") {
    if (!(value_of(x) > 0.0)) throw DomainError("log of non-positive value");
    return log(x);
  }
  if (fn == "sqrt") {
    if (!(value_of(x) > 0.0)) throw DomainError("sqrt of non-positive value");
    return sqrt(x);
  }
  if (fn == "sin") return sin(x);
  if (fn == "cos") return cos(x);
  if (fn == "tan") return sin(x) / cos(x);
  if (fn == "tanh") return tanh(x);
  if (fn == "atan") return atan(x);
  if (fn == "sinh") return sinh(x);
  if (fn == "cosh") return cosh(x);
  // abs
  if (value_of(x) == 0.0) throw DomainError("abs is not differentiable at 0");
  return value_of(x) < 0.0 ? T(-1.0) * x : x;
}

template <class T>
T eval(const Node& n, const std::array<T, Expression::kVarCount>& vars) {
  switch (n.kind) {
    case Node::number: return T(n.value);
    case Node::variable: return vars[n.var];
    case Node::neg: return T(-1.0) * eval(*n.args[0], vars);
    case Node::add: return eval(*n.args[0], vars) + eval(*n.args[1], vars);
    case Node::sub: return eval(*n.args[0], vars) - eval(*n.args[1], vars);
    case Node::mul: return eval(*n.args[0], vars) * eval(*n.args[1], vars);
    case Node::div: {
      T d = eval(*n.args[1], vars);
      if (value_of(d) == 0.0) throw DomainError("division by zero");
      return eval(*n.args[0], vars) / d;
    }
    case Node::pow: {
      const Node& e = *n.args[1];
      T base = eval(*n.args[0], vars);
      if (e.kind == Node::number && e.value == std::round(e.value) && std::abs(e.value) <= 16) {
        const int k = static_cast<int>(e.value);
        T r(1.0);
        for (int i = 0; i < std::abs(k); ++i) r = r * base;
        return k < 0 ? T(1.0) / r : r;
      }
      using std::exp, std::log, tw::exp, tw::log;
      if (!(value_of(base) > 0.0)) throw DomainError("non-integer power of non-positive value");
      return exp(eval(e, vars) * log(base));
    }
    case Node::call: return apply<T>(n.fn, eval(*n.args[0], vars));
  }
  throw UsageError("corrupt expression node");
}

bool mentions(const Node& n, int var) {
  if (n.kind == Node::variable) return n.var == var;
  for (const auto& a : n.args)
    if (mentions(*a, var)) return true;
  return false;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

template <class T>
T Expression::evaluate(const std::array<T, kVarCount>& vars) const {
  return eval<T>(*root_, vars);
}

template double Expression::evaluate<double>(const std::array<double, kVarCount>&) const;
template Jet Expression::evaluate<Jet>(const std::array<Jet, kVarCount>&) const;

double Expression::evaluate_zeta(double z) const {
  std::array<double, kVarCount> v{};
  v[zeta] = z;
  return evaluate(v);
}

bool Expression::uses(Var v) const { return mentions(*root_, v); }

}  // namespace tw
