#pragma once

// Small arithmetic expression language for user-supplied functions such as
// h(zeta). Grammar: + - * / ^, unary minus, parentheses, numbers, the
// constants pi and e, the functions exp log sqrt sin cos tan tanh atan
// sinh cosh abs, and the variables zeta, alpha, x1..x4.

#include <array>
#include <memory>
#include <string>

#include "tw/jets.hpp"

namespace tw {

class Expression {
 public:
  // Throws InputError with the offending position on malformed input.
  static Expression parse(const std::string& text);

  enum Var { zeta = 0, alpha, x1, x2, x3, x4, kVarCount };

  template <class T>
  T evaluate(const std::array<T, kVarCount>& vars) const;

  double evaluate_zeta(double z) const;
  bool uses(Var v) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

extern template double Expression::evaluate<double>(const std::array<double, Expression::kVarCount>&) const;
extern template Jet Expression::evaluate<Jet>(const std::array<Jet, Expression::kVarCount>&) const;

}  // namespace tw
