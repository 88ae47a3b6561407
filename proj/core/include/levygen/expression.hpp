#pragma once

#include <memory>
#include <string>
#include <vector>

#include "levygen/types.hpp"

namespace levygen {

/// Small arithmetic expression used for parameter callables (gamma(x), m(x),
/// densities n(y), user test functions).
///
/// Grammar: numbers, + - * / ^, parentheses, functions
/// sin cos tan exp log sqrt abs tanh atan pow(a,b) min(a,b) max(a,b),
/// constants pi and e. Variables refer to the main argument v and an optional
/// frequency argument k:
///   x, y     first component of v        x1..x8, y1..y8   components of v
///   r        |v|                          k                |xi|
///   k1..k8   components of xi
class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& text);
  static Expression constant(double c);

  double operator()(const Vector& v) const;
  double eval(const Vector& v, const Vector* xi) const;

  const std::string& text() const { return text_; }
  bool is_constant() const;
  /// Largest component index referenced (0 if none); r and k count as 0.
  int max_component() const { return max_component_; }
  bool uses_frequency() const { return uses_frequency_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  int max_component_ = 0;
  bool uses_frequency_ = false;
};

}  // namespace levygen
