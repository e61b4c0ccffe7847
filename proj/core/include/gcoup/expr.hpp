#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcoup/extreal.hpp"

namespace gcoup {

// Parsed scalar expression over named variables.
//
// Grammar: numbers, variables, + - * / ^ (right-assoc), unary -, exp, ln,
// abs, sqrt, max, min, dot, comparisons (< <= > >= ==, value 1/0), lazy
// if(cond, a, b) and the literal `inf`. Arithmetic follows IEEE on extended
// reals except that any NaN-producing form (inf - inf, 0*inf, 0/0, ...) is
// an evaluation error, and ln of a nonpositive argument yields -inf.
//
// dot(a, b) contracts two variable groups: a bare name selects every
// declared variable with that prefix followed by an index (x -> x1, x2, ...)
// or, if the name is itself declared, just that variable.
class ExprFn {
 public:
  static ExprFn parse(std::string_view text, const std::vector<std::string>& variables);

  ExtReal eval(std::span<const double> env) const;
  std::size_t arity() const { return vars_.size(); }
  const std::vector<std::string>& variables() const { return vars_; }

  // Canonical fully parenthesized form; parsing it back yields an identical tree.
  std::string print() const;
  int depth() const;
  bool same_tree(const ExprFn& other) const;

  struct Node;  // opaque; defined with the parser

 private:
  std::shared_ptr<const Node> root_;
  std::vector<std::string> vars_;
};

}  // namespace gcoup
