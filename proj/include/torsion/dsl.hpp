#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "torsion/radial.hpp"

namespace torsion::dsl {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Func { Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt };

const char* func_name(Func f);

// Expression tree over {constant, r, +, -, *, /, ^, unary -, sin, cos, sinh,
// cosh, tanh, exp, log, sqrt}. Value semantics; structural equality.
struct ExprAst {
  NodeKind kind = NodeKind::Constant;
  double constant = 0.0;
  Func func = Func::Sin;
  std::vector<ExprAst> children;

  bool operator==(const ExprAst& other) const;
};

// Grammar: ^  binds tightest (left-associative), then unary minus, then * /,
// then + -. No implicit multiplication.
//
// Errors: SyntaxError (message carries the byte offset), UnknownIdentifier.
ExprAst parse(std::string_view text);

// Canonical fully-parenthesized form; parse(pretty_print(ast)) == ast.
std::string pretty_print(const ExprAst& ast);

// Evaluation with derivative propagation through the tree.
// DomainError on log/sqrt of negative values at evaluation time.
RadialFunction to_radial(const ExprAst& ast,
                         double r_max = std::numeric_limits<double>::infinity());

RadialFunction parse_radial(std::string_view text,
                            double r_max = std::numeric_limits<double>::infinity());

}  // namespace torsion::dsl
