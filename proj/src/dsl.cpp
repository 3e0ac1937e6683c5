#include "torsion/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "torsion/errors.hpp"

namespace torsion::dsl {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

bool ExprAst::operator==(const ExprAst& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case NodeKind::Constant:
      if (constant != other.constant) return false;
      break;
    case NodeKind::Call:
      if (func != other.func) return false;
      break;
    default:
      break;
  }
  if (children.size() != other.children.size()) return false;
  for (std::size_t i = 0; i < children.size(); ++i)
    if (!(children[i] == other.children[i])) return false;
  return true;
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void syntax_error(const std::string& what, std::size_t at) {
    fail(ErrorCode::SyntaxError, what + " at byte " + std::to_string(at));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  ExprAst parse_expression() {
    ExprAst lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        ExprAst node{NodeKind::Add};
        node.children = {std::move(lhs), parse_term()};
        lhs = std::move(node);
      } else if (eat('-')) {
        ExprAst node{NodeKind::Sub};
        node.children = {std::move(lhs), parse_term()};
        lhs = std::move(node);
      } else {
        return lhs;
      }
    }
  }

  ExprAst parse_term() {
    ExprAst lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        ExprAst node{NodeKind::Mul};
        node.children = {std::move(lhs), parse_unary()};
        lhs = std::move(node);
      } else if (eat('/')) {
        ExprAst node{NodeKind::Div};
        node.children = {std::move(lhs), parse_unary()};
        lhs = std::move(node);
      } else {
        return lhs;
      }
    }
  }

  ExprAst parse_unary() {
    if (eat('-')) {
      ExprAst node{NodeKind::Neg};
      node.children = {parse_unary()};
      return node;
    }
    return parse_power();
  }

  ExprAst parse_power() {
    ExprAst lhs = parse_atom();
    while (eat('^')) {
      ExprAst node{NodeKind::Pow};
      node.children = {std::move(lhs), parse_atom()};
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprAst parse_atom() {
    skip_ws();
    if (pos >= text.size()) syntax_error("unexpected end of expression", pos);
    const char c = text[pos];

    if (c == '(') {
      ++pos;
      ExprAst inner = parse_expression();
      if (!eat(')')) syntax_error("expected ')'", pos);
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text.data() + pos;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) syntax_error("malformed number", pos);
      if (!std::isfinite(value)) syntax_error("constant overflows", pos);
      pos += static_cast<std::size_t>(end - begin);
      ExprAst node{NodeKind::Constant};
      node.constant = value;
      return node;
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos;
      while (pos < text.size() &&
             std::isalnum(static_cast<unsigned char>(text[pos])))
        ++pos;
      const std::string_view name = text.substr(start, pos - start);
      if (name == "r") {
        ExprAst node{NodeKind::Variable};
        return node;
      }
      static const std::pair<std::string_view, Func> kFuncs[] = {
          {"sin", Func::Sin},   {"cos", Func::Cos},   {"sinh", Func::Sinh},
          {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"exp", Func::Exp},
          {"log", Func::Log},   {"sqrt", Func::Sqrt}};
      for (const auto& [fname, func] : kFuncs) {
        if (name == fname) {
          if (!eat('('))
            syntax_error("expected '(' after function name", pos);
          ExprAst node{NodeKind::Call};
          node.func = func;
          node.children = {parse_expression()};
          if (!eat(')')) syntax_error("expected ')'", pos);
          return node;
        }
      }
      fail(ErrorCode::UnknownIdentifier,
           "'" + std::string(name) + "' at byte " + std::to_string(start));
    }

    syntax_error(std::string("unexpected character '") + c + "'", pos);
  }
};

Jet2 eval_node(const ExprAst& node, const Jet2& r) {
  switch (node.kind) {
    case NodeKind::Constant: return Jet2::constant(node.constant);
    case NodeKind::Variable: return r;
    case NodeKind::Add: return eval_node(node.children[0], r) + eval_node(node.children[1], r);
    case NodeKind::Sub: return eval_node(node.children[0], r) - eval_node(node.children[1], r);
    case NodeKind::Mul: return eval_node(node.children[0], r) * eval_node(node.children[1], r);
    case NodeKind::Div: return eval_node(node.children[0], r) / eval_node(node.children[1], r);
    case NodeKind::Neg: return -eval_node(node.children[0], r);
    case NodeKind::Pow: {
      const Jet2 base = eval_node(node.children[0], r);
      const ExprAst& rhs = node.children[1];
      if (rhs.kind == NodeKind::Constant) return pow(base, rhs.constant);
      if (rhs.kind == NodeKind::Neg && rhs.children[0].kind == NodeKind::Constant)
        return pow(base, -rhs.children[0].constant);
      return pow(base, eval_node(rhs, r));
    }
    case NodeKind::Call: {
      const Jet2 arg = eval_node(node.children[0], r);
      switch (node.func) {
        case Func::Sin: return sin(arg);
        case Func::Cos: return cos(arg);
        case Func::Sinh: return sinh(arg);
        case Func::Cosh: return cosh(arg);
        case Func::Tanh: return tanh(arg);
        case Func::Exp: return exp(arg);
        case Func::Log: return log(arg);
        case Func::Sqrt: return sqrt(arg);
      }
      break;
    }
  }
  fail(ErrorCode::DomainError, "malformed expression tree");
}

void print_node(const ExprAst& node, std::string& out) {
  char buf[40];
  switch (node.kind) {
    case NodeKind::Constant:
      std::snprintf(buf, sizeof buf, "%.17g", node.constant);
      out += buf;
      return;
    case NodeKind::Variable:
      out += 'r';
      return;
    case NodeKind::Neg:
      out += "(-";
      print_node(node.children[0], out);
      out += ')';
      return;
    case NodeKind::Call:
      out += func_name(node.func);
      out += '(';
      print_node(node.children[0], out);
      out += ')';
      return;
    default: {
      const char op = node.kind == NodeKind::Add   ? '+'
                      : node.kind == NodeKind::Sub ? '-'
                      : node.kind == NodeKind::Mul ? '*'
                      : node.kind == NodeKind::Div ? '/'
                                                   : '^';
      out += '(';
      print_node(node.children[0], out);
      out += op;
      print_node(node.children[1], out);
      out += ')';
      return;
    }
  }
}

}  // namespace

ExprAst parse(std::string_view text) {
  Parser parser{text};
  parser.skip_ws();
  if (parser.pos >= text.size())
    fail(ErrorCode::SyntaxError, "empty expression at byte 0");
  ExprAst ast = parser.parse_expression();
  parser.skip_ws();
  if (parser.pos != text.size())
    parser.syntax_error("trailing input", parser.pos);
  return ast;
}

std::string pretty_print(const ExprAst& ast) {
  std::string out;
  print_node(ast, out);
  return out;
}

RadialFunction to_radial(const ExprAst& ast, double r_max) {
  auto tree = std::make_shared<const ExprAst>(ast);
  return RadialFunction(
      [tree](double r) { return eval_node(*tree, Jet2::variable(r)); }, r_max);
}

RadialFunction parse_radial(std::string_view text, double r_max) {
  return to_radial(parse(text), r_max);
}

}  // namespace torsion::dsl
