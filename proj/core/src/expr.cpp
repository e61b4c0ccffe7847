#include "gcoup/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace gcoup {

namespace {

enum class Op {
  number, variable,
  add, sub, mul, div, pow, neg,
  lt, le, gt, ge, eq,
  fn_exp, fn_ln, fn_abs, fn_sqrt, fn_max, fn_min,
  dot, cond
};

const char* op_name(Op op) {
  switch (op) {
    case Op::fn_exp: return "exp";
    case Op::fn_ln: return "ln";
    case Op::fn_abs: return "abs";
    case Op::fn_sqrt: return "sqrt";
    case Op::fn_max: return "max";
    case Op::fn_min: return "min";
    case Op::dot: return "dot";
    case Op::cond: return "if";
    default: return "?";
  }
}

}  // namespace

struct ExprFn::Node {
  Op op;
  double number = 0.0;                  // op == number (may be +inf)
  std::size_t var = 0;                  // op == variable
  std::vector<std::size_t> group_a, group_b;  // op == dot, resolved indices
  std::string dot_a, dot_b;                   // op == dot, names as written
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const ExprFn::Node>;

struct Token {
  enum Kind { num, ident, op, end } kind;
  std::string text;
  double value = 0.0;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }
  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    cur_.offset = pos_;
    if (pos_ >= s_.size()) {
      cur_.kind = Token::end;
      cur_.text.clear();
      return;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      double v = 0.0;
      const char* begin = s_.data() + pos_;
      const char* end = s_.data() + s_.size();
      auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc{}) throw ParseError("bad number literal", pos_);
      cur_.kind = Token::num;
      cur_.value = v;
      cur_.text.assign(begin, res.ptr);
      pos_ += static_cast<std::size_t>(res.ptr - begin);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = pos_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      cur_.kind = Token::ident;
      cur_.text = std::string(s_.substr(pos_, j - pos_));
      pos_ = j;
      return;
    }
    // operators, longest first
    static const char* two[] = {"<=", ">=", "=="};
    for (const char* t : two) {
      if (s_.compare(pos_, 2, t) == 0) {
        cur_.kind = Token::op;
        cur_.text = t;
        pos_ += 2;
        return;
      }
    }
    static const char singles[] = "+-*/^()<>,";
    for (char t : singles) {
      if (c == t) {
        cur_.kind = Token::op;
        cur_.text = std::string(1, c);
        ++pos_;
        return;
      }
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Token cur_;
};

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars)
      : lex_(text), vars_(vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) index_[vars[i]] = i;
  }

  NodePtr run() {
    NodePtr e = comparison();
    if (lex_.peek().kind != Token::end)
      throw ParseError("unexpected trailing input", lex_.peek().offset);
    return e;
  }

 private:
  static NodePtr make(Op op, std::vector<NodePtr> kids) {
    auto n = std::make_shared<ExprFn::Node>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
  }

  NodePtr comparison() {
    NodePtr lhs = additive();
    const Token& t = lex_.peek();
    if (t.kind == Token::op &&
        (t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" || t.text == "==")) {
      Token op = lex_.take();
      NodePtr rhs = additive();
      Op k = op.text == "<"    ? Op::lt
             : op.text == "<=" ? Op::le
             : op.text == ">"  ? Op::gt
             : op.text == ">=" ? Op::ge
                               : Op::eq;
      // comparisons do not chain
      const Token& nxt = lex_.peek();
      if (nxt.kind == Token::op &&
          (nxt.text == "<" || nxt.text == "<=" || nxt.text == ">" || nxt.text == ">=" ||
           nxt.text == "=="))
        throw ParseError("comparisons cannot be chained", nxt.offset);
      return make(k, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr additive() {
    NodePtr e = term();
    while (lex_.peek().kind == Token::op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      Token op = lex_.take();
      NodePtr r = term();
      e = make(op.text == "+" ? Op::add : Op::sub, {e, r});
    }
    return e;
  }

  NodePtr term() {
    NodePtr e = unary();
    while (lex_.peek().kind == Token::op &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      Token op = lex_.take();
      NodePtr r = unary();
      e = make(op.text == "*" ? Op::mul : Op::div, {e, r});
    }
    return e;
  }

  NodePtr unary() {
    if (lex_.peek().kind == Token::op && lex_.peek().text == "-") {
      lex_.take();
      return make(Op::neg, {unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (lex_.peek().kind == Token::op && lex_.peek().text == "^") {
      lex_.take();
      NodePtr expo = unary();  // right-assoc, allows a^-b and a^b^c
      return make(Op::pow, {base, expo});
    }
    return base;
  }

  NodePtr primary() {
    Token t = lex_.peek();
    if (t.kind == Token::num) {
      lex_.take();
      auto n = std::make_shared<ExprFn::Node>();
      n->op = Op::number;
      n->number = t.value;
      return n;
    }
    if (t.kind == Token::op && t.text == "(") {
      lex_.take();
      NodePtr e = comparison();
      expect(")");
      return e;
    }
    if (t.kind == Token::ident) {
      lex_.take();
      if (t.text == "inf") {
        auto n = std::make_shared<ExprFn::Node>();
        n->op = Op::number;
        n->number = std::numeric_limits<double>::infinity();
        return n;
      }
      if (lex_.peek().kind == Token::op && lex_.peek().text == "(")
        return call(t);
      auto it = index_.find(t.text);
      if (it == index_.end())
        throw ParseError("unknown identifier '" + t.text + "'", t.offset);
      auto n = std::make_shared<ExprFn::Node>();
      n->op = Op::variable;
      n->var = it->second;
      return n;
    }
    throw ParseError("syntax error", t.offset);
  }

  NodePtr call(const Token& name) {
    expect("(");
    if (name.text == "dot") {
      Token a = expect_ident();
      expect(",");
      Token b = expect_ident();
      expect(")");
      auto n = std::make_shared<ExprFn::Node>();
      n->op = Op::dot;
      n->group_a = resolve_group(a);
      n->group_b = resolve_group(b);
      n->dot_a = a.text;
      n->dot_b = b.text;
      if (n->group_a.size() != n->group_b.size())
        throw ParseError("dot group lengths differ", name.offset);
      return n;
    }
    std::vector<NodePtr> args;
    if (!(lex_.peek().kind == Token::op && lex_.peek().text == ")")) {
      args.push_back(comparison());
      while (lex_.peek().kind == Token::op && lex_.peek().text == ",") {
        lex_.take();
        args.push_back(comparison());
      }
    }
    expect(")");
    auto arity_error = [&](std::size_t want) {
      if (args.size() != want)
        throw ParseError("function '" + name.text + "' expects " + std::to_string(want) +
                             " argument(s), got " + std::to_string(args.size()),
                         name.offset);
    };
    if (name.text == "exp") { arity_error(1); return make(Op::fn_exp, std::move(args)); }
    if (name.text == "ln") { arity_error(1); return make(Op::fn_ln, std::move(args)); }
    if (name.text == "abs") { arity_error(1); return make(Op::fn_abs, std::move(args)); }
    if (name.text == "sqrt") { arity_error(1); return make(Op::fn_sqrt, std::move(args)); }
    if (name.text == "max") { arity_error(2); return make(Op::fn_max, std::move(args)); }
    if (name.text == "min") { arity_error(2); return make(Op::fn_min, std::move(args)); }
    if (name.text == "if") { arity_error(3); return make(Op::cond, std::move(args)); }
    throw ParseError("unknown function '" + name.text + "'", name.offset);
  }

  std::vector<std::size_t> resolve_group(const Token& name) {
    // Exact variable name wins; otherwise collect prefix+index matches in
    // ascending index order.
    auto it = index_.find(name.text);
    if (it != index_.end()) return {it->second};
    std::map<long, std::size_t> by_index;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const std::string& v = vars_[i];
      if (v.size() <= name.text.size() || v.compare(0, name.text.size(), name.text) != 0)
        continue;
      const std::string tail = v.substr(name.text.size());
      if (tail.empty() ||
          !std::all_of(tail.begin(), tail.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        continue;
      by_index[std::stol(tail)] = i;
    }
    if (by_index.empty())
      throw ParseError("no variables match group '" + name.text + "'", name.offset);
    std::vector<std::size_t> out;
    for (auto& [k, i] : by_index) out.push_back(i);
    return out;
  }

  Token expect_ident() {
    Token t = lex_.take();
    if (t.kind != Token::ident) throw ParseError("expected identifier", t.offset);
    return t;
  }

  void expect(const char* text) {
    Token t = lex_.take();
    if (t.kind != Token::op || t.text != text)
      throw ParseError(std::string("expected '") + text + "'", t.offset);
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
  std::map<std::string, std::size_t> index_;
};

double check_no_nan(double v, const char* what) {
  if (std::isnan(v)) throw EvalError(std::string("domain error: ") + what);
  return v;
}

ExtReal eval_node(const ExprFn::Node& n, std::span<const double> env) {
  switch (n.op) {
    case Op::number: return ExtReal(n.number);
    case Op::variable: return ExtReal(env[n.var]);
    case Op::neg: return ExtReal(-eval_node(*n.kids[0], env).raw());
    case Op::add: {
      const double a = eval_node(*n.kids[0], env).raw();
      const double b = eval_node(*n.kids[1], env).raw();
      return ExtReal(check_no_nan(a + b, "inf + -inf"));
    }
    case Op::sub: {
      const double a = eval_node(*n.kids[0], env).raw();
      const double b = eval_node(*n.kids[1], env).raw();
      return ExtReal(check_no_nan(a - b, "inf - inf"));
    }
    case Op::mul: {
      const double a = eval_node(*n.kids[0], env).raw();
      const double b = eval_node(*n.kids[1], env).raw();
      return ExtReal(check_no_nan(a * b, "0 * inf"));
    }
    case Op::div: {
      const double a = eval_node(*n.kids[0], env).raw();
      const double b = eval_node(*n.kids[1], env).raw();
      return ExtReal(check_no_nan(a / b, "0/0 or inf/inf"));
    }
    case Op::pow: {
      const double a = eval_node(*n.kids[0], env).raw();
      const double b = eval_node(*n.kids[1], env).raw();
      return ExtReal(check_no_nan(std::pow(a, b), "pow out of domain"));
    }
    case Op::lt: return ExtReal(eval_node(*n.kids[0], env) < eval_node(*n.kids[1], env) ? 1.0 : 0.0);
    case Op::le: return ExtReal(eval_node(*n.kids[0], env) <= eval_node(*n.kids[1], env) ? 1.0 : 0.0);
    case Op::gt: return ExtReal(eval_node(*n.kids[0], env) > eval_node(*n.kids[1], env) ? 1.0 : 0.0);
    case Op::ge: return ExtReal(eval_node(*n.kids[0], env) >= eval_node(*n.kids[1], env) ? 1.0 : 0.0);
    case Op::eq: return ExtReal(eval_node(*n.kids[0], env) == eval_node(*n.kids[1], env) ? 1.0 : 0.0);
    case Op::fn_exp: return ExtReal(std::exp(eval_node(*n.kids[0], env).raw()));
    case Op::fn_ln: {
      const double a = eval_node(*n.kids[0], env).raw();
      if (a <= 0.0) return ExtReal::neg_inf();  // ln of nonpositive
      return ExtReal(std::log(a));
    }
    case Op::fn_abs: return ExtReal(std::abs(eval_node(*n.kids[0], env).raw()));
    case Op::fn_sqrt: {
      const double a = eval_node(*n.kids[0], env).raw();
      return ExtReal(check_no_nan(std::sqrt(a), "sqrt of negative"));
    }
    case Op::fn_max: {
      const ExtReal a = eval_node(*n.kids[0], env);
      const ExtReal b = eval_node(*n.kids[1], env);
      return a >= b ? a : b;
    }
    case Op::fn_min: {
      const ExtReal a = eval_node(*n.kids[0], env);
      const ExtReal b = eval_node(*n.kids[1], env);
      return a <= b ? a : b;
    }
    case Op::dot: {
      double s = 0.0;
      for (std::size_t i = 0; i < n.group_a.size(); ++i)
        s += env[n.group_a[i]] * env[n.group_b[i]];
      return ExtReal(s);
    }
    case Op::cond: {
      // lazy branches: only the selected branch is evaluated
      const ExtReal c = eval_node(*n.kids[0], env);
      return c.raw() != 0.0 ? eval_node(*n.kids[1], env) : eval_node(*n.kids[2], env);
    }
  }
  throw EvalError("corrupt expression node");
}

void print_node(const ExprFn::Node& n, const std::vector<std::string>& vars, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print_node(*n.kids[0], vars, out);
    out += op;
    print_node(*n.kids[1], vars, out);
    out += ')';
  };
  switch (n.op) {
    case Op::number: {
      if (std::isinf(n.number)) {
        out += "inf";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Op::variable: out += vars[n.var]; return;
    case Op::neg:
      out += "(-";
      print_node(*n.kids[0], vars, out);
      out += ')';
      return;
    case Op::add: bin("+"); return;
    case Op::sub: bin("-"); return;
    case Op::mul: bin("*"); return;
    case Op::div: bin("/"); return;
    case Op::pow: bin("^"); return;
    case Op::lt: bin("<"); return;
    case Op::le: bin("<="); return;
    case Op::gt: bin(">"); return;
    case Op::ge: bin(">="); return;
    case Op::eq: bin("=="); return;
    case Op::dot:
      out += "dot(";
      out += n.dot_a;
      out += ",";
      out += n.dot_b;
      out += ")";
      return;
    default: {
      out += op_name(n.op);
      out += '(';
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) out += ',';
        print_node(*n.kids[i], vars, out);
      }
      out += ')';
      return;
    }
  }
}

int depth_node(const ExprFn::Node& n) {
  int d = 0;
  for (const auto& k : n.kids) d = std::max(d, depth_node(*k));
  return d + 1;
}

bool same_node(const ExprFn::Node& a, const ExprFn::Node& b) {
  if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
  if (a.op == Op::number) {
    // bit-compare so that +inf == +inf and -0 != 0 distinctions are stable
    return a.number == b.number || (std::isinf(a.number) && std::isinf(b.number) &&
                                    std::signbit(a.number) == std::signbit(b.number));
  }
  if (a.op == Op::variable && a.var != b.var) return false;
  if (a.op == Op::dot && (a.group_a != b.group_a || a.group_b != b.group_b)) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same_node(*a.kids[i], *b.kids[i])) return false;
  return true;
}

}  // namespace

ExprFn ExprFn::parse(std::string_view text, const std::vector<std::string>& variables) {
  ExprFn fn;
  fn.vars_ = variables;
  Parser p(text, variables);
  fn.root_ = p.run();
  return fn;
}

ExtReal ExprFn::eval(std::span<const double> env) const {
  if (env.size() != vars_.size()) throw EvalError("environment arity mismatch");
  return eval_node(*root_, env);
}

std::string ExprFn::print() const {
  std::string out;
  print_node(*root_, vars_, out);
  return out;
}

int ExprFn::depth() const { return depth_node(*root_); }

bool ExprFn::same_tree(const ExprFn& other) const { return same_node(*root_, *other.root_); }

}  // namespace gcoup
