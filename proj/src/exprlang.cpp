#include "radex/exprlang.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "radex/errors.hpp"

namespace radex::expr {
namespace {

enum class Tok { Number, Var, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma,
                 Question, Colon, Le, Lt, Ge, Gt, EqEq, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  double number = 0.0;
  std::string text;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          j = k;
        }
      }
      std::string lit(s.substr(i, j - i));
      if (lit == ".") throw ParseError(i, "number");
      t.kind = Tok::Number;
      t.number = std::strtod(lit.c_str(), nullptr);
      t.text = std::move(lit);
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.text = std::string(s.substr(i, j - i));
      bool is_var = t.text.size() >= 2 && t.text[0] == 'x';
      for (std::size_t k = 1; is_var && k < t.text.size(); ++k)
        is_var = std::isdigit(static_cast<unsigned char>(t.text[k])) != 0;
      t.kind = is_var ? Tok::Var : Tok::Ident;
      i = j;
    } else {
      auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
      switch (ch) {
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case '?': t.kind = Tok::Question; break;
        case ':': t.kind = Tok::Colon; break;
        case '<': t.kind = two('=') ? Tok::Le : Tok::Lt; break;
        case '>': t.kind = two('=') ? Tok::Ge : Tok::Gt; break;
        case '=':
          if (!two('=')) throw ParseError(i, "'=='");
          t.kind = Tok::EqEq;
          break;
        default:
          throw ParseError(i, "a valid token");
      }
      i += (t.kind == Tok::Le || t.kind == Tok::Ge || t.kind == Tok::EqEq) ? 2 : 1;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

struct Builtin {
  const char* name;
  Op op;
  int arity;
};

constexpr Builtin kBuiltins[] = {
    {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1}, {"abs", Op::Abs, 1}, {"ln", Op::Ln, 1},
    {"sqrt", Op::Sqrt, 1}, {"sgn", Op::Sgn, 1}, {"min", Op::Min, 2}, {"max", Op::Max, 2},
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::size_t dim) : toks_(std::move(toks)), dim_(dim) {}

  std::int32_t parse_all() {
    std::int32_t root = parse_expr();
    if (peek().kind != Tok::End) throw ParseError(peek().pos, "operator or end of input");
    return root;
  }

  std::vector<Node> take() { return std::move(nodes_); }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) throw ParseError(peek().pos, what);
  }

  std::int32_t add(Node n) {
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }
  std::int32_t binary(Op op, std::int32_t a, std::int32_t b) {
    Node n;
    n.op = op;
    n.kid[0] = a;
    n.kid[1] = b;
    return add(n);
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) throw ParseError(p.peek().pos, "shallower nesting");
    }
    ~DepthGuard() { --p.depth_; }
  };
  static constexpr int kMaxDepth = 200;

  std::int32_t parse_expr() {
    DepthGuard guard(*this);
    std::int32_t lhs = parse_term();
    for (;;) {
      if (accept(Tok::Plus)) {
        lhs = binary(Op::Add, lhs, parse_term());
      } else if (accept(Tok::Minus)) {
        lhs = binary(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t parse_term() {
    std::int32_t lhs = parse_unary();
    for (;;) {
      if (accept(Tok::Star)) {
        lhs = binary(Op::Mul, lhs, parse_unary());
      } else if (accept(Tok::Slash)) {
        lhs = binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t parse_unary() {
    if (accept(Tok::Minus)) {
      DepthGuard guard(*this);
      Node n;
      n.op = Op::Neg;
      n.kid[0] = parse_unary();
      return add(n);
    }
    return parse_power();
  }

  std::int32_t parse_power() {
    std::int32_t base = parse_atom();
    if (accept(Tok::Caret)) {
      DepthGuard guard(*this);
      return binary(Op::Pow, base, parse_unary());
    }
    return base;
  }

  std::int32_t parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        Node n;
        n.op = Op::Const;
        n.value = t.number;
        return add(n);
      }
      case Tok::Var: {
        next();
        unsigned long idx = std::strtoul(t.text.c_str() + 1, nullptr, 10);
        if (idx < 1 || idx > dim_)
          throw ParseError(t.pos, "variable x1..x" + std::to_string(dim_));
        Node n;
        n.op = Op::Var;
        n.var = static_cast<std::uint32_t>(idx - 1);
        return add(n);
      }
      case Tok::LParen: {
        next();
        std::int32_t e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return parse_call();
      default:
        throw ParseError(t.pos, "number, variable, function call or '('");
    }
  }

  std::int32_t parse_call() {
    const Token& id = next();
    if (id.text == "piecewise") {
      expect(Tok::LParen, "'(' after piecewise");
      std::int32_t lhs = parse_expr();
      Cmp cmp;
      switch (peek().kind) {
        case Tok::Le: cmp = Cmp::Le; break;
        case Tok::Lt: cmp = Cmp::Lt; break;
        case Tok::Ge: cmp = Cmp::Ge; break;
        case Tok::Gt: cmp = Cmp::Gt; break;
        case Tok::EqEq: cmp = Cmp::Eq; break;
        default: throw ParseError(peek().pos, "comparison operator");
      }
      next();
      std::int32_t rhs = parse_expr();
      expect(Tok::Question, "'?'");
      std::int32_t then_e = parse_expr();
      expect(Tok::Colon, "':'");
      std::int32_t else_e = parse_expr();
      expect(Tok::RParen, "')'");
      Node n;
      n.op = Op::Piecewise;
      n.cmp = cmp;
      n.kid[0] = lhs;
      n.kid[1] = rhs;
      n.kid[2] = then_e;
      n.kid[3] = else_e;
      return add(n);
    }
    const Builtin* fn = nullptr;
    for (const auto& b : kBuiltins)
      if (id.text == b.name) fn = &b;
    if (fn == nullptr) throw ParseError(id.pos, "known function name");
    expect(Tok::LParen, "'('");
    Node n;
    n.op = fn->op;
    n.kid[0] = parse_expr();
    if (fn->arity == 2) {
      expect(Tok::Comma, "','");
      n.kid[1] = parse_expr();
    }
    expect(Tok::RParen, "')'");
    return add(n);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::size_t dim_;
  std::vector<Node> nodes_;
};

const char* op_name(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Abs: return "abs";
    case Op::Ln: return "ln";
    case Op::Sqrt: return "sqrt";
    case Op::Sgn: return "sgn";
    case Op::Min: return "min";
    case Op::Max: return "max";
    default: return "?";
  }
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Le: return "<=";
    case Cmp::Lt: return "<";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
    case Cmp::Eq: return "==";
  }
  return "?";
}

}  // namespace

Expr parse(std::string_view source, std::size_t dimension) {
  if (dimension == 0) throw ParseError(0, "dimension >= 1");
  Parser p(lex(source), dimension);
  std::int32_t root = p.parse_all();
  auto nodes = std::make_shared<const std::vector<Node>>(p.take());
  return Expr(std::move(nodes), root, dimension);
}

ExtendedReal eval_expr(const Expr& e, std::span<const double> x) { return e.eval(x); }

ExtendedReal Expr::eval(std::span<const double> x) const {
  if (!nodes_) throw Error("evaluating an empty expression");
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  return ExtendedReal(eval_node(root_, x));
}

double Expr::eval_node(std::int32_t i, std::span<const double> x) const {
  const Node& n = node(i);
  auto fault = [&](const char* reason) -> double {
    std::string text;
    print_node(i, text);
    throw EvaluationFault(text, reason);
  };
  double r = 0.0;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x[n.var];
    case Op::Neg: r = -eval_node(n.kid[0], x); break;
    case Op::Add: r = eval_node(n.kid[0], x) + eval_node(n.kid[1], x); break;
    case Op::Sub: r = eval_node(n.kid[0], x) - eval_node(n.kid[1], x); break;
    case Op::Mul: r = eval_node(n.kid[0], x) * eval_node(n.kid[1], x); break;
    case Op::Div: {
      double a = eval_node(n.kid[0], x);
      double b = eval_node(n.kid[1], x);
      if (b == 0.0) return fault("division by zero");
      r = a / b;
      break;
    }
    case Op::Pow: {
      double a = eval_node(n.kid[0], x);
      double b = eval_node(n.kid[1], x);
      r = (b == 2.0) ? a * a : std::pow(a, b);
      break;
    }
    case Op::Sin: r = std::sin(eval_node(n.kid[0], x)); break;
    case Op::Cos: r = std::cos(eval_node(n.kid[0], x)); break;
    case Op::Abs: r = std::abs(eval_node(n.kid[0], x)); break;
    case Op::Ln: {
      double a = eval_node(n.kid[0], x);
      if (!(a > 0.0)) return fault("logarithm of a nonpositive number");
      r = std::log(a);
      break;
    }
    case Op::Sqrt: {
      double a = eval_node(n.kid[0], x);
      if (a < 0.0) return fault("square root of a negative number");
      r = std::sqrt(a);
      break;
    }
    case Op::Sgn: {
      double a = eval_node(n.kid[0], x);
      r = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
      break;
    }
    case Op::Min: r = std::fmin(eval_node(n.kid[0], x), eval_node(n.kid[1], x)); break;
    case Op::Max: r = std::fmax(eval_node(n.kid[0], x), eval_node(n.kid[1], x)); break;
    case Op::Piecewise: {
      double a = eval_node(n.kid[0], x);
      double b = eval_node(n.kid[1], x);
      bool take = false;
      switch (n.cmp) {
        case Cmp::Le: take = a <= b; break;
        case Cmp::Lt: take = a < b; break;
        case Cmp::Ge: take = a >= b; break;
        case Cmp::Gt: take = a > b; break;
        case Cmp::Eq: take = a == b; break;
      }
      return eval_node(take ? n.kid[2] : n.kid[3], x);
    }
  }
  if (std::isnan(r)) return fault("result is not a number");
  return r;
}

void Expr::print_node(std::int32_t i, std::string& out) const {
  const Node& n = node(i);
  switch (n.op) {
    case Op::Const: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Op::Var:
      out += "x" + std::to_string(n.var + 1);
      return;
    case Op::Neg:
      out += "(-";
      print_node(n.kid[0], out);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      out += "(";
      print_node(n.kid[0], out);
      out += " ";
      out += op_name(n.op);
      out += " ";
      print_node(n.kid[1], out);
      out += ")";
      return;
    case Op::Min:
    case Op::Max:
      out += op_name(n.op);
      out += "(";
      print_node(n.kid[0], out);
      out += ", ";
      print_node(n.kid[1], out);
      out += ")";
      return;
    case Op::Piecewise:
      out += "piecewise(";
      print_node(n.kid[0], out);
      out += " ";
      out += cmp_name(n.cmp);
      out += " ";
      print_node(n.kid[1], out);
      out += " ? ";
      print_node(n.kid[2], out);
      out += " : ";
      print_node(n.kid[3], out);
      out += ")";
      return;
    default:
      out += op_name(n.op);
      out += "(";
      print_node(n.kid[0], out);
      out += ")";
      return;
  }
}

std::string Expr::to_string() const {
  std::string out;
  if (nodes_) print_node(root_, out);
  return out;
}

}  // namespace radex::expr
