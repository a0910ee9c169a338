#include "conehol/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace conehol {

namespace {

using Kind = ExprNode::Kind;
using NodePtr = std::shared_ptr<const ExprNode>;

struct FuncEntry {
  std::string_view name;
  Func func;
};

constexpr std::array<FuncEntry, 11> kFuncs{{{"sin", Func::Sin},
                                            {"cos", Func::Cos},
                                            {"tan", Func::Tan},
                                            {"sinh", Func::Sinh},
                                            {"cosh", Func::Cosh},
                                            {"tanh", Func::Tanh},
                                            {"exp", Func::Exp},
                                            {"log", Func::Log},
                                            {"sqrt", Func::Sqrt},
                                            {"atan", Func::Atan},
                                            {"artanh", Func::Artanh}}};

NodePtr make_node(Kind k, std::size_t off, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->offset = off;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ >= s_.size()) {
        out.push_back({Tok::End, pos_, {}});
        return out;
      }
      const char c = s_[pos_];
      const std::size_t start = pos_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
          ++pos_;
        out.push_back({Tok::Ident, start, std::string(s_.substr(start, pos_ - start))});
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          case '/': k = Tok::Slash; break;
          case '^': k = Tok::Caret; break;
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case ',': k = Tok::Comma; break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        ++pos_;
        out.push_back({k, start, std::string(1, c)});
      }
    }
  }

 private:
  Token number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        pos_ = p;
      } else {
        throw ParseError("malformed exponent", pos_);
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    errno = 0;
    const double v = std::strtod(text.c_str(), nullptr);
    if (errno == ERANGE && std::isinf(v)) throw ParseError("number out of range", start);
    Token t{Tok::Number, start, text};
    t.number = v;
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  NodePtr run() {
    NodePtr e = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected token '" + peek().text + "'", peek().offset);
    return e;
  }

 private:
  const Token& peek() const { return t_[i_]; }
  const Token& next() { return t_[i_++]; }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      NodePtr rhs = term();
      lhs = make_node(op.kind == Tok::Plus ? Kind::Add : Kind::Sub, op.offset, lhs, rhs);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& op = next();
      NodePtr rhs = unary();
      lhs = make_node(op.kind == Tok::Star ? Kind::Mul : Kind::Div, op.offset, lhs, rhs);
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().kind == Tok::Minus) {
      const Token& op = next();
      return make_node(Kind::Negate, op.offset, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (peek().kind == Tok::Caret) {
      const Token& op = next();
      return make_node(Kind::Pow, op.offset, base, unary());
    }
    return base;
  }

  NodePtr atom() {
    const Token& tok = next();
    switch (tok.kind) {
      case Tok::Number: {
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Constant;
        n->value = tok.number;
        n->offset = tok.offset;
        return n;
      }
      case Tok::Ident: {
        if (peek().kind == Tok::LParen) {
          const auto it = std::find_if(kFuncs.begin(), kFuncs.end(),
                                       [&](const FuncEntry& f) { return f.name == tok.text; });
          if (it == kFuncs.end()) throw ParseError("unknown function '" + tok.text + "'", tok.offset);
          next();
          NodePtr arg = expr();
          if (peek().kind == Tok::Comma)
            throw ParseError("function '" + tok.text + "' takes exactly one argument", peek().offset);
          expect(Tok::RParen, "expected ')'");
          auto n = std::make_shared<ExprNode>();
          n->kind = Kind::Call;
          n->func = it->func;
          n->lhs = std::move(arg);
          n->offset = tok.offset;
          return n;
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Variable;
        n->name = tok.text;
        n->offset = tok.offset;
        return n;
      }
      case Tok::LParen: {
        NodePtr e = expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::End:
        throw ParseError("unexpected end of input", tok.offset);
      default:
        throw ParseError("unexpected token '" + tok.text + "'", tok.offset);
    }
  }

  void expect(Tok k, const char* msg) {
    if (peek().kind != k) throw ParseError(msg, peek().offset);
    next();
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

void collect_vars(const ExprNode& n, std::set<std::string>& out) {
  if (n.kind == Kind::Variable) out.insert(n.name);
  if (n.lhs) collect_vars(*n.lhs, out);
  if (n.rhs) collect_vars(*n.rhs, out);
}

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Negate: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep literals lexable: the grammar has no inf/nan tokens.
  return s;
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const ExprNode& n, std::string& out) {
  const int p = precedence(n);
  switch (n.kind) {
    case Kind::Constant: out += format_number(n.value); return;
    case Kind::Variable: out += n.name; return;
    case Kind::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Negate:
      out += '-';
      print_child(*n.lhs, precedence(*n.lhs) < p, out);
      return;
    case Kind::Pow:
      print_child(*n.lhs, precedence(*n.lhs) <= p, out);
      out += '^';
      print_child(*n.rhs, precedence(*n.rhs) < 3, out);
      return;
    default: {
      const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*' : '/';
      print_child(*n.lhs, precedence(*n.lhs) < p, out);
      out += op;
      print_child(*n.rhs, precedence(*n.rhs) <= p, out);
      return;
    }
  }
}

bool has_variables(const ExprNode& n) {
  if (n.kind == Kind::Variable) return true;
  return (n.lhs && has_variables(*n.lhs)) || (n.rhs && has_variables(*n.rhs));
}

// Integer exponent if the exponent subtree is variable-free and integral.
bool literal_integer(const ExprNode& n, long& k) {
  if (has_variables(n)) return false;
  double v;
  try {
    v = eval_scalar(Expr(std::make_shared<ExprNode>(n)), {});
  } catch (const Error&) {
    return false;
  }
  if (std::isfinite(v) && std::floor(v) == v && std::abs(v) < 1e6) {
    k = static_cast<long>(v);
    return true;
  }
  return false;
}

template <class T>
T apply(Func f, const T& x) {
  switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tan: return tan(x);
    case Func::Sinh: return sinh(x);
    case Func::Cosh: return cosh(x);
    case Func::Tanh: return tanh(x);
    case Func::Exp: return exp(x);
    case Func::Log: return log(x);
    case Func::Sqrt: return sqrt(x);
    case Func::Atan: return atan(x);
    case Func::Artanh: return artanh(x);
  }
  return x;
}

double checked_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}

}  // namespace

std::string_view func_name(Func f) {
  for (const auto& e : kFuncs)
    if (e.func == f) return e.name;
  return "?";
}

Expr::Expr() : root_(Expr::constant(0.0).root_) {}

Expr Expr::constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Constant;
  n->value = v;
  return Expr(std::move(n));
}

std::vector<std::string> Expr::variables() const {
  std::set<std::string> s;
  collect_vars(*root_, s);
  return {s.begin(), s.end()};
}

std::string Expr::to_string() const { return pretty_print(*this); }

Expr parse(std::string_view text) {
  Lexer lx(text);
  Parser p(lx.run());
  return Expr(p.run());
}

std::string pretty_print(const Expr& e) {
  std::string out;
  print_node(e.root(), out);
  return out;
}

BoundExpr::BoundExpr(const Expr& e, const std::vector<std::string>& names) {
  nvars_ = static_cast<int>(names.size());
  int depth = 0;
  auto emit = [&](Op op, int delta) {
    ops_.push_back(op);
    depth += delta;
    max_depth_ = std::max(max_depth_, depth);
  };
  // Post-order traversal emitting a stack program.
  auto walk = [&](auto&& self, const ExprNode& n) -> void {
    switch (n.kind) {
      case Kind::Constant: emit({Op::Code::Const, n.value, 0, 0, Func::Sin}, 1); return;
      case Kind::Variable: {
        const auto it = std::find(names.begin(), names.end(), n.name);
        if (it == names.end()) throw UnboundVariable("unbound variable '" + n.name + "'");
        constant_ = false;
        emit({Op::Code::Var, 0.0, static_cast<int>(it - names.begin()), 0, Func::Sin}, 1);
        return;
      }
      case Kind::Negate:
        self(self, *n.lhs);
        emit({Op::Code::Neg, 0.0, 0, 0, Func::Sin}, 0);
        return;
      case Kind::Call:
        self(self, *n.lhs);
        emit({Op::Code::Call, 0.0, 0, 0, n.func}, 0);
        return;
      case Kind::Pow: {
        long k = 0;
        self(self, *n.lhs);
        if (literal_integer(*n.rhs, k)) {
          emit({Op::Code::PowInt, 0.0, 0, k, Func::Sin}, 0);
        } else {
          self(self, *n.rhs);
          emit({Op::Code::Pow, 0.0, 0, 0, Func::Sin}, -1);
        }
        return;
      }
      default: {
        self(self, *n.lhs);
        self(self, *n.rhs);
        const Op::Code c = n.kind == Kind::Add   ? Op::Code::Add
                           : n.kind == Kind::Sub ? Op::Code::Sub
                           : n.kind == Kind::Mul ? Op::Code::Mul
                                                 : Op::Code::Div;
        emit({c, 0.0, 0, 0, Func::Sin}, -1);
        return;
      }
    }
  };
  walk(walk, e.root());
  if (constant_) {
    const std::vector<double> zeros(names.size(), 0.0);
    try {
      constant_value_ = run<double>(zeros);
    } catch (const DomainError&) {
      constant_ = false;  // report the error at evaluation time instead
    }
  }
}

template <class T>
T BoundExpr::run(std::span<const T> x) const {
  if (static_cast<int>(x.size()) < nvars_) throw DimensionError("too few variables supplied to expression");
  constexpr int kInline = 24;
  std::array<T, kInline> inline_stack{};
  std::vector<T> heap;
  T* st = inline_stack.data();
  if (max_depth_ > kInline) {
    heap.resize(static_cast<std::size_t>(max_depth_));
    st = heap.data();
  }
  int sp = 0;
  for (const Op& op : ops_) {
    switch (op.code) {
      case Op::Code::Const: st[sp++] = T(op.value); break;
      case Op::Code::Var: st[sp++] = x[static_cast<std::size_t>(op.slot)]; break;
      case Op::Code::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Code::Call: st[sp - 1] = apply(op.func, st[sp - 1]); break;
      case Op::Code::PowInt: st[sp - 1] = pow_int(st[sp - 1], op.power); break;
      case Op::Code::Pow:
        st[sp - 2] = pow_real(st[sp - 2], st[sp - 1]);
        --sp;
        break;
      case Op::Code::Add:
        st[sp - 2] = st[sp - 2] + st[sp - 1];
        --sp;
        break;
      case Op::Code::Sub:
        st[sp - 2] = st[sp - 2] - st[sp - 1];
        --sp;
        break;
      case Op::Code::Mul:
        st[sp - 2] = st[sp - 2] * st[sp - 1];
        --sp;
        break;
      case Op::Code::Div:
        if constexpr (std::is_same_v<T, double>) {
          st[sp - 2] = checked_div(st[sp - 2], st[sp - 1]);
        } else {
          st[sp - 2] = st[sp - 2] / st[sp - 1];
        }
        --sp;
        break;
    }
  }
  return st[0];
}

double BoundExpr::eval(std::span<const double> x) const { return run<double>(x); }
Jet1 BoundExpr::eval(std::span<const Jet1> x) const { return run<Jet1>(x); }
Jet2 BoundExpr::eval(std::span<const Jet2> x) const { return run<Jet2>(x); }

double eval_scalar(const Expr& e, const std::map<std::string, double>& env) {
  std::vector<std::string> names;
  std::vector<double> vals;
  for (const auto& [k, v] : env) {
    names.push_back(k);
    vals.push_back(v);
  }
  return BoundExpr(e, names).eval(std::span<const double>(vals));
}

Jet2 eval_jet2(const Expr& e, const std::map<std::string, Jet2>& env) {
  std::vector<std::string> names;
  std::vector<Jet2> vals;
  for (const auto& [k, v] : env) {
    names.push_back(k);
    vals.push_back(v);
  }
  return BoundExpr(e, names).eval(std::span<const Jet2>(vals));
}

}  // namespace conehol

namespace conehol {

namespace {

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::Constant && n->value == v; }

NodePtr cnode(double v) { return Expr::constant(v).root_ptr(); }

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Constant && b->kind == Kind::Constant) return cnode(a->value + b->value);
  return make_node(Kind::Add, 0, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (a->kind == Kind::Constant) return cnode(-a->value);
  if (a->kind == Kind::Negate) return a->lhs;
  return make_node(Kind::Negate, 0, std::move(a));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(std::move(b));
  if (a->kind == Kind::Constant && b->kind == Kind::Constant) return cnode(a->value - b->value);
  return make_node(Kind::Sub, 0, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return cnode(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Constant && b->kind == Kind::Constant) return cnode(a->value * b->value);
  return make_node(Kind::Mul, 0, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return cnode(0.0);
  if (is_const(b, 1.0)) return a;
  return make_node(Kind::Div, 0, std::move(a), std::move(b));
}

NodePtr pw(NodePtr a, NodePtr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return cnode(1.0);
  return make_node(Kind::Pow, 0, std::move(a), std::move(b));
}

NodePtr call(Func f, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

bool depends_on(const ExprNode& n, const std::string& var) {
  if (n.kind == Kind::Variable) return n.name == var;
  return (n.lhs && depends_on(*n.lhs, var)) || (n.rhs && depends_on(*n.rhs, var));
}

NodePtr d(const NodePtr& n, const std::string& var) {
  if (!depends_on(*n, var)) return cnode(0.0);
  switch (n->kind) {
    case Kind::Constant: return cnode(0.0);
    case Kind::Variable: return cnode(1.0);
    case Kind::Negate: return neg(d(n->lhs, var));
    case Kind::Add: return add(d(n->lhs, var), d(n->rhs, var));
    case Kind::Sub: return sub(d(n->lhs, var), d(n->rhs, var));
    case Kind::Mul: return add(mul(d(n->lhs, var), n->rhs), mul(n->lhs, d(n->rhs, var)));
    case Kind::Div:
      return div(sub(mul(d(n->lhs, var), n->rhs), mul(n->lhs, d(n->rhs, var))), pw(n->rhs, cnode(2.0)));
    case Kind::Pow: {
      const NodePtr& a = n->lhs;
      const NodePtr& b = n->rhs;
      if (!depends_on(*b, var)) {
        // b * a^(b-1) * a'
        return mul(mul(b, pw(a, sub(b, cnode(1.0)))), d(a, var));
      }
      // a^b * (b' log a + b a' / a)
      return mul(n, add(mul(d(b, var), call(Func::Log, a)), div(mul(b, d(a, var)), a)));
    }
    case Kind::Call: {
      const NodePtr& u = n->lhs;
      const NodePtr du = d(u, var);
      NodePtr outer;
      switch (n->func) {
        case Func::Sin: outer = call(Func::Cos, u); break;
        case Func::Cos: outer = neg(call(Func::Sin, u)); break;
        case Func::Tan: outer = add(cnode(1.0), pw(n, cnode(2.0))); break;
        case Func::Sinh: outer = call(Func::Cosh, u); break;
        case Func::Cosh: outer = call(Func::Sinh, u); break;
        case Func::Tanh: outer = sub(cnode(1.0), pw(n, cnode(2.0))); break;
        case Func::Exp: outer = n; break;
        case Func::Log: outer = div(cnode(1.0), u); break;
        case Func::Sqrt: outer = div(cnode(0.5), n); break;
        case Func::Atan: outer = div(cnode(1.0), add(cnode(1.0), pw(u, cnode(2.0)))); break;
        case Func::Artanh: outer = div(cnode(1.0), sub(cnode(1.0), pw(u, cnode(2.0)))); break;
      }
      return mul(outer, du);
    }
  }
  return cnode(0.0);
}

NodePtr subst(const NodePtr& n, const std::map<std::string, Expr>& repl) {
  if (n->kind == Kind::Variable) {
    const auto it = repl.find(n->name);
    return it == repl.end() ? n : it->second.root_ptr();
  }
  if (!n->lhs) return n;
  auto c = std::make_shared<ExprNode>(*n);
  c->lhs = subst(n->lhs, repl);
  if (n->rhs) c->rhs = subst(n->rhs, repl);
  return c;
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) { return Expr(d(e.root_ptr(), var)); }

Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl) { return Expr(subst(e.root_ptr(), repl)); }

}  // namespace conehol
