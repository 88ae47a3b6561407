#include "levygen/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace levygen {

enum class Op {
  Num, Comp, Norm, FreqNorm, FreqComp,
  Add, Sub, Mul, Div, Pow, Neg,
  Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Tanh, Atan, Min, Max
};

struct Expression::Node {
  Op op;
  double value = 0.0;
  int index = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_num(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

NodePtr make_var(Op op, int index) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->index = index;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

  int max_component = 0;
  bool uses_frequency = false;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("", "expression \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) fail("bad number");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return make_num(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id = s_.substr(start, pos_ - start);

    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') return call(id);

    if (id == "pi") return make_num(kPi);
    if (id == "e") return make_num(std::exp(1.0));
    if (id == "x" || id == "y") {
      max_component = std::max(max_component, 1);
      return make_var(Op::Comp, 0);
    }
    if (id == "r") return make_var(Op::Norm, 0);
    if (id == "k") {
      uses_frequency = true;
      return make_var(Op::FreqNorm, 0);
    }
    if (id.size() == 2 && (id[0] == 'x' || id[0] == 'y' || id[0] == 'k') && id[1] >= '1' && id[1] <= '8') {
      int idx = id[1] - '1';
      if (id[0] == 'k') {
        uses_frequency = true;
        return make_var(Op::FreqComp, idx);
      }
      max_component = std::max(max_component, idx + 1);
      return make_var(Op::Comp, idx);
    }
    fail("unknown identifier '" + id + "'");
  }

  NodePtr call(const std::string& id) {
    expect('(');
    NodePtr a = expr();
    NodePtr b;
    if (id == "pow" || id == "min" || id == "max") {
      expect(',');
      b = expr();
    }
    expect(')');
    if (id == "sin") return make(Op::Sin, a);
    if (id == "cos") return make(Op::Cos, a);
    if (id == "tan") return make(Op::Tan, a);
    if (id == "exp") return make(Op::Exp, a);
    if (id == "log") return make(Op::Log, a);
    if (id == "sqrt") return make(Op::Sqrt, a);
    if (id == "abs") return make(Op::Abs, a);
    if (id == "tanh") return make(Op::Tanh, a);
    if (id == "atan") return make(Op::Atan, a);
    if (id == "pow") return make(Op::Pow, a, b);
    if (id == "min") return make(Op::Min, a, b);
    if (id == "max") return make(Op::Max, a, b);
    fail("unknown function '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& n, const Vector& v, const Vector* xi) {
  switch (n.op) {
    case Op::Num: return n.value;
    case Op::Comp: return n.index < v.size() ? v[n.index] : 0.0;
    case Op::Norm: return v.norm();
    case Op::FreqNorm: return xi ? xi->norm() : 0.0;
    case Op::FreqComp: return xi && n.index < xi->size() ? (*xi)[n.index] : 0.0;
    default: break;
  }
  double a = eval_node(*n.a, v, xi);
  switch (n.op) {
    case Op::Neg: return -a;
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Tan: return std::tan(a);
    case Op::Exp: return std::exp(a);
    case Op::Log: return std::log(a);
    case Op::Sqrt: return std::sqrt(a);
    case Op::Abs: return std::abs(a);
    case Op::Tanh: return std::tanh(a);
    case Op::Atan: return std::atan(a);
    default: break;
  }
  double b = eval_node(*n.b, v, xi);
  switch (n.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return std::pow(a, b);
    case Op::Min: return std::min(a, b);
    case Op::Max: return std::max(a, b);
    default: return 0.0;
  }
}

bool node_constant(const Expression::Node& n) {
  switch (n.op) {
    case Op::Num: return true;
    case Op::Comp:
    case Op::Norm:
    case Op::FreqNorm:
    case Op::FreqComp: return false;
    default: break;
  }
  return node_constant(*n.a) && (!n.b || node_constant(*n.b));
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.run();
  e.text_ = text;
  e.max_component_ = p.max_component;
  e.uses_frequency_ = p.uses_frequency;
  return e;
}

Expression Expression::constant(double c) {
  Expression e;
  e.root_ = make_num(c);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, c);
  e.text_.assign(buf, res.ptr);
  return e;
}

double Expression::operator()(const Vector& v) const { return eval(v, nullptr); }

double Expression::eval(const Vector& v, const Vector* xi) const {
  if (!root_) throw ContractError("empty expression evaluated");
  return eval_node(*root_, v, xi);
}

bool Expression::is_constant() const { return root_ && node_constant(*root_); }

}  // namespace levygen
