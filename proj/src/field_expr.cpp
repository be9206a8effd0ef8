#include "wcsf/field_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "wcsf/error.hpp"

namespace wcsf {

namespace {

enum class Op { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Log };

struct Node {
  Op op;
  double value = 0.0;
  int var = 0;
  std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse, "bad field expression '" + std::string(s_) + "': " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+'))
        lhs = make(Op::Add, std::move(lhs), product());
      else if (accept('-'))
        lhs = make(Op::Sub, std::move(lhs), product());
      else
        return lhs;
    }
  }

  // Juxtaposition binds like '*' when a number is followed by a name or '(' (3x, 2cos(r)).
  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      if (accept('*'))
        lhs = make(Op::Mul, std::move(lhs), unary());
      else if (accept('/'))
        lhs = make(Op::Div, std::move(lhs), unary());
      else if (lhs->op == Op::Num && pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '('))
        lhs = make(Op::Mul, std::move(lhs), unary());
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
    NodePtr base = atom();
    if (accept('^')) return make(Op::Pow, std::move(base), unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = sum();
      if (!accept(')')) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - first);
    auto n = make(Op::Num);
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id(s_.substr(start, pos_ - start));

    if (id == "pi") {
      auto n = make(Op::Num);
      n->value = std::numbers::pi;
      return n;
    }
    if (const auto v = variable(id)) {
      auto n = make(Op::Var);
      n->var = *v;
      return n;
    }
    Op op;
    if (id == "sin") op = Op::Sin;
    else if (id == "cos") op = Op::Cos;
    else if (id == "exp") op = Op::Exp;
    else if (id == "sqrt") op = Op::Sqrt;
    else if (id == "log") op = Op::Log;
    else fail("unknown name '" + id + "'");

    if (accept('(')) {
      NodePtr arg = sum();
      if (!accept(')')) fail("missing ')'");
      return make(op, std::move(arg));
    }
    if (op != Op::Sin && op != Op::Cos) fail("'" + id + "' needs an argument");
    return make(op, make(Op::Var));
  }

  std::optional<int> variable(const std::string& id) const {
    if (dim_ == 1 && (id == "x" || id == "r" || id == "u" || id == "x1")) return 0;
    if (dim_ == 2) {
      if (id == "x1" || id == "x") return 0;
      if (id == "x2" || id == "y") return 1;
    }
    return std::nullopt;
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Num: return n.value;
    case Op::Var: return x[n.var];
    case Op::Add: return eval(*n.a, x) + eval(*n.b, x);
    case Op::Sub: return eval(*n.a, x) - eval(*n.b, x);
    case Op::Mul: return eval(*n.a, x) * eval(*n.b, x);
    case Op::Div: return eval(*n.a, x) / eval(*n.b, x);
    case Op::Pow: return std::pow(eval(*n.a, x), eval(*n.b, x));
    case Op::Neg: return -eval(*n.a, x);
    case Op::Sin: return std::sin(eval(*n.a, x));
    case Op::Cos: return std::cos(eval(*n.a, x));
    case Op::Exp: return std::exp(eval(*n.a, x));
    case Op::Sqrt: return std::sqrt(eval(*n.a, x));
    case Op::Log: return std::log(eval(*n.a, x));
  }
  return 0.0;
}

bool has_var(const Node& n) {
  if (n.op == Op::Var) return true;
  return (n.a && has_var(*n.a)) || (n.b && has_var(*n.b));
}

std::optional<double> constant_value(const Node& n) {
  if (has_var(n)) return std::nullopt;
  const double x[2]{0.0, 0.0};
  return eval(n, x);
}

struct Linear {
  double k[2]{0.0, 0.0};
  double offset = 0.0;
};

std::optional<Linear> linear(const Node& n) {
  if (const auto c = constant_value(n)) {
    Linear l;
    l.offset = *c;
    return l;
  }
  switch (n.op) {
    case Op::Var: {
      Linear l;
      l.k[n.var] = 1.0;
      return l;
    }
    case Op::Neg: {
      auto l = linear(*n.a);
      if (!l) return std::nullopt;
      l->k[0] = -l->k[0];
      l->k[1] = -l->k[1];
      l->offset = -l->offset;
      return l;
    }
    case Op::Add:
    case Op::Sub: {
      auto a = linear(*n.a), b = linear(*n.b);
      if (!a || !b) return std::nullopt;
      const double s = n.op == Op::Add ? 1.0 : -1.0;
      for (int i = 0; i < 2; ++i) a->k[i] += s * b->k[i];
      a->offset += s * b->offset;
      return a;
    }
    case Op::Mul: {
      const auto ca = constant_value(*n.a);
      const auto cb = constant_value(*n.b);
      if (!ca && !cb) return std::nullopt;
      auto l = linear(ca ? *n.b : *n.a);
      if (!l) return std::nullopt;
      const double c = ca ? *ca : *cb;
      for (double& k : l->k) k *= c;
      l->offset *= c;
      return l;
    }
    default: return std::nullopt;
  }
}

// Exact modes for linear combinations of cos/sin with integer frequencies and zero phase.
std::optional<std::vector<FourierMode>> exact_modes(const Node& n) {
  if (const auto c = constant_value(n)) return std::vector<FourierMode>{FourierMode{{0, 0}, *c, 0.0}};
  switch (n.op) {
    case Op::Sin:
    case Op::Cos: {
      const auto l = linear(*n.a);
      if (!l || l->offset != 0.0) return std::nullopt;
      FourierMode m;
      for (int i = 0; i < 2; ++i) {
        if (l->k[i] != std::round(l->k[i])) return std::nullopt;
        m.k[i] = static_cast<int>(l->k[i]);
      }
      (n.op == Op::Cos ? m.cos : m.sin) = 1.0;
      return std::vector<FourierMode>{m};
    }
    case Op::Neg: {
      auto a = exact_modes(*n.a);
      if (a)
        for (auto& m : *a) m.cos = -m.cos, m.sin = -m.sin;
      return a;
    }
    case Op::Add:
    case Op::Sub: {
      auto a = exact_modes(*n.a), b = exact_modes(*n.b);
      if (!a || !b) return std::nullopt;
      for (auto m : *b) {
        if (n.op == Op::Sub) m.cos = -m.cos, m.sin = -m.sin;
        a->push_back(m);
      }
      return a;
    }
    case Op::Mul:
    case Op::Div: {
      const auto cb = constant_value(*n.b);
      const auto ca = n.op == Op::Mul ? constant_value(*n.a) : std::nullopt;
      if (!ca && !cb) return std::nullopt;
      auto modes = exact_modes(ca ? *n.b : *n.a);
      if (!modes) return std::nullopt;
      const double c = ca ? *ca : (n.op == Op::Div ? 1.0 / *cb : *cb);
      for (auto& m : *modes) m.cos *= c, m.sin *= c;
      return modes;
    }
    default: return std::nullopt;
  }
}

}  // namespace

FourierField parse_field(std::string_view text, int dim, int bandwidth) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidArgument, "field dimension must be 1 or 2");
  const NodePtr root = Parser(text, dim).parse();
  if (auto modes = exact_modes(*root)) return FourierField::from_modes(dim, std::move(*modes));
  const Node& r = *root;
  return FourierField::project(dim, [&r](std::span<const double> x) { return eval(r, x); }, bandwidth);
}

}  // namespace wcsf
