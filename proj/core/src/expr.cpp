#include "saddlecheck/expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <unordered_set>

namespace saddle::rigor {

namespace {

bool is_binary(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div; }

const std::shared_ptr<ExprPool>& common_pool(const Expr& a, const Expr& b) {
  if (a.pool() != b.pool()) throw std::invalid_argument("expressions from different pools");
  return a.pool();
}

Expr make(const std::shared_ptr<ExprPool>& pool, Node n) { return Expr(pool, pool->intern(n)); }

Expr make_const(const std::shared_ptr<ExprPool>& pool, double v, const Interval& enc) {
  Node n;
  n.op = Op::Const;
  n.value = v;
  n.enclosure = enc;
  return make(pool, n);
}

bool is_const_value(const Expr& e, double v) {
  double c = 0.0;
  return e.is_const(&c) && c == v && e.node().enclosure.is_point();
}

bool exact_point(const Expr& e) { return e.node().op == Op::Const && e.node().enclosure.is_point(); }

// Exactness of a rounded binary result of exact operands.
bool exact_sum(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb) == 0.0 && std::isfinite(s);
}
bool exact_product(double a, double b, double p) { return std::fma(a, b, -p) == 0.0 && std::isfinite(p); }
bool exact_quotient(double a, double b, double q) { return std::fma(q, b, -a) == 0.0 && std::isfinite(q); }

Expr fold_binary(Op op, const Expr& a, const Expr& b) {
  const auto& pool = a.pool();
  const double x = a.node().value, y = b.node().value;
  const Interval& X = a.node().enclosure;
  const Interval& Y = b.node().enclosure;
  double v = 0.0;
  Interval enc;
  bool exact = exact_point(a) && exact_point(b);
  switch (op) {
    case Op::Add:
      v = x + y;
      enc = X + Y;
      exact = exact && exact_sum(x, y, v);
      break;
    case Op::Sub:
      v = x - y;
      enc = X - Y;
      exact = exact && exact_sum(x, -y, v);
      break;
    case Op::Mul:
      v = x * y;
      enc = X * Y;
      exact = exact && exact_product(x, y, v);
      break;
    case Op::Div:
      v = x / y;
      enc = X / Y;
      exact = exact && exact_quotient(x, y, v);
      break;
    default:
      throw std::logic_error("fold_binary: not a binary op");
  }
  return make_const(pool, v, exact ? Interval(v) : enc);
}

Expr binary(Op op, const Expr& a, const Expr& b) {
  const auto& pool = common_pool(a, b);
  if (a.node().op == Op::Const && b.node().op == Op::Const) return fold_binary(op, a, b);
  switch (op) {
    case Op::Add:
      if (is_const_value(a, 0.0)) return b;
      if (is_const_value(b, 0.0)) return a;
      if (b.node().op == Op::Neg) return binary(Op::Sub, a, b.child(0));
      break;
    case Op::Sub:
      if (is_const_value(b, 0.0)) return a;
      if (is_const_value(a, 0.0)) return -b;
      if (a.id() == b.id()) return constant(pool, 0.0);
      if (b.node().op == Op::Neg) return binary(Op::Add, a, b.child(0));
      break;
    case Op::Mul:
      if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return constant(pool, 0.0);
      if (is_const_value(a, 1.0)) return b;
      if (is_const_value(b, 1.0)) return a;
      if (is_const_value(a, -1.0)) return -b;
      if (is_const_value(b, -1.0)) return -a;
      if (a.id() == b.id()) return sqr(a);
      break;
    case Op::Div:
      if (is_const_value(b, 1.0)) return a;
      if (is_const_value(a, 0.0)) return constant(pool, 0.0);
      break;
    default:
      break;
  }
  Node n;
  n.op = op;
  n.a = a.id();
  n.b = b.id();
  // Canonical operand order for commutative ops.
  if ((op == Op::Add || op == Op::Mul) && n.a > n.b) std::swap(n.a, n.b);
  return make(pool, n);
}

double point_unary(Op op, double x, double c) {
  switch (op) {
    case Op::Neg: return -x;
    case Op::Sqr: return x * x;
    case Op::Sqrt: return std::sqrt(x);
    case Op::Exp: return std::exp(x);
    case Op::Log: return std::log(x);
    case Op::Tanh: return std::tanh(x);
    case Op::Sinh: return std::sinh(x);
    case Op::Cosh: return std::cosh(x);
    case Op::Sech2: return scalar::sech2(x);
    case Op::Xcsch: return scalar::xcsch(x);
    case Op::Langevin: return scalar::langevin(x);
    case Op::LangevinD: return scalar::langevin_d(x);
    case Op::PowC: return std::pow(x, c);
    default: throw std::logic_error("point_unary: not a unary op");
  }
}

Interval interval_unary(Op op, const Interval& x, double c) {
  switch (op) {
    case Op::Neg: return -x;
    case Op::Sqr: return sqr(x);
    case Op::Sqrt: return sqrt(x);
    case Op::Exp: return exp(x);
    case Op::Log: return log(x);
    case Op::Tanh: return tanh(x);
    case Op::Sinh: return sinh(x);
    case Op::Cosh: return cosh(x);
    case Op::Sech2: return sech2(x);
    case Op::Xcsch: return xcsch(x);
    case Op::Langevin: return langevin(x);
    case Op::LangevinD: return langevin_d(x);
    case Op::PowC: return powc(x, c);
    default: throw std::logic_error("interval_unary: not a unary op");
  }
}

Expr unary(Op op, const Expr& x, double c = 0.0) {
  const auto& pool = x.pool();
  if (x.node().op == Op::Const) {
    const double v = point_unary(op, x.node().value, c);
    Interval enc = interval_unary(op, x.node().enclosure, c);
    const double x0 = x.node().value;
    if (exact_point(x) && (op == Op::Neg || (op == Op::Sqr && exact_product(x0, x0, v)))) enc = Interval(v);
    return make_const(pool, v, enc);
  }
  if (op == Op::Neg && x.node().op == Op::Neg) return x.child(0);
  Node n;
  n.op = op;
  n.a = x.id();
  n.value = c;
  return make(pool, n);
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Neg: return "neg";
    case Op::Sqr: return "sqr";
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Tanh: return "tanh";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Sech2: return "sech2";
    case Op::Xcsch: return "xcsch";
    case Op::Langevin: return "langevin";
    case Op::LangevinD: return "langevin_d";
    case Op::PowC: return "pow";
  }
  return "?";
}

bool ExprPool::Key::operator==(const Key& o) const {
  return op == o.op && a == o.a && b == o.b && var == o.var && std::memcmp(&value, &o.value, sizeof value) == 0 &&
         std::memcmp(&lo, &o.lo, sizeof lo) == 0 && std::memcmp(&hi, &o.hi, sizeof hi) == 0;
}

std::size_t ExprPool::KeyHash::operator()(const Key& k) const {
  auto mix = [](std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); };
  std::size_t h = static_cast<std::size_t>(k.op);
  h = mix(h, std::hash<int>()(k.a));
  h = mix(h, std::hash<int>()(k.b));
  h = mix(h, std::hash<int>()(k.var));
  std::uint64_t bits[3];
  std::memcpy(&bits[0], &k.value, 8);
  std::memcpy(&bits[1], &k.lo, 8);
  std::memcpy(&bits[2], &k.hi, 8);
  for (auto b : bits) h = mix(h, std::hash<std::uint64_t>()(b));
  return h;
}

int ExprPool::intern(const Node& n) {
  const Key key{n.op, n.a, n.b, n.var, n.value, n.enclosure.lo, n.enclosure.hi};
  const auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(n);
  index_.emplace(key, id);
  return id;
}

Expr Expr::child(int which) const {
  const Node& n = node();
  const int c = which == 0 ? n.a : n.b;
  if (c < 0) throw std::out_of_range("Expr::child: no such operand");
  return Expr(pool_, c);
}

bool Expr::is_const(double* v) const {
  if (node().op != Op::Const) return false;
  if (v) *v = node().value;
  return true;
}

std::size_t Expr::dag_size() const {
  std::unordered_set<int> seen;
  std::vector<int> stack{id_};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    const Node& n = pool_->node(id);
    if (n.a >= 0) stack.push_back(n.a);
    if (n.b >= 0) stack.push_back(n.b);
  }
  return seen.size();
}

std::string Expr::to_string(const std::vector<std::string>& var_names) const {
  const Node& n = node();
  switch (n.op) {
    case Op::Const: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return buf;
    }
    case Op::Var:
      return n.var < static_cast<int>(var_names.size()) ? var_names[static_cast<std::size_t>(n.var)]
                                                        : "x" + std::to_string(n.var);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return "(" + child(0).to_string(var_names) + " " + op_name(n.op) + " " + child(1).to_string(var_names) + ")";
    case Op::Neg:
      return "-" + child(0).to_string(var_names);
    case Op::PowC: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      return "pow(" + child(0).to_string(var_names) + ", " + buf + ")";
    }
    default:
      return std::string(op_name(n.op)) + "(" + child(0).to_string(var_names) + ")";
  }
}

Expr constant(const std::shared_ptr<ExprPool>& pool, double v) { return make_const(pool, v, Interval(v)); }

Expr real(const std::shared_ptr<ExprPool>& pool, double v) { return make_const(pool, v, Interval::around(v)); }

Expr real(const std::shared_ptr<ExprPool>& pool, const Interval& enclosure, double point) {
  if (!enclosure.contains(point)) throw std::invalid_argument("real: point outside its enclosure");
  return make_const(pool, point, enclosure);
}

Expr variable(const std::shared_ptr<ExprPool>& pool, int index) {
  if (index < 0 || index >= kMaxVars) throw std::out_of_range("variable index out of range");
  Node n;
  n.op = Op::Var;
  n.var = index;
  return make(pool, n);
}

Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return unary(Op::Neg, a); }
Expr operator+(const Expr& a, double b) { return a + constant(a.pool(), b); }
Expr operator+(double a, const Expr& b) { return constant(b.pool(), a) + b; }
Expr operator-(const Expr& a, double b) { return a - constant(a.pool(), b); }
Expr operator-(double a, const Expr& b) { return constant(b.pool(), a) - b; }
Expr operator*(const Expr& a, double b) { return a * constant(a.pool(), b); }
Expr operator*(double a, const Expr& b) { return constant(b.pool(), a) * b; }
Expr operator/(const Expr& a, double b) { return a / constant(a.pool(), b); }
Expr operator/(double a, const Expr& b) { return constant(b.pool(), a) / b; }

Expr sqr(const Expr& x) { return unary(Op::Sqr, x); }
Expr sqrt(const Expr& x) { return unary(Op::Sqrt, x); }
Expr exp(const Expr& x) { return unary(Op::Exp, x); }
Expr log(const Expr& x) { return unary(Op::Log, x); }
Expr tanh(const Expr& x) { return unary(Op::Tanh, x); }
Expr sinh(const Expr& x) { return unary(Op::Sinh, x); }
Expr cosh(const Expr& x) { return unary(Op::Cosh, x); }
Expr sech2(const Expr& x) { return unary(Op::Sech2, x); }
Expr xcsch(const Expr& x) { return unary(Op::Xcsch, x); }
Expr langevin(const Expr& x) { return unary(Op::Langevin, x); }
Expr langevin_d(const Expr& x) { return unary(Op::LangevinD, x); }
Expr pow(const Expr& x, double c) {
  if (c == 1.0) return x;
  if (c == 0.0) return constant(x.pool(), 1.0);
  return unary(Op::PowC, x, c);
}

Expr diff(const Expr& root, int index) {
  const auto& pool = root.pool();
  std::unordered_map<int, Expr> memo;
  std::function<Expr(const Expr&)> d = [&](const Expr& e) -> Expr {
    const auto it = memo.find(e.id());
    if (it != memo.end()) return it->second;
    const Node n = e.node();
    Expr r;
    switch (n.op) {
      case Op::Const: r = constant(pool, 0.0); break;
      case Op::Var: r = constant(pool, n.var == index ? 1.0 : 0.0); break;
      case Op::Add: r = d(e.child(0)) + d(e.child(1)); break;
      case Op::Sub: r = d(e.child(0)) - d(e.child(1)); break;
      case Op::Mul: r = d(e.child(0)) * e.child(1) + e.child(0) * d(e.child(1)); break;
      case Op::Div: r = (d(e.child(0)) - e * d(e.child(1))) / e.child(1); break;
      case Op::Neg: r = -d(e.child(0)); break;
      case Op::Sqr: r = 2.0 * e.child(0) * d(e.child(0)); break;
      case Op::Sqrt: r = d(e.child(0)) / (2.0 * e); break;
      case Op::Exp: r = e * d(e.child(0)); break;
      case Op::Log: r = d(e.child(0)) / e.child(0); break;
      case Op::Tanh: r = sech2(e.child(0)) * d(e.child(0)); break;
      case Op::Sinh: r = cosh(e.child(0)) * d(e.child(0)); break;
      case Op::Cosh: r = sinh(e.child(0)) * d(e.child(0)); break;
      case Op::Sech2: r = -2.0 * tanh(e.child(0)) * e * d(e.child(0)); break;
      case Op::Xcsch: r = -(e * langevin(e.child(0))) * d(e.child(0)); break;
      case Op::Langevin: r = langevin_d(e.child(0)) * d(e.child(0)); break;
      case Op::LangevinD: throw std::logic_error("diff: second derivative of the Langevin function is not in the basis");
      case Op::PowC: r = n.value * pow(e.child(0), n.value - 1.0) * d(e.child(0)); break;
    }
    memo.emplace(e.id(), r);
    return r;
  };
  return d(root);
}

Expr substitute(const Expr& root, const std::map<int, Expr>& replacement) {
  const auto& pool = root.pool();
  std::unordered_map<int, Expr> memo;
  std::function<Expr(const Expr&)> sub = [&](const Expr& e) -> Expr {
    const auto it = memo.find(e.id());
    if (it != memo.end()) return it->second;
    const Node n = e.node();
    Expr r;
    if (n.op == Op::Const) {
      r = e;
    } else if (n.op == Op::Var) {
      const auto rep = replacement.find(n.var);
      r = rep == replacement.end() ? e : rep->second;
      if (r.pool() != pool) throw std::invalid_argument("substitute: replacement from a different pool");
    } else if (is_binary(n.op)) {
      r = binary(n.op, sub(e.child(0)), sub(e.child(1)));
    } else {
      r = unary(n.op, sub(e.child(0)), n.value);
    }
    memo.emplace(e.id(), r);
    return r;
  };
  return sub(root);
}

// ---------------------------------------------------------------------------
// Tape

namespace {

template <int N>
struct DualN {
  Interval v;
  std::array<Interval, N> g{};
};

template <int N>
DualN<N> operator+(const DualN<N>& a, const DualN<N>& b) {
  DualN<N> r;
  r.v = a.v + b.v;
  for (int i = 0; i < N; ++i) r.g[i] = a.g[i] + b.g[i];
  return r;
}

template <int N>
DualN<N> operator-(const DualN<N>& a, const DualN<N>& b) {
  DualN<N> r;
  r.v = a.v - b.v;
  for (int i = 0; i < N; ++i) r.g[i] = a.g[i] - b.g[i];
  return r;
}

template <int N>
DualN<N> operator*(const DualN<N>& a, const DualN<N>& b) {
  DualN<N> r;
  r.v = a.v * b.v;
  for (int i = 0; i < N; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  return r;
}

template <int N>
DualN<N> operator/(const DualN<N>& a, const DualN<N>& b) {
  DualN<N> r;
  r.v = a.v / b.v;
  for (int i = 0; i < N; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) / b.v;
  return r;
}

template <int N>
DualN<N> chain(const DualN<N>& x, const Interval& value, const Interval& slope) {
  DualN<N> r;
  r.v = value;
  for (int i = 0; i < N; ++i) r.g[i] = slope * x.g[i];
  return r;
}

template <int N>
DualN<N> dual_unary(Op op, const DualN<N>& x, double c) {
  const Interval& X = x.v;
  switch (op) {
    case Op::Neg: {
      DualN<N> r;
      r.v = -X;
      for (int i = 0; i < N; ++i) r.g[i] = -x.g[i];
      return r;
    }
    case Op::Sqr: return chain(x, sqr(X), Interval(2.0) * X);
    case Op::Sqrt: {
      const Interval v = sqrt(X);
      return chain(x, v, Interval(0.5) / v);
    }
    case Op::Exp: {
      const Interval v = exp(X);
      return chain(x, v, v);
    }
    case Op::Log: return chain(x, log(X), Interval(1.0) / X);
    case Op::Tanh: return chain(x, tanh(X), sech2(X));
    case Op::Sinh: return chain(x, sinh(X), cosh(X));
    case Op::Cosh: return chain(x, cosh(X), sinh(X));
    case Op::Sech2: {
      const Interval v = sech2(X);
      return chain(x, v, Interval(-2.0) * tanh(X) * v);
    }
    case Op::Xcsch: {
      const Interval v = xcsch(X);
      return chain(x, v, -(v * langevin(X)));
    }
    case Op::Langevin: return chain(x, langevin(X), langevin_d(X));
    case Op::LangevinD: throw std::logic_error("gradient of the Langevin derivative is not in the basis");
    case Op::PowC: return chain(x, powc(X, c), Interval(c) * powc(X, c - 1.0));
    default: throw std::logic_error("dual_unary: not a unary op");
  }
}

template <class T>
T apply_binary(Op op, const T& a, const T& b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    default: throw std::logic_error("apply_binary: not a binary op");
  }
}

template <class T>
T apply_unary(Op op, const T& x, double c) {
  if constexpr (std::is_same_v<T, double>) {
    return point_unary(op, x, c);
  } else if constexpr (std::is_same_v<T, Interval>) {
    return interval_unary(op, x, c);
  } else {
    return dual_unary(op, x, c);
  }
}

}  // namespace

Tape::Tape(const Expr& e, int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > kMaxVars) throw std::invalid_argument("Tape: unsupported variable count");
  const auto& pool = *e.pool();
  std::unordered_map<int, int> slot;
  // Iterative post-order traversal.
  std::vector<std::pair<int, bool>> stack{{e.id(), false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (slot.count(id)) continue;
    const Node& n = pool.node(id);
    if (!expanded) {
      stack.push_back({id, true});
      if (n.b >= 0 && !slot.count(n.b)) stack.push_back({n.b, false});
      if (n.a >= 0 && !slot.count(n.a)) stack.push_back({n.a, false});
      continue;
    }
    if (n.op == Op::Var && n.var >= num_vars) throw std::invalid_argument("Tape: variable index exceeds num_vars");
    Instr in{n.op, n.a >= 0 ? slot.at(n.a) : -1, n.b >= 0 ? slot.at(n.b) : -1, n.var, n.value, n.enclosure};
    slot.emplace(id, static_cast<int>(code_.size()));
    code_.push_back(in);
  }
}

template <class T, class Lift>
T Tape::run(Lift&& lift) const {
  std::vector<T> reg(code_.size());
  for (std::size_t k = 0; k < code_.size(); ++k) {
    const Instr& in = code_[k];
    if (in.op == Op::Const || in.op == Op::Var)
      reg[k] = lift(in);
    else if (is_binary(in.op))
      reg[k] = apply_binary<T>(in.op, reg[static_cast<std::size_t>(in.a)], reg[static_cast<std::size_t>(in.b)]);
    else
      reg[k] = apply_unary<T>(in.op, reg[static_cast<std::size_t>(in.a)], in.value);
  }
  return reg.back();
}

double Tape::eval(const double* x) const {
  return run<double>([&](const Instr& in) { return in.op == Op::Const ? in.value : x[in.var]; });
}

Interval Tape::eval(const Interval* x) const {
  return run<Interval>([&](const Instr& in) { return in.op == Op::Const ? in.enclosure : x[in.var]; });
}

namespace {

template <int N>
DualInterval widen(const DualN<N>& d) {
  DualInterval out;
  out.v = d.v;
  for (int i = 0; i < N; ++i) out.g[static_cast<std::size_t>(i)] = d.g[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace

DualInterval Tape::eval_grad(const Interval* x) const {
  auto go = [&](auto tag) {
    constexpr int N = decltype(tag)::value;
    using D = DualN<N>;
    return widen<N>(run<D>([&](const Instr& in) {
      D d;
      if (in.op == Op::Const) {
        d.v = in.enclosure;
      } else {
        d.v = x[in.var];
        d.g[static_cast<std::size_t>(in.var)] = Interval(1.0);
      }
      return d;
    }));
  };
  switch (num_vars_) {
    case 0:
    case 1: return go(std::integral_constant<int, 1>{});
    case 2: return go(std::integral_constant<int, 2>{});
    case 3: return go(std::integral_constant<int, 3>{});
    default: return go(std::integral_constant<int, 4>{});
  }
}

}  // namespace saddle::rigor
