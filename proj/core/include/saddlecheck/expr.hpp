#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "saddlecheck/interval.hpp"

namespace saddle::rigor {

enum class Op : std::uint8_t {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Sqr,
  Sqrt,
  Exp,
  Log,
  Tanh,
  Sinh,
  Cosh,
  Sech2,
  Xcsch,
  Langevin,
  LangevinD,
  PowC,
};

const char* op_name(Op op);

struct Node {
  Op op = Op::Const;
  int a = -1;
  int b = -1;
  int var = -1;
  double value = 0.0;     // constant value or pow exponent
  Interval enclosure{};   // constant enclosure
};

// Hash-consed node store; structurally equal subexpressions share one id.
class ExprPool {
 public:
  int intern(const Node& n);
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Key {
    Op op;
    int a, b, var;
    double value, lo, hi;
    bool operator==(const Key& o) const;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  std::vector<Node> nodes_;
  std::unordered_map<Key, int, KeyHash> index_;
};

class Expr {
 public:
  Expr() = default;
  Expr(std::shared_ptr<ExprPool> pool, int id) : pool_(std::move(pool)), id_(id) {}

  const std::shared_ptr<ExprPool>& pool() const { return pool_; }
  int id() const { return id_; }
  const Node& node() const { return pool_->node(id_); }
  bool valid() const { return pool_ != nullptr; }
  Expr child(int which) const;

  // Folded constant value if the node is a constant.
  bool is_const(double* v = nullptr) const;

  // Number of distinct nodes reachable from this expression.
  std::size_t dag_size() const;

  std::string to_string(const std::vector<std::string>& var_names = {}) const;

 private:
  std::shared_ptr<ExprPool> pool_;
  int id_ = -1;
};

// Leaf construction. Exact constants are taken at face value; real() encloses a
// constant whose double representation carries one rounding.
Expr constant(const std::shared_ptr<ExprPool>& pool, double v);
Expr real(const std::shared_ptr<ExprPool>& pool, double v);
Expr real(const std::shared_ptr<ExprPool>& pool, const Interval& enclosure, double point);
Expr variable(const std::shared_ptr<ExprPool>& pool, int index);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator/(const Expr& a, double b);
Expr operator/(double a, const Expr& b);

Expr sqr(const Expr& x);
Expr sqrt(const Expr& x);
Expr exp(const Expr& x);
Expr log(const Expr& x);
Expr tanh(const Expr& x);
Expr sinh(const Expr& x);
Expr cosh(const Expr& x);
Expr sech2(const Expr& x);
Expr xcsch(const Expr& x);
Expr langevin(const Expr& x);
Expr langevin_d(const Expr& x);
// x^c for a positive base, evaluated as exp(c log x).
Expr pow(const Expr& x, double c);

// Symbolic partial derivative with respect to variable `index`.
Expr diff(const Expr& e, int index);

// Replace variables by expressions (missing entries are left in place).
Expr substitute(const Expr& e, const std::map<int, Expr>& replacement);

// Gradient accumulator used by mean-value enclosures.
inline constexpr int kMaxVars = 4;

struct DualInterval {
  Interval v;
  std::array<Interval, kMaxVars> g{};
};

// Linearized instruction list for repeated evaluation.
class Tape {
 public:
  Tape() = default;
  Tape(const Expr& e, int num_vars);

  int num_vars() const { return num_vars_; }
  std::size_t length() const { return code_.size(); }

  double eval(const double* x) const;
  Interval eval(const Interval* x) const;
  DualInterval eval_grad(const Interval* x) const;

 private:
  struct Instr {
    Op op;
    int a, b, var;
    double value;
    Interval enclosure;
  };
  std::vector<Instr> code_;
  int num_vars_ = 0;

  template <class T, class Lift>
  T run(Lift&& lift) const;
};

}  // namespace saddle::rigor
