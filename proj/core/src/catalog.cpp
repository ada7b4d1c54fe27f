#include "saddlecheck/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace saddle::rigor {

namespace {

Expr sqrt2(const std::shared_ptr<ExprPool>& pool) {
  return real(pool, sqrt(Interval(2.0)), 1.4142135623730951);
}

Expr inv_sqrt2(const std::shared_ptr<ExprPool>& pool) {
  return real(pool, Interval(1.0) / sqrt(Interval(2.0)), 0.70710678118654752);
}

void require_n(int n) {
  if (n != 8 && n != 10 && n != 12) throw std::invalid_argument("catalog: n must be 8, 10 or 12");
}

double drift(int n) { return n / 2 - 1; }

Expr f_expr(const Expr& s, const Expr& t, int n) {
  const auto& pool = s.pool();
  const double k = (n - 3) / 2.0;
  const Expr r = sqrt(sqr(s) + sqr(t));
  if (n == 8) {
    const Expr a = tanh(s / t) * (sqrt2(pool) * s) / r;
    const Expr b = (1.0 - exp(-(s / (2.0 * t)))) * (1.0 / real(pool, 4.2));
    return (a + b) * pow(s + t, -k);
  }
  return tanh(s / t) * s / r * pow(s + t, -k);
}

// Defect of the subsolution family with y~ - z~ supplied separately so that
// reparameterizations can pass the gap variable itself.
Expr defect_expr(const Expr& a, const Expr& y, const Expr& z, const Expr& y_minus_z, double d) {
  const auto& pool = a.pool();
  const Expr hy = tanh(y * inv_sqrt2(pool));
  const Expr hz = tanh(z * inv_sqrt2(pool));
  const Expr ey = sech2(y * inv_sqrt2(pool));
  const Expr ez = sech2(z * inv_sqrt2(pool));
  const Expr gy = xcsch(sqrt2(pool) * y);
  const Expr gz = xcsch(sqrt2(pool) * z);
  const Expr a2 = sqr(a);
  const Expr hh = hy * hz;
  const Expr potential = hh * (ey * ez - (1.0 - a2) * (ey + ez));
  const Expr drift_term = (2.0 * d) * a2 * hh * (gy - gz) / (y_minus_z * (y + z));
  return potential - drift_term;
}

Expr phi0_laplacian_expr(const Expr& s, const Expr& t, int n) {
  const auto& pool = s.pool();
  const double d = drift(n);
  const Expr c = n == 8 ? real(pool, 0.00007) : real(pool, 0.001);
  const double alpha = n == 8 ? 1.8 : (n - 4) / 2.0;
  auto term = [&](const Expr& x, const Expr& y) {
    const Expr bracket = alpha * (alpha + 1.0 - d) / sqr(x) + 1.0 / real(pool, 9.0) - d / (3.0 * y);
    return pow(x, -alpha) * exp(-(y / 3.0)) * bracket;
  };
  return c * (term(s, t) + term(t, s));
}

ProverOptions default_options() {
  ProverOptions o;
  o.margin = 0.0;
  o.min_width = 1e-4;
  o.max_depth = 40;
  o.threads = 1;
  return o;
}

}  // namespace

std::vector<CatalogEntry> builtin_expressions(int n) {
  require_n(n);
  auto pool = std::make_shared<ExprPool>();
  const Expr s = variable(pool, 0), t = variable(pool, 1);
  const double d = drift(n);
  const Expr f = f_expr(s, t, n);
  const Expr h = -substitute(f, {{0, t}, {1, s}});
  const Expr fs = diff(f, 0), ft = diff(f, 1), hs = diff(h, 0), ht = diff(h, 1);
  const Expr cs = diff(fs, 0) + diff(ft, 1) + d / s * fs + d / t * ft + d / sqr(s) * f;
  const Expr ct = diff(hs, 0) + diff(ht, 1) + d / s * hs + d / t * ht + d / sqr(t) * h;
  const Expr css = 2.0 * fs;
  const Expr cst = 2.0 * ft + 2.0 * hs;
  const Expr ctt = 2.0 * ht;

  auto dpool = std::make_shared<ExprPool>();
  const Expr a = variable(dpool, 0), y = variable(dpool, 1), z = variable(dpool, 2);
  const Expr defect = defect_expr(a, y, z, y - z, d);

  const std::vector<std::string> st{"s", "t"};
  return {
      {"f", "candidate weight f(s,t)", f, st},
      {"h", "candidate weight h(s,t) = -f(t,s)", h, st},
      {"C_s", "coefficient of u_s: Delta f + (m-1) f / s^2", cs, st},
      {"C_st", "coefficient of u_st: 2 f_t + 2 h_s", cst, st},
      {"C_ss", "coefficient of u_ss: 2 f_s", css, st},
      {"C_tt", "coefficient of u_tt: 2 h_t", ctt, st},
      {"C_t", "coefficient of u_t: Delta h + (m-1) h / t^2", ct, st},
      {"defect", "subsolution defect of H(a y~) H(a z~)-type family (cancellation-free form)", defect,
       {"a", "y~", "z~"}},
      {"phi0_laplacian", "drift Laplacian of Phi0 without the potential term", phi0_laplacian_expr(s, t, n), st},
  };
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& id) {
  for (const auto& e : catalog)
    if (e.id == id) return e;
  throw std::out_of_range("catalog: no entry " + id);
}

ClaimSpec defect_claim(int m) {
  if (m < 1) throw std::invalid_argument("defect_claim: m must be positive");
  auto pool = std::make_shared<ExprPool>();
  const Expr a = variable(pool, 0), z = variable(pool, 1), gap = variable(pool, 2);
  const Expr e = defect_expr(a, z + gap, z, gap, m - 1.0);
  ClaimSpec c;
  c.id = "defect_m" + std::to_string(m);
  c.description = "subsolution defect <= 0 for a in [0.01, 0.45], 0.01 <= z~ < y~ - 0.01, y~ <= 12";
  c.tape = Tape(e, 3);
  c.box = {Interval(0.01, 0.45), Interval(0.01, 11.99), Interval(0.01, 11.99)};
  c.vars = {"a", "z~", "gap"};
  c.options = default_options();
  c.options.outside = [](const Box& b) { return b[1].lo + b[2].lo > 12.0; };
  return c;
}

ClaimSpec coefficient_claim(const std::string& coeff, int n) {
  const auto cat = builtin_expressions(n);
  const CatalogEntry& entry = find_entry(cat, coeff);
  const auto& pool = entry.expr.pool();
  const Expr t = variable(pool, 0), gap = variable(pool, 1);
  const Expr e = substitute(entry.expr, {{0, t + gap}, {1, t}});
  ClaimSpec c;
  c.id = coeff + "_neg_n" + std::to_string(n);
  c.description = coeff + " < 0 on [0.2, 20]^2 with s > t + 0.05";
  c.tape = Tape(e, 2);
  c.box = {Interval(0.2, 19.95), Interval(0.05, 19.8)};
  c.vars = {"t", "gap"};
  c.options = default_options();
  c.options.outside = [](const Box& b) { return b[0].lo + b[1].lo > 20.0; };
  return c;
}

std::vector<ClaimSpec> acceptance_claims() {
  return {defect_claim(4), coefficient_claim("C_s", 8), coefficient_claim("C_ss", 8), coefficient_claim("C_st", 8)};
}

}  // namespace saddle::rigor
