#include "probinv/motzkin.hpp"

#include <stdexcept>

#include "probinv/smt.hpp"

namespace probinv {

namespace {

void append_row(RationalMatrix& m, RationalVector& rhs, const LinExpr& e) {
  const auto n = m.cols();
  if (static_cast<Eigen::Index>(e.width()) > n) throw std::invalid_argument("row wider than the implication");
  m.conservativeResize(m.rows() + 1, n);
  rhs.conservativeResize(rhs.rows() + 1);
  for (Eigen::Index k = 0; k < n; ++k) m(m.rows() - 1, k) = e.coeff(static_cast<VarId>(k));
  rhs(rhs.rows() - 1) = -e.constant();
}

std::string product(const Rational& q, const std::string& var) {
  if (q == 1) return var;
  return "(* " + smt::num(q) + " " + var + ")";
}

}  // namespace

UniversalImplication::UniversalImplication(std::size_t dimension)
    : A(0, static_cast<Eigen::Index>(dimension)),
      a(0),
      B(0, static_cast<Eigen::Index>(dimension)),
      b(0),
      alpha(dimension, TCoeff(0)),
      beta(0) {}

void UniversalImplication::add_non_strict(const LinExpr& e) { append_row(A, a, e); }
void UniversalImplication::add_strict(const LinExpr& e) { append_row(B, b, e); }

void UniversalImplication::set_target(const TemplatedLinExpr& e) {
  if (e.width() > dimension()) throw std::invalid_argument("target wider than the implication");
  for (std::size_t k = 0; k < dimension(); ++k) alpha[k] = e.coeff(static_cast<VarId>(k));
  beta = -e.constant();
}

bool UniversalImplication::holds_at(const std::vector<Rational>& x, const Valuation& v) const {
  auto dot = [&](const auto& row) {
    Rational s = 0;
    for (Eigen::Index k = 0; k < row.size(); ++k) s += row(k) * x[static_cast<std::size_t>(k)];
    return s;
  };
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (dot(A.row(i)) > a(i)) return true;
  for (Eigen::Index j = 0; j < B.rows(); ++j)
    if (dot(B.row(j)) >= b(j)) return true;
  Rational lhs = 0;
  for (std::size_t k = 0; k < dimension(); ++k) lhs += alpha[k].evaluate(v) * x[k];
  return lhs <= beta.evaluate(v);
}

MotzkinEncoding motzkin_encode(const UniversalImplication& u, const std::string& prefix) {
  MotzkinEncoding out;
  const auto m = static_cast<std::size_t>(u.A.rows());
  const auto l = static_cast<std::size_t>(u.B.rows());
  std::vector<std::string> lambda, eta;
  for (std::size_t i = 0; i < m; ++i) lambda.push_back(prefix + std::to_string(i));
  for (std::size_t j = 0; j < l; ++j) eta.push_back(prefix + std::to_string(m + j));
  const std::string eta0 = prefix + std::to_string(m + l);
  out.multipliers = lambda;
  out.multipliers.insert(out.multipliers.end(), eta.begin(), eta.end());
  out.multipliers.push_back(eta0);

  std::vector<std::string> nonneg;
  for (const auto& x : out.multipliers) nonneg.push_back("(>= " + x + " 0)");

  // sum lambda_i (a_i - A_i x) + sum eta_j (b_j - B_j x) [+ alpha^T x - beta] + eta0 == 0 as a polynomial in x
  std::vector<std::string> zero_case, one_case;
  for (std::size_t k = 0; k < u.dimension(); ++k) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& c = u.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (c != 0) parts.push_back(product(-c, lambda[i]));
    }
    for (std::size_t j = 0; j < l; ++j) {
      const Rational& c = u.B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (c != 0) parts.push_back(product(-c, eta[j]));
    }
    zero_case.push_back("(= " + smt::sum(parts) + " 0)");
    if (!u.alpha[k].is_zero()) parts.push_back(smt::term(u.alpha[k]));
    one_case.push_back("(= " + smt::sum(parts) + " 0)");
  }
  std::vector<std::string> constant;
  for (std::size_t i = 0; i < m; ++i)
    if (u.a(static_cast<Eigen::Index>(i)) != 0) constant.push_back(product(u.a(static_cast<Eigen::Index>(i)), lambda[i]));
  for (std::size_t j = 0; j < l; ++j)
    if (u.b(static_cast<Eigen::Index>(j)) != 0) constant.push_back(product(u.b(static_cast<Eigen::Index>(j)), eta[j]));
  constant.push_back(eta0);
  zero_case.push_back("(= " + smt::sum(constant) + " 0)");
  std::vector<std::string> strict = eta;
  strict.push_back(eta0);
  zero_case.push_back("(> " + smt::sum(strict) + " 0)");
  if (!u.beta.is_zero()) constant.push_back(smt::term(-u.beta));
  one_case.push_back("(= " + smt::sum(constant) + " 0)");

  out.formula = smt::conj({smt::conj(nonneg), smt::disj({smt::conj(zero_case), smt::conj(one_case)})});
  return out;
}

UniversalImplication lift(const std::vector<Literal>& premise, const TemplatedLinExpr& target, std::size_t dimension,
                          const LiftOptions& options) {
  UniversalImplication u(dimension);
  if (options.nonnegative)
    for (std::size_t k = 0; k < dimension; ++k) u.add_non_strict(-LinExpr::variable(static_cast<VarId>(k)));
  for (const auto& lit : premise) {
    const LinExpr e = concrete(lit.atom);
    if (!lit.positive) {
      u.add_non_strict(-e);
      continue;
    }
    bool integral = is_integer(e.constant());
    for (std::size_t k = 0; k < e.width(); ++k) integral = integral && is_integer(e.coeff(static_cast<VarId>(k)));
    if (options.integer_tightening && integral) {
      u.add_non_strict(e + LinExpr(Rational(1)));
    } else {
      u.add_strict(e);
    }
  }
  u.set_target(target);
  return u;
}

}  // namespace probinv
