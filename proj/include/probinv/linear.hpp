#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "probinv/program.hpp"
#include "probinv/rational.hpp"

namespace probinv {

/// Identifier of a template variable (alpha, beta, boundary lambdas, ...). Printed as "t<id>".
using TVarId = int;

/// Total map from template variables to rationals.
using Valuation = std::map<TVarId, Rational>;

/// A program state: one natural number per declared variable, indexed by VarId.
using State = std::vector<Integer>;

std::string tvar_name(TVarId id);

/// q0 + sum_j qj * alpha_j: the coefficient domain of templated expressions.
class TCoeff {
 public:
  TCoeff() = default;
  TCoeff(Rational c) : constant_(std::move(c)) {}  // NOLINT: implicit by design of the algebra
  TCoeff(int c) : constant_(c) {}                  // NOLINT

  static TCoeff var(TVarId id, const Rational& factor = Rational(1));

  const Rational& constant() const { return constant_; }
  const std::map<TVarId, Rational>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0; }

  /// Throws std::out_of_range when a template variable is missing from v.
  Rational evaluate(const Valuation& v) const;
  /// Replaces the template variables bound in v, keeps the others symbolic.
  TCoeff partially_evaluate(const Valuation& v) const;
  void collect_tvars(std::set<TVarId>& out) const;

  TCoeff& operator+=(const TCoeff& o);
  TCoeff& operator-=(const TCoeff& o);
  TCoeff& operator*=(const Rational& k);

  friend TCoeff operator+(TCoeff a, const TCoeff& b) { return a += b; }
  friend TCoeff operator-(TCoeff a, const TCoeff& b) { return a -= b; }
  friend TCoeff operator*(TCoeff a, const Rational& k) { return a *= k; }
  friend TCoeff operator*(const Rational& k, TCoeff a) { return a *= k; }
  friend TCoeff operator-(TCoeff a) { return a *= Rational(-1); }
  friend bool operator==(const TCoeff& a, const TCoeff& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const TCoeff& a, const TCoeff& b) { return !(a == b); }
  friend bool operator<(const TCoeff& a, const TCoeff& b);

 private:
  Rational constant_{0};
  std::map<TVarId, Rational> terms_;
};

std::string to_string(const TCoeff& c);

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(const TCoeff& c) { return c.is_zero(); }

/// c + sum_x a_x * x with coefficients in Scalar (Rational or TCoeff). Missing entries are zero.
template <typename Scalar>
class Affine {
 public:
  Affine() = default;
  explicit Affine(Scalar c) : constant_(std::move(c)) {}

  static Affine variable(VarId v, Scalar coeff = Scalar(1)) {
    Affine a;
    a.set_coeff(v, std::move(coeff));
    return a;
  }

  const Scalar& constant() const { return constant_; }
  void set_constant(Scalar c) { constant_ = std::move(c); }

  Scalar coeff(VarId v) const {
    const auto i = static_cast<std::size_t>(v);
    return i < coeffs_.size() ? coeffs_[i] : Scalar(0);
  }
  void set_coeff(VarId v, Scalar c) {
    const auto i = static_cast<std::size_t>(v);
    if (i >= coeffs_.size()) coeffs_.resize(i + 1, Scalar(0));
    coeffs_[i] = std::move(c);
    trim();
  }
  /// One past the highest variable with a nonzero coefficient.
  std::size_t width() const { return coeffs_.size(); }
  bool has_program_vars() const { return !coeffs_.empty(); }
  std::vector<VarId> support() const {
    std::vector<VarId> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (!is_zero(coeffs_[i])) out.push_back(static_cast<VarId>(i));
    return out;
  }

  Affine& operator+=(const Affine& o) {
    constant_ += o.constant_;
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Affine& operator-=(const Affine& o) {
    constant_ -= o.constant_;
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Affine& operator*=(const Rational& k) {
    if (k == 0) {
      *this = Affine();
      return *this;
    }
    constant_ *= k;
    for (auto& c : coeffs_) c *= k;
    return *this;
  }
  friend Affine operator+(Affine a, const Affine& b) { return a += b; }
  friend Affine operator-(Affine a, const Affine& b) { return a -= b; }
  friend Affine operator*(Affine a, const Rational& k) { return a *= k; }
  friend Affine operator*(const Rational& k, Affine a) { return a *= k; }
  friend Affine operator-(Affine a) { return a *= Rational(-1); }
  friend bool operator==(const Affine& a, const Affine& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const Affine& a, const Affine& b) { return !(a == b); }

  /// Substitutes every program variable by its value in s.
  Scalar evaluate(const State& s) const {
    Scalar out = constant_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (!is_zero(coeffs_[i])) out += coeffs_[i] * Rational(s.at(i));
    return out;
  }

  /// this[x / e]
  Affine substitute(VarId x, const Affine<Rational>& e) const {
    const Scalar cx = coeff(x);
    if (is_zero(cx)) return *this;
    Affine out = *this;
    out.set_coeff(x, Scalar(0));
    out.constant_ += cx * e.constant();
    for (std::size_t j = 0; j < e.width(); ++j) {
      const Rational& ej = e.coeff(static_cast<VarId>(j));
      if (ej == 0) continue;
      out.set_coeff(static_cast<VarId>(j), out.coeff(static_cast<VarId>(j)) + cx * ej);
    }
    return out;
  }

  /// Simultaneous substitution x_i := e_i for all i < es.size().
  Affine substitute_all(const std::vector<Affine<Rational>>& es) const {
    Affine out(constant_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (is_zero(coeffs_[i])) continue;
      if (i >= es.size()) {
        out += Affine::variable(static_cast<VarId>(i), coeffs_[i]);
        continue;
      }
      const auto& e = es[i];
      out.constant_ += coeffs_[i] * e.constant();
      for (std::size_t j = 0; j < e.width(); ++j) {
        const Rational& ej = e.coeff(static_cast<VarId>(j));
        if (ej != 0) out.set_coeff(static_cast<VarId>(j), out.coeff(static_cast<VarId>(j)) + coeffs_[i] * ej);
      }
    }
    return out;
  }

  template <typename F>
  auto map_coeffs(F&& f) const -> Affine<decltype(f(std::declval<const Scalar&>()))> {
    using Out = decltype(f(std::declval<const Scalar&>()));
    Affine<Out> out(f(constant_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.set_coeff(static_cast<VarId>(i), f(coeffs_[i]));
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  Scalar constant_{0};
  std::vector<Scalar> coeffs_;
};

/// Concrete affine expression over program variables (instantiated bodies, program arithmetic).
using LinExpr = Affine<Rational>;
/// Affine expression whose coefficients are affine forms over template variables.
using TemplatedLinExpr = Affine<TCoeff>;

TemplatedLinExpr lift(const LinExpr& e);
Rational evaluate(const TemplatedLinExpr& e, const State& s, const Valuation& v);
LinExpr instantiate(const TemplatedLinExpr& e, const Valuation& v);
/// Some coefficient mentions a template variable.
bool has_tvars(const TemplatedLinExpr& e);
void collect_tvars(const TemplatedLinExpr& e, std::set<TVarId>& out);
/// Drops the TVar layer; requires !has_tvars(e).
LinExpr concrete(const TemplatedLinExpr& e);

LinExpr to_affine(const ProgramExpr& e);

std::string to_string(const LinExpr& e, const std::vector<std::string>& names);
std::string to_string(const TemplatedLinExpr& e, const std::vector<std::string>& names);

}  // namespace probinv
