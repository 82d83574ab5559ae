#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "probinv/linear.hpp"
#include "probinv/program.hpp"

namespace probinv {

/// Boolean combinations of strict inequalities between templated affine expressions.
///
/// Atoms are stored as `e < 0`. Concrete atoms are scaled to coprime integer coefficients so that
/// syntactically different spellings of the same half-space compare equal. Builders simplify
/// constant atoms, double negations, and nested conjunctions eagerly.
class BoolExpr {
 public:
  enum class Kind { True, False, Less, Not, And };
  using Ptr = std::shared_ptr<const BoolExpr>;

  static Ptr truth();
  static Ptr falsity();
  static Ptr constant(bool value) { return value ? truth() : falsity(); }
  /// e < 0
  static Ptr less(TemplatedLinExpr e);
  static Ptr less(const TemplatedLinExpr& lhs, const TemplatedLinExpr& rhs) { return less(lhs - rhs); }
  static Ptr less_equal(const TemplatedLinExpr& lhs, const TemplatedLinExpr& rhs) { return negate(less(rhs, lhs)); }
  static Ptr equal(const TemplatedLinExpr& lhs, const TemplatedLinExpr& rhs);
  static Ptr negate(const Ptr& operand);
  static Ptr conjoin(const std::vector<Ptr>& parts);
  static Ptr conjoin(const Ptr& a, const Ptr& b) { return conjoin(std::vector<Ptr>{a, b}); }
  /// a | b, spelled !(!a & !b).
  static Ptr disjoin(const Ptr& a, const Ptr& b);
  static Ptr disjoin(const std::vector<Ptr>& parts);

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  bool is_false() const { return kind_ == Kind::False; }
  const TemplatedLinExpr& atom() const { return atom_; }
  const Ptr& operand() const { return children_.front(); }
  const std::vector<Ptr>& children() const { return children_; }

 private:
  explicit BoolExpr(Kind kind) : kind_(kind) {}

  Kind kind_;
  TemplatedLinExpr atom_;
  std::vector<Ptr> children_;
};

/// Literal in a conjunction: atom `e < 0` (positive) or its negation `e >= 0`.
struct Literal {
  TemplatedLinExpr atom;
  bool positive = true;
};

bool evaluate(const BoolExpr& b, const State& s, const Valuation& v);
bool evaluate(const BoolExpr& b, const State& s);  // no template variables
/// Substitutes the program variables by their values in s; what remains is a formula over TVars.
BoolExpr::Ptr at_state(const BoolExpr::Ptr& b, const State& s);
BoolExpr::Ptr instantiate(const BoolExpr::Ptr& b, const Valuation& v);
BoolExpr::Ptr substitute(const BoolExpr::Ptr& b, VarId x, const LinExpr& e);
BoolExpr::Ptr substitute_all(const BoolExpr::Ptr& b, const std::vector<LinExpr>& es);
bool has_tvars(const BoolExpr& b);
void collect_tvars(const BoolExpr& b, std::set<TVarId>& out);
bool structurally_equal(const BoolExpr& a, const BoolExpr& b);
/// All atoms occurring in b (with repetitions removed structurally).
std::vector<TemplatedLinExpr> atoms(const BoolExpr& b);

/// Disjunctive normal form as a list of literal conjunctions. Throws std::length_error beyond `cap` disjuncts.
std::vector<std::vector<Literal>> to_dnf(const BoolExpr::Ptr& b, std::size_t cap = 4096);
/// b is a conjunction of literals (or a single literal / true).
bool literal_conjunction(const BoolExpr::Ptr& b, std::vector<Literal>& out);

BoolExpr::Ptr from_guard(const Guard& g);

std::string to_string(const BoolExpr& b, const std::vector<std::string>& names);

}  // namespace probinv
