#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "probinv/boolexpr.hpp"
#include "probinv/linear.hpp"

namespace probinv {

/// A nonnegative-or-not rational, or +infinity.
class ExtendedRational {
 public:
  ExtendedRational(Rational value) : value_(std::move(value)) {}  // NOLINT
  ExtendedRational(int value) : value_(Rational(value)) {}        // NOLINT
  static ExtendedRational infinity() {
    ExtendedRational r(0);
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  /// Requires !is_infinite().
  const Rational& value() const {
    if (infinite_) throw std::logic_error("value of infinity");
    return value_;
  }

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtendedRational& a, const ExtendedRational& b) { return !(a == b); }
  friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b) {
    if (b.infinite_) return true;
    if (a.infinite_) return false;
    return a.value_ <= b.value_;
  }
  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) { return !(b <= a); }

 private:
  Rational value_;
  bool infinite_ = false;
};

std::string to_string(const ExtendedRational& r);

/// [guard] * body, where an empty body stands for infinity.
struct Piece {
  BoolExpr::Ptr guard;
  std::optional<TemplatedLinExpr> body;

  bool infinite() const { return !body.has_value(); }
};

/// Ordered pieces whose guards partition the state space for every valuation.
struct PiecewiseTemplate {
  std::vector<Piece> pieces;

  std::size_t size() const { return pieces.size(); }
};

class PartitionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

PiecewiseTemplate constant_expectation(const Rational& value);

/// Value of the unique piece whose guard holds at (s, v). Throws PartitionError otherwise.
ExtendedRational evaluate(const PiecewiseTemplate& t, const State& s, const Valuation& v);
ExtendedRational evaluate(const PiecewiseTemplate& t, const State& s);
/// Index of the unique piece holding at (s, v).
std::size_t piece_at(const PiecewiseTemplate& t, const State& s, const Valuation& v);

/// One case of T(s): a condition over template variables and the value (nullopt = infinity).
struct SymbolicCase {
  BoolExpr::Ptr condition;
  std::optional<TCoeff> value;
};

/// T(s) with program variables replaced by their values. Fixed-partition templates yield one case.
std::vector<SymbolicCase> evaluate_at_state(const PiecewiseTemplate& t, const State& s);

PiecewiseTemplate substitute(const PiecewiseTemplate& t, VarId x, const LinExpr& e);
PiecewiseTemplate instantiate(const PiecewiseTemplate& t, const Valuation& v);
bool has_tvars(const PiecewiseTemplate& t);
std::set<TVarId> collect_tvars(const PiecewiseTemplate& t);
/// Guards mention no template variables.
bool is_fixed_partition(const PiecewiseTemplate& t);
bool has_infinity(const PiecewiseTemplate& t);

/// Sorts pieces by printed guard.
void canonicalize(PiecewiseTemplate& t, const std::vector<std::string>& names);

/// Iverson-bracket text, e.g. "[x < 5]*(2*x + 1) + [!(x < 5)]*INF".
std::string to_string(const PiecewiseTemplate& t, const std::vector<std::string>& names);
/// One piece per line.
std::string to_multiline_string(const PiecewiseTemplate& t, const std::vector<std::string>& names);

/// guard * body with no partition requirement between terms.
struct Term {
  BoolExpr::Ptr guard;
  TemplatedLinExpr body;
};

/// Sum of groups; the terms inside one group partition the state space, across groups values add up.
struct GuardedSum {
  std::vector<std::vector<Term>> groups;

  std::size_t term_count() const;
};

/// Throws std::invalid_argument when t has infinite pieces.
GuardedSum to_guarded_sum(const PiecewiseTemplate& t);
GuardedSum scale(GuardedSum gs, const Rational& k);
GuardedSum add(GuardedSum a, GuardedSum b);
/// [cond]*a + [!cond]*b with group structure preserved pairwise.
GuardedSum branch(const BoolExpr::Ptr& cond, const GuardedSum& a, const GuardedSum& b);
GuardedSum substitute(const GuardedSum& gs, VarId x, const LinExpr& e);
Rational evaluate(const GuardedSum& gs, const State& s, const Valuation& v);
std::string to_string(const GuardedSum& gs, const std::vector<std::string>& names);

}  // namespace probinv
