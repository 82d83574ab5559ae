#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "probinv/rational.hpp"

namespace probinv {

/// Index of a program variable in LoopProgram::vars.
using VarId = int;

/// Program arithmetic over naturals: z | x | z*e | e+e | e-e.
class ProgramExpr {
 public:
  enum class Kind { Const, Var, Scale, Add, Sub };
  using Ptr = std::shared_ptr<const ProgramExpr>;

  static Ptr constant(Integer value);
  static Ptr var(VarId id);
  static Ptr scale(Integer factor, Ptr operand);
  static Ptr add(Ptr lhs, Ptr rhs);
  static Ptr sub(Ptr lhs, Ptr rhs);

  Kind kind() const { return kind_; }
  const Integer& value() const { return value_; }  // Const value or Scale factor
  VarId var_id() const { return var_; }
  const Ptr& lhs() const { return lhs_; }  // also the operand of Scale
  const Ptr& rhs() const { return rhs_; }

 private:
  ProgramExpr(Kind kind, Integer value, VarId var, Ptr lhs, Ptr rhs)
      : kind_(kind), value_(std::move(value)), var_(var), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

  Kind kind_;
  Integer value_;
  VarId var_ = -1;
  Ptr lhs_;
  Ptr rhs_;
};

/// Loop and branch guards: e < e | !phi | phi & phi. Other comparisons are desugared by the parser.
class Guard {
 public:
  enum class Kind { Less, Not, And };
  using Ptr = std::shared_ptr<const Guard>;

  static Ptr less(ProgramExpr::Ptr lhs, ProgramExpr::Ptr rhs);
  static Ptr negate(Ptr operand);
  static Ptr conjoin(Ptr lhs, Ptr rhs);

  Kind kind() const { return kind_; }
  const ProgramExpr::Ptr& left() const { return left_; }
  const ProgramExpr::Ptr& right() const { return right_; }
  const Ptr& operand() const { return a_; }  // Not
  const Ptr& first() const { return a_; }    // And
  const Ptr& second() const { return b_; }   // And

 private:
  Guard(Kind kind, ProgramExpr::Ptr l, ProgramExpr::Ptr r, Ptr a, Ptr b)
      : kind_(kind), left_(std::move(l)), right_(std::move(r)), a_(std::move(a)), b_(std::move(b)) {}

  Kind kind_;
  ProgramExpr::Ptr left_, right_;
  Ptr a_, b_;
};

/// Loop-free statements. Categorical assignments arrive here already desugared into nested choices.
class Stmt {
 public:
  enum class Kind { Skip, Assign, Seq, Choice, If };
  using Ptr = std::shared_ptr<const Stmt>;

  static Ptr skip();
  static Ptr assign(VarId target, ProgramExpr::Ptr value);
  static Ptr seq(std::vector<Ptr> parts);
  static Ptr choice(Rational prob, Ptr lhs, Ptr rhs);
  static Ptr branch(Guard::Ptr cond, Ptr then_branch, Ptr else_branch);

  Kind kind() const { return kind_; }
  VarId target() const { return target_; }
  const ProgramExpr::Ptr& value() const { return value_; }
  const std::vector<Ptr>& parts() const { return parts_; }
  const Rational& prob() const { return prob_; }
  const Guard::Ptr& cond() const { return cond_; }
  const Ptr& lhs() const { return parts_[0]; }  // Choice left / If then
  const Ptr& rhs() const { return parts_[1]; }  // Choice right / If else

 private:
  explicit Stmt(Kind kind) : kind_(kind) {}

  Kind kind_;
  VarId target_ = -1;
  ProgramExpr::Ptr value_;
  std::vector<Ptr> parts_;
  Rational prob_;
  Guard::Ptr cond_;
};

struct VarDecl {
  std::string name;
  std::optional<Integer> lo;  // both set or both empty
  std::optional<Integer> hi;

  bool bounded() const { return lo.has_value() && hi.has_value(); }
};

/// while(guard){ body } over declared natural-valued variables.
struct LoopProgram {
  std::vector<VarDecl> vars;
  Guard::Ptr guard;
  Stmt::Ptr body;

  std::size_t num_vars() const { return vars.size(); }
  std::optional<VarId> find(const std::string& name) const;
  std::vector<std::string> names() const;
  /// Every variable carries [lo,hi].
  bool all_bounded() const;
  /// Declared lower bound (0 when undeclared).
  Integer lower_bound(VarId v) const;
};

std::string to_string(const ProgramExpr& e, const std::vector<std::string>& names);
std::string to_string(const Guard& g, const std::vector<std::string>& names);
std::string to_string(const Stmt& s, const std::vector<std::string>& names, int indent = 0);
/// Surface syntax accepted by parse_program.
std::string to_string(const LoopProgram& p);

bool structurally_equal(const ProgramExpr& a, const ProgramExpr& b);
bool structurally_equal(const Guard& a, const Guard& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const LoopProgram& a, const LoopProgram& b);

}  // namespace probinv
