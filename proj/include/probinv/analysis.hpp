#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "probinv/boolexpr.hpp"
#include "probinv/normalize.hpp"
#include "probinv/program.hpp"

namespace probinv {

/// Value of a program expression at s (may be negative).
Integer evaluate(const ProgramExpr& e, const State& s);
bool evaluate(const Guard& g, const State& s);

/// Exact one-step outcome distribution of a loop-free statement; equal successors are merged.
/// Throws std::domain_error when an assignment would produce a negative value.
std::vector<std::pair<State, Rational>> outcomes(const Stmt& body, const State& s);

/// One control path through a loop-free body, expressed over the pre-state.
struct SymbolicPath {
  BoolExpr::Ptr condition;
  std::vector<LinExpr> values;  // final value of each variable
};

/// Visits every assignment with the path condition and the symbolic pre-assignment store.
using AssignVisitor = std::function<void(const BoolExpr::Ptr& condition, const std::vector<LinExpr>& store,
                                         VarId target, const LinExpr& value)>;

std::vector<SymbolicPath> symbolic_paths(const Stmt& body, std::size_t num_vars, const AssignVisitor& visit = {},
                                         std::size_t cap = 100000);

class UnderflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UnderflowError when some reachable assignment can yield a value below the target's declared lower bound.
void check_underflow(const LoopProgram& p, Feasibility& feas);

BoolExpr::Ptr loop_guard(const LoopProgram& p);
/// Conjunction of the declared bounds.
BoolExpr::Ptr declared_box(const LoopProgram& p);
/// Every variable is bounded and the guard implies the declared box.
bool is_finite_state(const LoopProgram& p, Feasibility& feas);

/// Partition of the guard region by the branch conditions the body can take (translated to the pre-state).
std::vector<BoolExpr::Ptr> branch_cells(const LoopProgram& p, Feasibility& feas);

/// States of the declared box satisfying the guard. Throws std::length_error beyond cap.
std::vector<State> guard_states(const LoopProgram& p, std::size_t cap);

}  // namespace probinv
