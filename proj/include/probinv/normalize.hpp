#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "probinv/expectation.hpp"
#include "probinv/smt.hpp"

namespace probinv {

/// Emptiness oracle for guards over N^n (template variables existentially quantified over Q).
/// Unary literal conjunctions are decided by interval reasoning; everything else goes to the solver.
class Feasibility {
 public:
  Feasibility(std::vector<std::string> names, SolverOptions options = {});

  /// Some state (and some valuation) satisfies b. Solver "unknown" counts as satisfiable.
  bool satisfiable(const BoolExpr::Ptr& b);
  bool valid(const BoolExpr::Ptr& b) { return !satisfiable(BoolExpr::negate(b)); }
  /// A witness state for b (program variables only), when b is satisfiable and the solver produced a model.
  std::optional<State> witness(const BoolExpr::Ptr& b);

  const std::vector<std::string>& names() const { return names_; }
  const SolverOptions& options() const { return options_; }
  std::size_t solver_calls() const { return solver_calls_; }

 private:
  std::optional<bool> interval_decision(const BoolExpr::Ptr& b) const;
  SmtSession& session();
  void declare(const BoolExpr& b);

  std::vector<std::string> names_;
  SolverOptions options_;
  std::unique_ptr<SmtSession> session_;
  std::unordered_map<std::string, bool> cache_;
  std::size_t solver_calls_ = 0;
};

struct NormalizeOptions {
  bool merge = true;
  /// Drop conjuncts implied by the rest of their cell guard.
  bool simplify = true;
};

/// Partition form of a guarded sum: one piece per nonempty cell of the group product.
PiecewiseTemplate normalize(const GuardedSum& gs, Feasibility& feas, const NormalizeOptions& options = {});

/// Removes literals implied by the remaining ones; returns b unchanged when it is not a literal conjunction.
BoolExpr::Ptr simplify_guard(const BoolExpr::Ptr& b, Feasibility& feas);

/// Nonempty cells of the product of several partitions.
std::vector<BoolExpr::Ptr> product_cells(const std::vector<std::vector<BoolExpr::Ptr>>& partitions, Feasibility& feas);

struct PartitionReport {
  bool disjoint = true;
  bool covering = true;
  std::string detail;

  bool ok() const { return disjoint && covering; }
};

/// Pairwise disjointness and coverage over all states and all valuations.
PartitionReport check_partition(const PiecewiseTemplate& t, Feasibility& feas);

}  // namespace probinv
