#pragma once

#include <memory>
#include <string>
#include <vector>

#include "probinv/expectation.hpp"
#include "probinv/normalize.hpp"
#include "probinv/program.hpp"
#include "probinv/smt.hpp"

namespace probinv {

enum class SynthMode { Plain, Safe };

const char* to_string(SynthMode m);

/// 0 <= T(s) & Psi_f(T)(s) <= T(s) & T(s) <= g(s), as a formula over template variables.
/// The safety conjunct is dropped where g(s) is infinite.
BoolExpr::Ptr admissible_at_state(const PiecewiseTemplate& t, const PiecewiseTemplate& psi_t,
                                  const PiecewiseTemplate& g, const State& s);

struct SynthResult {
  enum class Status { Found, None, Inconclusive };
  Status status = Status::Inconclusive;
  Valuation valuation;
  std::string diagnostics;
};

/// Incremental synthesizer over a growing set S' of states.
class Synthesizer {
 public:
  /// Safe mode needs a fixed-partition template; otherwise it degrades to plain mode (see safe_active()).
  Synthesizer(PiecewiseTemplate t, PiecewiseTemplate psi_t, PiecewiseTemplate g, SynthMode mode, Feasibility& feas,
              SolverOptions options = {});

  /// Throws std::logic_error when s is already in S'.
  void add_state(const State& s);
  SynthResult solve();

  const std::vector<State>& states() const { return states_; }
  bool safe_active() const { return safe_; }
  std::size_t motzkin_systems() const { return motzkin_systems_; }

 private:
  void declare_tvars();
  void add_safe_constraints(Feasibility& feas);

  PiecewiseTemplate t_;
  PiecewiseTemplate psi_t_;
  PiecewiseTemplate g_;
  std::size_t width_;
  std::unique_ptr<SmtSession> session_;
  std::vector<TVarId> tvars_;
  std::vector<State> states_;
  bool safe_ = false;
  std::size_t motzkin_systems_ = 0;
};

struct OneShotResult {
  enum class Status { Found, None, Inconclusive, Refused };
  Status status = Status::Inconclusive;
  Valuation valuation;
  std::size_t conjuncts = 0;
  std::string message;
};

/// Whole-problem encoding: a conjunction over S_phi for finite-state loops, a quantified formula otherwise.
OneShotResult one_shot(const LoopProgram& loop, const PiecewiseTemplate& t, const PiecewiseTemplate& psi_t,
                       const PiecewiseTemplate& g, Feasibility& feas, const SolverOptions& options = {},
                       std::size_t cap = 1000000);

const char* to_string(SynthResult::Status s);
const char* to_string(OneShotResult::Status s);

}  // namespace probinv
