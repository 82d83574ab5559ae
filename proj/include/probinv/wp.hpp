#pragma once

#include <map>
#include <string>

#include "probinv/expectation.hpp"
#include "probinv/normalize.hpp"
#include "probinv/program.hpp"

namespace probinv {

/// Weakest preexpectation of a loop-free statement, before normalization.
GuardedSum wp(const Stmt& c, GuardedSum post);
GuardedSum wp(const Stmt& c, const PiecewiseTemplate& post);

/// normalize([!phi]*f + [phi]*wp(body, T)).
PiecewiseTemplate char_fun(const LoopProgram& loop, const PiecewiseTemplate& f, const PiecewiseTemplate& t,
                           Feasibility& feas);

/// Sum over the exact outcome distribution of c from s of f(s').
Rational expected_value_oracle(const Stmt& c, const PiecewiseTemplate& f, const State& s);

/// Phi_f(I)(s) computed operationally from the program, independent of the symbolic transformer.
ExtendedRational char_fun_at(const LoopProgram& loop, const PiecewiseTemplate& f, const PiecewiseTemplate& i,
                             const State& s);

/// Characteristic functional of one loop and postexpectation with a per-template cache.
class CharFunctional {
 public:
  CharFunctional(const LoopProgram& loop, PiecewiseTemplate f, Feasibility& feas);

  /// Psi_f(T), computed once per distinct template.
  const PiecewiseTemplate& apply(const PiecewiseTemplate& t);

  const LoopProgram& loop() const { return loop_; }
  const PiecewiseTemplate& post() const { return f_; }
  Feasibility& feasibility() { return feas_; }

 private:
  const LoopProgram& loop_;
  PiecewiseTemplate f_;
  Feasibility& feas_;
  std::map<std::string, PiecewiseTemplate> cache_;
};

}  // namespace probinv
