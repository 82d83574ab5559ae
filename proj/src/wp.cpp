#include "probinv/wp.hpp"

#include "probinv/analysis.hpp"

namespace probinv {

GuardedSum wp(const Stmt& c, GuardedSum post) {
  switch (c.kind()) {
    case Stmt::Kind::Skip:
      return post;
    case Stmt::Kind::Assign:
      return substitute(post, c.target(), to_affine(*c.value()));
    case Stmt::Kind::Seq:
      for (auto it = c.parts().rbegin(); it != c.parts().rend(); ++it) post = wp(**it, std::move(post));
      return post;
    case Stmt::Kind::Choice: {
      if (c.prob() == 1) return wp(*c.lhs(), std::move(post));
      if (c.prob() == 0) return wp(*c.rhs(), std::move(post));
      auto l = scale(wp(*c.lhs(), post), c.prob());
      auto r = scale(wp(*c.rhs(), std::move(post)), 1 - c.prob());
      return add(std::move(l), std::move(r));
    }
    case Stmt::Kind::If:
      return branch(from_guard(*c.cond()), wp(*c.lhs(), post), wp(*c.rhs(), post));
  }
  return post;
}

GuardedSum wp(const Stmt& c, const PiecewiseTemplate& post) { return wp(c, to_guarded_sum(post)); }

PiecewiseTemplate char_fun(const LoopProgram& loop, const PiecewiseTemplate& f, const PiecewiseTemplate& t,
                           Feasibility& feas) {
  const GuardedSum gs = branch(loop_guard(loop), wp(*loop.body, t), to_guarded_sum(f));
  return normalize(gs, feas);
}

Rational expected_value_oracle(const Stmt& c, const PiecewiseTemplate& f, const State& s) {
  Rational out = 0;
  for (const auto& [t, p] : outcomes(c, s)) {
    const ExtendedRational v = evaluate(f, t);
    if (v.is_infinite()) throw std::domain_error("infinite postexpectation in the oracle");
    out += p * v.value();
  }
  return out;
}

ExtendedRational char_fun_at(const LoopProgram& loop, const PiecewiseTemplate& f, const PiecewiseTemplate& i,
                             const State& s) {
  if (!evaluate(*loop.guard, s)) return evaluate(f, s);
  Rational out = 0;
  for (const auto& [t, p] : outcomes(*loop.body, s)) {
    const ExtendedRational v = evaluate(i, t);
    if (v.is_infinite()) return ExtendedRational::infinity();
    out += p * v.value();
  }
  return out;
}

CharFunctional::CharFunctional(const LoopProgram& loop, PiecewiseTemplate f, Feasibility& feas)
    : loop_(loop), f_(std::move(f)), feas_(feas) {}

const PiecewiseTemplate& CharFunctional::apply(const PiecewiseTemplate& t) {
  const std::string key = to_string(t, loop_.names());
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, char_fun(loop_, f_, t, feas_)).first;
  return it->second;
}

}  // namespace probinv
