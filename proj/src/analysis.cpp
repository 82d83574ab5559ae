#include "probinv/analysis.hpp"

#include <map>

namespace probinv {

Integer evaluate(const ProgramExpr& e, const State& s) {
  switch (e.kind()) {
    case ProgramExpr::Kind::Const:
      return e.value();
    case ProgramExpr::Kind::Var:
      return s.at(static_cast<std::size_t>(e.var_id()));
    case ProgramExpr::Kind::Scale:
      return e.value() * evaluate(*e.lhs(), s);
    case ProgramExpr::Kind::Add:
      return evaluate(*e.lhs(), s) + evaluate(*e.rhs(), s);
    case ProgramExpr::Kind::Sub:
      return evaluate(*e.lhs(), s) - evaluate(*e.rhs(), s);
  }
  return 0;
}

bool evaluate(const Guard& g, const State& s) {
  switch (g.kind()) {
    case Guard::Kind::Less:
      return evaluate(*g.left(), s) < evaluate(*g.right(), s);
    case Guard::Kind::Not:
      return !evaluate(*g.operand(), s);
    case Guard::Kind::And:
      return evaluate(*g.first(), s) && evaluate(*g.second(), s);
  }
  return false;
}

namespace {

using Dist = std::map<State, Rational>;

void run(const Stmt& c, const State& s, const Rational& mass, Dist& out) {
  switch (c.kind()) {
    case Stmt::Kind::Skip:
      out[s] += mass;
      return;
    case Stmt::Kind::Assign: {
      const Integer v = evaluate(*c.value(), s);
      if (v < 0) throw std::domain_error("assignment produces a negative value");
      State t = s;
      t[static_cast<std::size_t>(c.target())] = v;
      out[t] += mass;
      return;
    }
    case Stmt::Kind::Seq: {
      Dist cur{{s, mass}};
      for (const auto& part : c.parts()) {
        Dist next;
        for (const auto& [st, m] : cur) run(*part, st, m, next);
        cur = std::move(next);
      }
      for (auto& [st, m] : cur) out[st] += m;
      return;
    }
    case Stmt::Kind::Choice:
      if (c.prob() != 0) run(*c.lhs(), s, mass * c.prob(), out);
      if (c.prob() != 1) run(*c.rhs(), s, mass * (1 - c.prob()), out);
      return;
    case Stmt::Kind::If:
      run(evaluate(*c.cond(), s) ? *c.lhs() : *c.rhs(), s, mass, out);
      return;
  }
}

struct Exec {
  const AssignVisitor& visit;
  std::size_t cap;
  std::vector<BoolExpr::Ptr>* branch_conditions = nullptr;

  using Frame = std::pair<BoolExpr::Ptr, std::vector<LinExpr>>;

  std::vector<Frame> go(const Stmt& c, Frame f) {
    switch (c.kind()) {
      case Stmt::Kind::Skip:
        return {std::move(f)};
      case Stmt::Kind::Assign: {
        const LinExpr value = to_affine(*c.value()).substitute_all(f.second);
        if (visit) visit(f.first, f.second, c.target(), value);
        f.second[static_cast<std::size_t>(c.target())] = value;
        return {std::move(f)};
      }
      case Stmt::Kind::Seq: {
        std::vector<Frame> cur{std::move(f)};
        for (const auto& part : c.parts()) {
          std::vector<Frame> next;
          for (auto& fr : cur) {
            auto r = go(*part, std::move(fr));
            next.insert(next.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
            if (next.size() > cap) throw std::length_error("too many control paths");
          }
          cur = std::move(next);
        }
        return cur;
      }
      case Stmt::Kind::Choice: {
        auto l = go(*c.lhs(), f);
        auto r = go(*c.rhs(), std::move(f));
        l.insert(l.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
        return l;
      }
      case Stmt::Kind::If: {
        const auto cond = substitute_all(from_guard(*c.cond()), f.second);
        if (branch_conditions) {
          bool seen = false;
          for (const auto& b : *branch_conditions) seen = seen || structurally_equal(*b, *cond);
          if (!seen && !cond->is_true() && !cond->is_false()) branch_conditions->push_back(cond);
        }
        std::vector<Frame> out;
        const auto yes = BoolExpr::conjoin(f.first, cond);
        const auto no = BoolExpr::conjoin(f.first, BoolExpr::negate(cond));
        if (!yes->is_false()) out = go(*c.lhs(), {yes, f.second});
        if (!no->is_false()) {
          auto r = go(*c.rhs(), {no, f.second});
          out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
        }
        return out;
      }
    }
    return {};
  }
};

std::vector<LinExpr> identity_store(std::size_t n) {
  std::vector<LinExpr> store;
  for (std::size_t i = 0; i < n; ++i) store.push_back(LinExpr::variable(static_cast<VarId>(i)));
  return store;
}

}  // namespace

std::vector<std::pair<State, Rational>> outcomes(const Stmt& body, const State& s) {
  Dist d;
  run(body, s, Rational(1), d);
  return {d.begin(), d.end()};
}

std::vector<SymbolicPath> symbolic_paths(const Stmt& body, std::size_t num_vars, const AssignVisitor& visit,
                                         std::size_t cap) {
  Exec ex{visit, cap};
  auto frames = ex.go(body, {BoolExpr::truth(), identity_store(num_vars)});
  std::vector<SymbolicPath> out;
  for (auto& [cond, store] : frames) out.push_back({cond, std::move(store)});
  return out;
}

BoolExpr::Ptr loop_guard(const LoopProgram& p) { return from_guard(*p.guard); }

BoolExpr::Ptr declared_box(const LoopProgram& p) {
  std::vector<BoolExpr::Ptr> parts;
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    const auto& d = p.vars[i];
    const auto x = TemplatedLinExpr::variable(static_cast<VarId>(i));
    if (d.lo && *d.lo > 0) parts.push_back(BoolExpr::less_equal(TemplatedLinExpr(TCoeff(Rational(*d.lo))), x));
    if (d.hi) parts.push_back(BoolExpr::less_equal(x, TemplatedLinExpr(TCoeff(Rational(*d.hi)))));
  }
  return BoolExpr::conjoin(parts);
}

void check_underflow(const LoopProgram& p, Feasibility& feas) {
  const auto phi = loop_guard(p);
  const auto names = p.names();
  AssignVisitor visit = [&](const BoolExpr::Ptr& cond, const std::vector<LinExpr>&, VarId target,
                            const LinExpr& value) {
    const Integer lo = p.lower_bound(target);
    bool monotone = value.constant() >= Rational(lo);
    for (std::size_t i = 0; i < value.width(); ++i) monotone = monotone && value.coeff(static_cast<VarId>(i)) >= 0;
    if (monotone) return;
    const auto below = BoolExpr::less(lift(value), TemplatedLinExpr(TCoeff(Rational(lo))));
    const auto query = BoolExpr::conjoin({phi, cond, below});
    if (!feas.satisfiable(query)) return;
    std::string msg = "assignment " + names[static_cast<std::size_t>(target)] + " := " + to_string(value, names) +
                      " may fall below " + lo.str();
    if (auto w = feas.witness(query)) {
      msg += " (e.g. from";
      for (std::size_t i = 0; i < w->size(); ++i) msg += " " + names[i] + "=" + (*w)[i].str();
      msg += ")";
    }
    throw UnderflowError(msg);
  };
  symbolic_paths(*p.body, p.num_vars(), visit);
}

bool is_finite_state(const LoopProgram& p, Feasibility& feas) {
  if (!p.all_bounded()) return false;
  return !feas.satisfiable(BoolExpr::conjoin(loop_guard(p), BoolExpr::negate(declared_box(p))));
}

std::vector<BoolExpr::Ptr> branch_cells(const LoopProgram& p, Feasibility& feas) {
  std::vector<BoolExpr::Ptr> conditions;
  static const AssignVisitor none;
  Exec ex{none, 100000, &conditions};
  ex.go(*p.body, {BoolExpr::truth(), identity_store(p.num_vars())});
  std::vector<std::vector<BoolExpr::Ptr>> partitions{{loop_guard(p)}};
  for (const auto& c : conditions) partitions.push_back({c, BoolExpr::negate(c)});
  std::vector<BoolExpr::Ptr> cells = product_cells(partitions, feas);
  for (auto& c : cells) c = simplify_guard(c, feas);
  return cells;
}

std::vector<State> guard_states(const LoopProgram& p, std::size_t cap) {
  if (!p.all_bounded()) throw std::length_error("unbounded variable; state space is not enumerable");
  Integer box = 1;
  for (const auto& d : p.vars) box *= (*d.hi - *d.lo + 1);
  const Integer limit = Integer(cap) * 200;
  if (box > limit) throw std::length_error("declared box has " + box.str() + " states, beyond the enumeration limit");
  std::vector<State> out;
  State s(p.vars.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = *p.vars[i].lo;
  if (s.empty()) {
    if (evaluate(*p.guard, s)) out.push_back(s);
    return out;
  }
  for (;;) {
    if (evaluate(*p.guard, s)) {
      out.push_back(s);
      if (out.size() > cap) throw std::length_error("more than " + std::to_string(cap) + " guard states");
    }
    std::size_t k = s.size();
    while (k-- > 0) {
      if (s[k] < *p.vars[k].hi) {
        ++s[k];
        break;
      }
      s[k] = *p.vars[k].lo;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace probinv
