#include "probinv/synthesizer.hpp"

#include <algorithm>

#include "probinv/analysis.hpp"
#include "probinv/motzkin.hpp"

namespace probinv {

const char* to_string(SynthMode m) { return m == SynthMode::Plain ? "plain" : "safe"; }

const char* to_string(SynthResult::Status s) {
  switch (s) {
    case SynthResult::Status::Found:
      return "found";
    case SynthResult::Status::None:
      return "none";
    case SynthResult::Status::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

const char* to_string(OneShotResult::Status s) {
  switch (s) {
    case OneShotResult::Status::Found:
      return "found";
    case OneShotResult::Status::None:
      return "none";
    case OneShotResult::Status::Inconclusive:
      return "inconclusive";
    case OneShotResult::Status::Refused:
      return "refused";
  }
  return "?";
}

namespace {

TemplatedLinExpr scalar(const TCoeff& c) { return TemplatedLinExpr(c); }

BoolExpr::Ptr implies(const BoolExpr::Ptr& a, const BoolExpr::Ptr& b) {
  return BoolExpr::disjoin(BoolExpr::negate(a), b);
}

}  // namespace

BoolExpr::Ptr admissible_at_state(const PiecewiseTemplate& t, const PiecewiseTemplate& psi_t,
                                  const PiecewiseTemplate& g, const State& s) {
  const auto ts = evaluate_at_state(t, s);
  const auto ps = evaluate_at_state(psi_t, s);
  const ExtendedRational gs = evaluate(g, s);
  std::vector<BoolExpr::Ptr> parts;
  for (const auto& c : ts) {
    if (!c.value) {
      // T(s) = INF is never well-defined for an invariant
      parts.push_back(BoolExpr::negate(c.condition));
      continue;
    }
    const TemplatedLinExpr v = scalar(*c.value);
    std::vector<BoolExpr::Ptr> local{BoolExpr::less_equal(TemplatedLinExpr(), v)};
    if (!gs.is_infinite()) local.push_back(BoolExpr::less_equal(v, TemplatedLinExpr(TCoeff(gs.value()))));
    parts.push_back(implies(c.condition, BoolExpr::conjoin(local)));
    for (const auto& d : ps) {
      const auto both = BoolExpr::conjoin(c.condition, d.condition);
      if (both->is_false()) continue;
      parts.push_back(implies(both, d.value ? BoolExpr::less_equal(scalar(*d.value), v) : BoolExpr::falsity()));
    }
  }
  return BoolExpr::conjoin(parts);
}

Synthesizer::Synthesizer(PiecewiseTemplate t, PiecewiseTemplate psi_t, PiecewiseTemplate g, SynthMode mode,
                         Feasibility& feas, SolverOptions options)
    : t_(std::move(t)),
      psi_t_(std::move(psi_t)),
      g_(std::move(g)),
      width_(feas.names().size()),
      session_(std::make_unique<SmtSession>(std::move(options))) {
  declare_tvars();
  if (mode == SynthMode::Safe && is_fixed_partition(t_)) {
    safe_ = true;
    add_safe_constraints(feas);
  }
}

void Synthesizer::declare_tvars() {
  std::set<TVarId> all = collect_tvars(t_);
  for (const auto v : collect_tvars(psi_t_)) all.insert(v);
  tvars_.assign(all.begin(), all.end());
  for (const auto v : tvars_) session_->declare_real(smt::template_var(v));
}

void Synthesizer::add_safe_constraints(Feasibility& feas) {
  std::size_t serial = 0;
  auto require = [&](const BoolExpr::Ptr& region, const TemplatedLinExpr& target) {
    // forall x in region: target <= 0
    if (!has_tvars(target)) {
      const auto bad = BoolExpr::conjoin(region, BoolExpr::less(-target));
      if (feas.satisfiable(bad)) session_->add("false");
      return;
    }
    for (const auto& conj : to_dnf(region)) {
      const auto u = lift(conj, target, std::max(width_, target.width()));
      const auto enc = motzkin_encode(u, "m" + std::to_string(serial++) + "_");
      for (const auto& m : enc.multipliers) session_->declare_real(m);
      session_->add(enc.formula);
      ++motzkin_systems_;
    }
  };
  for (const auto& p : t_.pieces) {
    if (!p.body) continue;
    if (!feas.satisfiable(p.guard)) continue;
    require(p.guard, -*p.body);
    for (const auto& h : g_.pieces) {
      if (!h.body) continue;
      const auto region = BoolExpr::conjoin(p.guard, h.guard);
      if (region->is_false() || !feas.satisfiable(region)) continue;
      require(region, *p.body - *h.body);
    }
  }
}

void Synthesizer::add_state(const State& s) {
  if (std::find(states_.begin(), states_.end(), s) != states_.end())
    throw std::logic_error("counterexample state repeated in S'");
  states_.push_back(s);
  session_->add(smt::encode(*admissible_at_state(t_, psi_t_, g_, s), false));
}

SynthResult Synthesizer::solve() {
  SynthResult out;
  const SatResult r = session_->check();
  if (r == SatResult::Unsat) {
    out.status = SynthResult::Status::None;
    return out;
  }
  if (r == SatResult::Unknown) {
    out.diagnostics = session_->diagnostics();
    return out;
  }
  out.status = SynthResult::Status::Found;
  std::vector<std::string> names;
  for (const auto v : tvars_) names.push_back(smt::template_var(v));
  if (!names.empty()) {
    const auto model = session_->values(names);
    for (std::size_t i = 0; i < tvars_.size(); ++i) out.valuation[tvars_[i]] = model.at(names[i]);
  }
  return out;
}

namespace {

Valuation decode_valuation(SmtSession& s, const std::vector<TVarId>& tvars) {
  Valuation v;
  std::vector<std::string> names;
  for (const auto t : tvars) names.push_back(smt::template_var(t));
  if (names.empty()) return v;
  const auto model = s.values(names);
  for (std::size_t i = 0; i < tvars.size(); ++i) v[tvars[i]] = model.at(names[i]);
  return v;
}

std::string quantified(const LoopProgram& loop, const PiecewiseTemplate& t, const PiecewiseTemplate& psi_t,
                       const PiecewiseTemplate& g) {
  const auto phi = loop_guard(loop);
  std::vector<BoolExpr::Ptr> parts;
  for (const auto& b : t.pieces) {
    const auto region = BoolExpr::conjoin(phi, b.guard);
    if (region->is_false()) continue;
    if (!b.body) {
      parts.push_back(BoolExpr::negate(region));
      continue;
    }
    parts.push_back(implies(region, BoolExpr::less_equal(TemplatedLinExpr(), *b.body)));
    for (const auto& c : psi_t.pieces) {
      const auto both = BoolExpr::conjoin(region, c.guard);
      if (both->is_false()) continue;
      parts.push_back(implies(both, c.body ? BoolExpr::less_equal(*c.body, *b.body) : BoolExpr::falsity()));
    }
    for (const auto& h : g.pieces) {
      if (!h.body) continue;
      const auto both = BoolExpr::conjoin(region, h.guard);
      if (both->is_false()) continue;
      parts.push_back(implies(both, BoolExpr::less_equal(*b.body, *h.body)));
    }
  }
  std::string binders, ranges;
  for (std::size_t i = 0; i < loop.num_vars(); ++i) {
    const auto x = smt::program_var(static_cast<VarId>(i));
    binders += "(" + x + " Int)";
    ranges += " (>= " + x + " 0)";
  }
  const std::string body = smt::encode(*BoolExpr::conjoin(parts), false);
  if (binders.empty()) return body;
  return "(forall (" + binders + ") (=> (and true" + ranges + ") " + body + "))";
}

}  // namespace

OneShotResult one_shot(const LoopProgram& loop, const PiecewiseTemplate& t, const PiecewiseTemplate& psi_t,
                       const PiecewiseTemplate& g, Feasibility& feas, const SolverOptions& options, std::size_t cap) {
  OneShotResult out;
  std::set<TVarId> all = collect_tvars(t);
  for (const auto v : collect_tvars(psi_t)) all.insert(v);
  const std::vector<TVarId> tvars(all.begin(), all.end());
  SmtSession s(options);
  for (const auto v : tvars) s.declare_real(smt::template_var(v));
  if (is_finite_state(loop, feas)) {
    std::vector<State> states;
    try {
      states = guard_states(loop, cap);
    } catch (const std::length_error& e) {
      out.status = OneShotResult::Status::Refused;
      out.message = std::string(e.what()) + "; use CEGIS mode";
      return out;
    }
    for (const auto& st : states) s.add(smt::encode(*admissible_at_state(t, psi_t, g, st), false));
    out.conjuncts = states.size();
  } else {
    s.add(quantified(loop, t, psi_t, g));
    out.conjuncts = 1;
    out.message = "quantified encoding";
  }
  const SatResult r = s.check();
  if (r == SatResult::Unsat) {
    out.status = OneShotResult::Status::None;
  } else if (r == SatResult::Unknown) {
    out.status = OneShotResult::Status::Inconclusive;
    out.message += (out.message.empty() ? "" : "; ") + s.diagnostics();
  } else {
    out.status = OneShotResult::Status::Found;
    out.valuation = decode_valuation(s, tvars);
  }
  return out;
}

}  // namespace probinv
