#include "probinv/expectation.hpp"

#include <algorithm>

namespace probinv {

std::string to_string(const ExtendedRational& r) { return r.is_infinite() ? "INF" : to_string(r.value()); }

PiecewiseTemplate constant_expectation(const Rational& value) {
  return PiecewiseTemplate{{Piece{BoolExpr::truth(), TemplatedLinExpr(TCoeff(value))}}};
}

std::size_t piece_at(const PiecewiseTemplate& t, const State& s, const Valuation& v) {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    if (!evaluate(*t.pieces[i].guard, s, v)) continue;
    if (hit) throw PartitionError("two pieces hold at the same state");
    hit = i;
  }
  if (!hit) throw PartitionError("no piece holds at state");
  return *hit;
}

ExtendedRational evaluate(const PiecewiseTemplate& t, const State& s, const Valuation& v) {
  const Piece& p = t.pieces[piece_at(t, s, v)];
  if (p.infinite()) return ExtendedRational::infinity();
  return evaluate(*p.body, s, v);
}

ExtendedRational evaluate(const PiecewiseTemplate& t, const State& s) {
  static const Valuation empty;
  return evaluate(t, s, empty);
}

std::vector<SymbolicCase> evaluate_at_state(const PiecewiseTemplate& t, const State& s) {
  std::vector<SymbolicCase> out;
  for (const auto& p : t.pieces) {
    auto cond = at_state(p.guard, s);
    if (cond->is_false()) continue;
    std::optional<TCoeff> value;
    if (p.body) value = p.body->evaluate(s);
    out.push_back({std::move(cond), std::move(value)});
  }
  return out;
}

PiecewiseTemplate substitute(const PiecewiseTemplate& t, VarId x, const LinExpr& e) {
  PiecewiseTemplate out;
  for (const auto& p : t.pieces) {
    Piece q{substitute(p.guard, x, e), std::nullopt};
    if (p.body) q.body = p.body->substitute(x, e);
    out.pieces.push_back(std::move(q));
  }
  return out;
}

PiecewiseTemplate instantiate(const PiecewiseTemplate& t, const Valuation& v) {
  PiecewiseTemplate out;
  for (const auto& p : t.pieces) {
    Piece q{instantiate(p.guard, v), std::nullopt};
    if (p.body) q.body = lift(instantiate(*p.body, v));
    out.pieces.push_back(std::move(q));
  }
  return out;
}

bool has_tvars(const PiecewiseTemplate& t) {
  for (const auto& p : t.pieces)
    if (has_tvars(*p.guard) || (p.body && has_tvars(*p.body))) return true;
  return false;
}

std::set<TVarId> collect_tvars(const PiecewiseTemplate& t) {
  std::set<TVarId> out;
  for (const auto& p : t.pieces) {
    collect_tvars(*p.guard, out);
    if (p.body) collect_tvars(*p.body, out);
  }
  return out;
}

bool is_fixed_partition(const PiecewiseTemplate& t) {
  for (const auto& p : t.pieces)
    if (has_tvars(*p.guard)) return false;
  return true;
}

bool has_infinity(const PiecewiseTemplate& t) {
  return std::any_of(t.pieces.begin(), t.pieces.end(), [](const Piece& p) { return p.infinite(); });
}

void canonicalize(PiecewiseTemplate& t, const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, Piece>> keyed;
  keyed.reserve(t.pieces.size());
  for (auto& p : t.pieces) keyed.emplace_back(to_string(*p.guard, names), std::move(p));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  t.pieces.clear();
  for (auto& [k, p] : keyed) t.pieces.push_back(std::move(p));
}

namespace {

std::string piece_to_string(const Piece& p, const std::vector<std::string>& names) {
  std::string out = "[" + to_string(*p.guard, names) + "]*";
  if (p.infinite()) return out + "INF";
  return out + "(" + to_string(*p.body, names) + ")";
}

}  // namespace

std::string to_string(const PiecewiseTemplate& t, const std::vector<std::string>& names) {
  if (t.pieces.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    if (i > 0) out += " + ";
    out += piece_to_string(t.pieces[i], names);
  }
  return out;
}

std::string to_multiline_string(const PiecewiseTemplate& t, const std::vector<std::string>& names) {
  if (t.pieces.empty()) return "0\n";
  std::string out;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    out += i > 0 ? "+ " : "  ";
    out += piece_to_string(t.pieces[i], names) + "\n";
  }
  return out;
}

std::size_t GuardedSum::term_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

GuardedSum to_guarded_sum(const PiecewiseTemplate& t) {
  std::vector<Term> group;
  for (const auto& p : t.pieces) {
    if (p.infinite()) throw std::invalid_argument("infinite piece inside a guarded sum");
    group.push_back({p.guard, *p.body});
  }
  GuardedSum gs;
  gs.groups.push_back(std::move(group));
  return gs;
}

GuardedSum scale(GuardedSum gs, const Rational& k) {
  for (auto& g : gs.groups)
    for (auto& t : g) t.body *= k;
  return gs;
}

GuardedSum add(GuardedSum a, GuardedSum b) {
  for (auto& g : b.groups) a.groups.push_back(std::move(g));
  return a;
}

GuardedSum branch(const BoolExpr::Ptr& cond, const GuardedSum& a, const GuardedSum& b) {
  if (cond->is_true()) return a;
  if (cond->is_false()) return b;
  const auto neg = BoolExpr::negate(cond);
  const std::size_t n = std::max(a.groups.size(), b.groups.size());
  GuardedSum out;
  auto push_side = [](std::vector<Term>& group, const BoolExpr::Ptr& c, const GuardedSum& side, std::size_t i) {
    if (i >= side.groups.size()) {
      group.push_back({c, TemplatedLinExpr()});
      return;
    }
    for (const auto& t : side.groups[i]) {
      auto g = BoolExpr::conjoin(c, t.guard);
      if (!g->is_false()) group.push_back({std::move(g), t.body});
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> group;
    push_side(group, cond, a, i);
    push_side(group, neg, b, i);
    out.groups.push_back(std::move(group));
  }
  return out;
}

GuardedSum substitute(const GuardedSum& gs, VarId x, const LinExpr& e) {
  GuardedSum out;
  for (const auto& g : gs.groups) {
    std::vector<Term> group;
    for (const auto& t : g) {
      auto guard = substitute(t.guard, x, e);
      if (!guard->is_false()) group.push_back({std::move(guard), t.body.substitute(x, e)});
    }
    out.groups.push_back(std::move(group));
  }
  return out;
}

Rational evaluate(const GuardedSum& gs, const State& s, const Valuation& v) {
  Rational out = 0;
  for (const auto& g : gs.groups)
    for (const auto& t : g)
      if (evaluate(*t.guard, s, v)) out += evaluate(t.body, s, v);
  return out;
}

std::string to_string(const GuardedSum& gs, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& g : gs.groups) {
    out += "{ ";
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i > 0) out += " + ";
      out += "[" + to_string(*g[i].guard, names) + "]*(" + to_string(g[i].body, names) + ")";
    }
    out += " }\n";
  }
  return out;
}

}  // namespace probinv
