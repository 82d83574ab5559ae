#include "probinv/normalize.hpp"

#include <algorithm>
#include <map>

namespace probinv {

Feasibility::Feasibility(std::vector<std::string> names, SolverOptions options)
    : names_(std::move(names)), options_(std::move(options)) {}

SmtSession& Feasibility::session() {
  if (!session_) session_ = std::make_unique<SmtSession>(options_);
  return *session_;
}

std::optional<bool> Feasibility::interval_decision(const BoolExpr::Ptr& b) const {
  if (b->is_true()) return true;
  if (b->is_false()) return false;
  std::vector<Literal> lits;
  if (!literal_conjunction(b, lits)) return std::nullopt;
  std::map<VarId, std::pair<Integer, std::optional<Integer>>> box;  // lo, hi
  bool complete = true;
  for (const auto& lit : lits) {
    const auto support = lit.atom.support();
    if (support.size() != 1 || has_tvars(lit.atom)) {
      complete = false;
      continue;
    }
    const VarId x = support.front();
    const Rational a = lit.atom.coeff(x).constant();
    const Rational c = lit.atom.constant().constant();
    auto& [lo, hi] = box.try_emplace(x, Integer(0), std::nullopt).first->second;
    const Rational root = -c / a;
    // positive: a*x + c < 0; negative: a*x + c >= 0
    const bool upper = (a > 0) == lit.positive;
    Integer bound;
    if (upper) {
      bound = lit.positive ? Integer(ceil(root) - 1) : floor(root);
      if (!hi || bound < *hi) hi = bound;
    } else {
      bound = lit.positive ? Integer(floor(root) + 1) : ceil(root);
      if (bound > lo) lo = bound;
    }
    if (hi && *hi < lo) return false;
  }
  if (complete) return true;
  return std::nullopt;
}

void Feasibility::declare(const BoolExpr& b) {
  std::set<TVarId> tvars;
  collect_tvars(b, tvars);
  for (const auto t : tvars) session().declare_real(smt::template_var(t));
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const std::string x = smt::program_var(static_cast<VarId>(i));
    if (!session().declared(x)) {
      session().declare_int(x);
      session().add("(>= " + x + " 0)");
    }
  }
}

bool Feasibility::satisfiable(const BoolExpr::Ptr& b) {
  if (auto d = interval_decision(b)) return *d;
  const std::string formula = smt::encode(*b, true);
  if (auto it = cache_.find(formula); it != cache_.end()) return it->second;
  declare(*b);
  auto& s = session();
  s.push();
  s.add(formula);
  ++solver_calls_;
  const SatResult r = s.check();
  s.pop();
  const bool sat = r != SatResult::Unsat;
  cache_.emplace(formula, sat);
  return sat;
}

std::optional<State> Feasibility::witness(const BoolExpr::Ptr& b) {
  if (b->is_false()) return std::nullopt;
  declare(*b);
  auto& s = session();
  s.push();
  s.add(smt::encode(*b, true));
  ++solver_calls_;
  const SatResult r = s.check();
  std::optional<State> out;
  if (r == SatResult::Sat) {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < names_.size(); ++i) vars.push_back(smt::program_var(static_cast<VarId>(i)));
    const auto model = s.values(vars);
    State st(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) st[i] = numerator(model.at(vars[i]));
    out = st;
  }
  s.pop();
  return out;
}

BoolExpr::Ptr simplify_guard(const BoolExpr::Ptr& b, Feasibility& feas) {
  if (b->kind() != BoolExpr::Kind::And) return b;
  std::vector<BoolExpr::Ptr> parts = b->children();
  if (parts.size() < 2 || parts.size() > 24) return b;
  for (std::size_t i = 0; i < parts.size() && parts.size() > 1;) {
    std::vector<BoolExpr::Ptr> rest;
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (j != i) rest.push_back(parts[j]);
    rest.push_back(BoolExpr::negate(parts[i]));
    if (!feas.satisfiable(BoolExpr::conjoin(rest))) {
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return BoolExpr::conjoin(parts);
}

std::vector<BoolExpr::Ptr> product_cells(const std::vector<std::vector<BoolExpr::Ptr>>& partitions,
                                         Feasibility& feas) {
  std::vector<BoolExpr::Ptr> out;
  auto dfs = [&](auto&& self, std::size_t level, const BoolExpr::Ptr& acc) -> void {
    if (level == partitions.size()) {
      out.push_back(acc);
      return;
    }
    for (const auto& g : partitions[level]) {
      auto next = BoolExpr::conjoin(acc, g);
      if (next->is_false()) continue;
      if (!g->is_true() && !feas.satisfiable(next)) continue;
      self(self, level + 1, next);
    }
  };
  dfs(dfs, 0, BoolExpr::truth());
  return out;
}

namespace {

struct Cell {
  std::vector<Literal> lits;  // valid when conjunctive
  bool conjunctive = false;
  BoolExpr::Ptr guard;
};

bool same_literal(const Literal& a, const Literal& b) { return a.positive == b.positive && a.atom == b.atom; }

BoolExpr::Ptr from_literals(const std::vector<Literal>& lits) {
  std::vector<BoolExpr::Ptr> parts;
  for (const auto& l : lits) {
    auto a = BoolExpr::less(l.atom);
    parts.push_back(l.positive ? a : BoolExpr::negate(a));
  }
  return BoolExpr::conjoin(parts);
}

// a & l, a & !l  ->  a
bool try_merge(const Cell& x, const Cell& y, Cell& merged) {
  if (!x.conjunctive || !y.conjunctive || x.lits.size() != y.lits.size()) return false;
  std::optional<std::size_t> flip;
  std::vector<bool> used(y.lits.size(), false);
  for (std::size_t i = 0; i < x.lits.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < y.lits.size(); ++j) {
      if (!used[j] && same_literal(x.lits[i], y.lits[j])) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (found) continue;
    if (flip) return false;
    flip = i;
  }
  if (!flip) return false;
  const Literal& l = x.lits[*flip];
  for (std::size_t j = 0; j < y.lits.size(); ++j) {
    if (used[j]) continue;
    if (!(y.lits[j].atom == l.atom) || y.lits[j].positive == l.positive) return false;
  }
  merged.conjunctive = true;
  merged.lits.clear();
  for (std::size_t i = 0; i < x.lits.size(); ++i)
    if (i != *flip) merged.lits.push_back(x.lits[i]);
  merged.guard = from_literals(merged.lits);
  return true;
}

BoolExpr::Ptr merge_guards(std::vector<BoolExpr::Ptr> guards) {
  std::vector<Cell> cells;
  for (auto& g : guards) {
    Cell c;
    c.guard = g;
    c.conjunctive = literal_conjunction(g, c.lits);
    cells.push_back(std::move(c));
  }
  bool changed = true;
  while (changed && cells.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < cells.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < cells.size() && !changed; ++j) {
        Cell m;
        if (try_merge(cells[i], cells[j], m)) {
          cells[i] = std::move(m);
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  std::vector<BoolExpr::Ptr> parts;
  for (auto& c : cells) parts.push_back(c.guard);
  return parts.size() == 1 ? parts.front() : BoolExpr::disjoin(parts);
}

}  // namespace

PiecewiseTemplate normalize(const GuardedSum& gs, Feasibility& feas, const NormalizeOptions& options) {
  std::vector<std::pair<BoolExpr::Ptr, TemplatedLinExpr>> cells;
  auto dfs = [&](auto&& self, std::size_t level, const BoolExpr::Ptr& acc, const TemplatedLinExpr& body) -> void {
    if (level == gs.groups.size()) {
      cells.emplace_back(acc, body);
      return;
    }
    for (const auto& t : gs.groups[level]) {
      auto next = BoolExpr::conjoin(acc, t.guard);
      if (next->is_false()) continue;
      if (!t.guard->is_true() && !feas.satisfiable(next)) continue;
      self(self, level + 1, next, body + t.body);
    }
  };
  dfs(dfs, 0, BoolExpr::truth(), TemplatedLinExpr());

  PiecewiseTemplate out;
  if (cells.empty()) return constant_expectation(0);
  if (options.merge) {
    std::vector<std::pair<TemplatedLinExpr, std::vector<BoolExpr::Ptr>>> by_body;
    for (auto& [g, body] : cells) {
      auto it = std::find_if(by_body.begin(), by_body.end(), [&](const auto& e) { return e.first == body; });
      if (it == by_body.end()) {
        by_body.push_back({body, {g}});
      } else {
        it->second.push_back(g);
      }
    }
    for (auto& [body, guards] : by_body) out.pieces.push_back({merge_guards(std::move(guards)), body});
  } else {
    for (auto& [g, body] : cells) out.pieces.push_back({g, body});
  }
  if (options.simplify)
    for (auto& p : out.pieces) p.guard = simplify_guard(p.guard, feas);
  canonicalize(out, feas.names());
  return out;
}

PartitionReport check_partition(const PiecewiseTemplate& t, Feasibility& feas) {
  PartitionReport r;
  for (std::size_t i = 0; i < t.pieces.size() && r.disjoint; ++i) {
    for (std::size_t j = i + 1; j < t.pieces.size(); ++j) {
      if (feas.satisfiable(BoolExpr::conjoin(t.pieces[i].guard, t.pieces[j].guard))) {
        r.disjoint = false;
        r.detail = "pieces " + std::to_string(i) + " and " + std::to_string(j) + " overlap";
        break;
      }
    }
  }
  std::vector<BoolExpr::Ptr> none;
  for (const auto& p : t.pieces) none.push_back(BoolExpr::negate(p.guard));
  if (feas.satisfiable(BoolExpr::conjoin(none))) {
    r.covering = false;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += "some state satisfies no piece";
  }
  return r;
}

}  // namespace probinv
