#include "probinv/refinement.hpp"

#include <chrono>

#include "probinv/analysis.hpp"

namespace probinv {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Static:
      return "static";
    case Strategy::Dynamic:
      return "dynamic";
    case Strategy::Inductivity:
      return "inductivity";
  }
  return "?";
}

Strategy parse_strategy(const std::string& text) {
  if (text == "static") return Strategy::Static;
  if (text == "dynamic") return Strategy::Dynamic;
  if (text == "inductivity") return Strategy::Inductivity;
  throw std::invalid_argument("unknown strategy '" + text + "'");
}

const char* to_string(OuterResult::Outcome o) {
  switch (o) {
    case OuterResult::Outcome::Invariant:
      return "invariant";
    case OuterResult::Outcome::Exhausted:
      return "exhausted";
    case OuterResult::Outcome::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

TemplateBuilder::TemplateBuilder(const LoopProgram& loop, PiecewiseTemplate f, Feasibility& feas)
    : loop_(loop), f_(std::move(f)), feas_(feas), phi_(loop_guard(loop)) {
  if (has_tvars(f_) || has_infinity(f_)) throw std::invalid_argument("postexpectation must be concrete and finite");
  for (const auto& p : f_.pieces) {
    const auto g = BoolExpr::conjoin(BoolExpr::negate(phi_), p.guard);
    if (g->is_false() || !feas_.satisfiable(g)) continue;
    terminal_.push_back({simplify_guard(g, feas_), p.body});
  }
  cells_ = branch_cells(loop_, feas_);
}

TVarId TemplateBuilder::fresh() { return next_++; }

TemplatedLinExpr TemplateBuilder::fresh_affine() {
  TemplatedLinExpr e;
  for (std::size_t i = 0; i < loop_.num_vars(); ++i) e.set_coeff(static_cast<VarId>(i), TCoeff::var(fresh()));
  e.set_constant(TCoeff::var(fresh()));
  return e;
}

PiecewiseTemplate TemplateBuilder::assemble(const std::vector<BoolExpr::Ptr>& guard_cells) {
  PiecewiseTemplate t;
  for (const auto& c : guard_cells) t.pieces.push_back({c, fresh_affine()});
  for (const auto& p : terminal_) t.pieces.push_back(p);
  canonicalize(t, loop_.names());
  return t;
}

PiecewiseTemplate TemplateBuilder::initial() { return assemble(cells_); }

PiecewiseTemplate TemplateBuilder::refine_static(int i) {
  if (!loop_.all_bounded()) throw StrategyError("static refinement needs declared bounds on every variable");
  std::vector<std::vector<BoolExpr::Ptr>> partitions{cells_};
  for (std::size_t v = 0; v < loop_.num_vars(); ++v) {
    const auto& d = loop_.vars[v];
    const Integer n = *d.hi - *d.lo + 1;
    const Integer parts = n < i ? n : Integer(i);
    if (parts < 2) continue;
    const auto x = TemplatedLinExpr::variable(static_cast<VarId>(v));
    std::vector<Integer> cuts;
    for (Integer k = 1; k < parts; ++k) cuts.push_back(*d.lo + (k * n) / parts);
    std::vector<BoolExpr::Ptr> intervals;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
      std::vector<BoolExpr::Ptr> sides;
      if (k > 0) sides.push_back(BoolExpr::less_equal(TemplatedLinExpr(TCoeff(Rational(cuts[k - 1]))), x));
      if (k < cuts.size()) sides.push_back(BoolExpr::less(x, TemplatedLinExpr(TCoeff(Rational(cuts[k])))));
      intervals.push_back(BoolExpr::conjoin(sides));
    }
    partitions.push_back(std::move(intervals));
  }
  auto cells = product_cells(partitions, feas_);
  for (auto& c : cells) c = simplify_guard(c, feas_);
  return assemble(cells);
}

PiecewiseTemplate TemplateBuilder::refine_dynamic(int round) {
  struct Cell {
    BoolExpr::Ptr guard;
    std::vector<VarId> split;  // variables not fixed by the base cell
  };
  std::vector<Cell> cells;
  for (const auto& c : cells_) {
    Cell cell{c, {}};
    const auto w = feas_.witness(c);
    for (std::size_t v = 0; v < loop_.num_vars(); ++v) {
      const auto x = TemplatedLinExpr::variable(static_cast<VarId>(v));
      if (w && !feas_.satisfiable(BoolExpr::conjoin(
                   c, BoolExpr::negate(BoolExpr::equal(x, TemplatedLinExpr(TCoeff(Rational((*w)[v]))))))))
        continue;
      cell.split.push_back(static_cast<VarId>(v));
    }
    cells.push_back(std::move(cell));
  }
  for (int r = 2; r <= round; ++r) {
    std::vector<std::pair<VarId, TCoeff>> bounds;
    for (std::size_t v = 0; v < loop_.num_vars(); ++v) bounds.push_back({static_cast<VarId>(v), TCoeff::var(fresh())});
    std::vector<Cell> next;
    for (const auto& c : cells) {
      std::vector<BoolExpr::Ptr> parts{c.guard};
      for (const auto v : c.split) {
        const auto x = TemplatedLinExpr::variable(v);
        const TemplatedLinExpr l(bounds[static_cast<std::size_t>(v)].second);
        std::vector<BoolExpr::Ptr> grown;
        for (const auto& p : parts) {
          grown.push_back(BoolExpr::conjoin(p, BoolExpr::less_equal(x, l)));
          grown.push_back(BoolExpr::conjoin(p, BoolExpr::less(l, x)));
        }
        parts = std::move(grown);
      }
      for (auto& p : parts) next.push_back({p, c.split});
    }
    cells = std::move(next);
  }
  std::vector<BoolExpr::Ptr> guards;
  for (const auto& c : cells) guards.push_back(c.guard);
  return assemble(guards);
}

PiecewiseTemplate TemplateBuilder::refine_inductivity(const PiecewiseTemplate& t, const PiecewiseTemplate& last_i,
                                                      const PiecewiseTemplate& last_psi) {
  if (!is_fixed_partition(t)) throw StrategyError("inductivity-guided refinement needs a fixed-partition template");
  std::vector<BoolExpr::Ptr> base;
  for (const auto& p : t.pieces)
    if (feas_.satisfiable(BoolExpr::conjoin(phi_, p.guard))) base.push_back(p.guard);
  std::vector<BoolExpr::Ptr> split_on;
  for (const auto& c : last_psi.pieces) {
    for (const auto& b : last_i.pieces) {
      const auto region = BoolExpr::conjoin(c.guard, b.guard);
      if (region->is_false()) continue;
      if (!c.body || !b.body) {
        split_on.push_back(region);
        continue;
      }
      split_on.push_back(BoolExpr::conjoin(region, BoolExpr::less_equal(*c.body, *b.body)));
      split_on.push_back(BoolExpr::conjoin(region, BoolExpr::less(*b.body, *c.body)));
    }
  }
  auto cells = product_cells({base, split_on}, feas_);
  for (auto& c : cells) c = simplify_guard(c, feas_);
  return assemble(cells);
}

std::size_t TemplateBuilder::pieces_over_guard(const PiecewiseTemplate& t) {
  std::size_t n = 0;
  for (const auto& p : t.pieces)
    if (feas_.satisfiable(BoolExpr::conjoin(phi_, p.guard))) ++n;
  return n;
}

OuterResult outer_loop(const LoopProgram& loop, const PiecewiseTemplate& f, const PiecewiseTemplate& g,
                       Feasibility& feas, const OuterConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  if (config.strategy == Strategy::Static && !loop.all_bounded())
    throw StrategyError("static refinement needs declared bounds on every variable");

  OuterResult out;
  TemplateBuilder builder(loop, f, feas);
  CharFunctional psi(loop, f, feas);
  PiecewiseTemplate t = builder.initial();
  std::string produced_by = "initial";
  std::optional<CegisResult> previous;
  bool fell_back_dynamic = false;

  for (int round = 1; round <= config.max_rounds; ++round) {
    if (round > 1) {
      if (config.strategy == Strategy::Static) {
        t = builder.refine_static(round);
        produced_by = "static";
      } else if (config.strategy == Strategy::Dynamic || fell_back_dynamic) {
        t = builder.refine_dynamic(round);
        produced_by = "dynamic";
      } else if (previous && previous->last_candidate && is_fixed_partition(t)) {
        t = builder.refine_inductivity(t, *previous->last_candidate, *previous->last_psi);
        produced_by = "inductivity";
      } else if (loop.all_bounded()) {
        t = builder.refine_static(round);
        produced_by = "static";
      } else {
        fell_back_dynamic = true;
        t = builder.refine_dynamic(round);
        produced_by = "dynamic";
      }
    }
    if (config.log)
      *config.log << "round " << round << " (" << produced_by << "), " << t.size() << " pieces\n"
                  << to_multiline_string(t, loop.names());

    CegisConfig cc = config.cegis;
    if (config.timeout_s > 0) {
      const double left = config.timeout_s - elapsed();
      if (left <= 0) {
        out.message = "timeout";
        break;
      }
      cc.timeout_s = cc.timeout_s > 0 ? std::min(cc.timeout_s, left) : left;
    }
    CegisResult r = cegis(psi, t, g, cc);
    RoundRecord rec;
    rec.round = round;
    rec.strategy = produced_by;
    rec.pieces = t.size();
    rec.pieces_over_guard = builder.pieces_over_guard(t);
    rec.counterexamples = r.counterexamples.size();
    rec.outcome = r.outcome;
    rec.safe_mode_active = r.safe_mode_active;
    rec.elapsed_s = r.elapsed_s;
    out.rounds.push_back(rec);
    out.total_counterexamples += r.counterexamples.size();
    out.final_template = t;
    out.counterexamples = r.counterexamples;
    if (r.outcome == CegisResult::Outcome::Invariant) {
      out.outcome = OuterResult::Outcome::Invariant;
      out.invariant = r.invariant;
      out.valuation = r.valuation;
      break;
    }
    if (r.outcome == CegisResult::Outcome::Inconclusive) {
      out.message = r.message;
      break;
    }
    previous = std::move(r);
    if (round == config.max_rounds) {
      out.outcome = OuterResult::Outcome::Exhausted;
      out.message = "round cap reached";
    }
  }
  out.elapsed_s = elapsed();
  return out;
}

}  // namespace probinv
