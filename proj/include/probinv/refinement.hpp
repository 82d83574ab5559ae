#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "probinv/cegis.hpp"

namespace probinv {

enum class Strategy { Static, Dynamic, Inductivity };

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& text);

class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Natural templates for one loop and postexpectation; every fresh piece gets its own template variables.
class TemplateBuilder {
 public:
  TemplateBuilder(const LoopProgram& loop, PiecewiseTemplate f, Feasibility& feas);

  /// [!phi]*f plus one fresh affine piece per branch cell of the guard region.
  PiecewiseTemplate initial();
  /// Branch cells times a grid of near-equal integer intervals per variable (i >= 2). Needs bounded variables.
  PiecewiseTemplate refine_static(int i);
  /// round - 1 successive splits of every guard piece by fresh boundaries x <= l / l < x.
  PiecewiseTemplate refine_dynamic(int round);
  /// Splits the guard pieces of t where last_i is (not) inductive.
  PiecewiseTemplate refine_inductivity(const PiecewiseTemplate& t, const PiecewiseTemplate& last_i,
                                       const PiecewiseTemplate& last_psi);

  /// sum_x t_x * x + t_0 with fresh t's.
  TemplatedLinExpr fresh_affine();
  TVarId fresh();
  /// Pieces that intersect the loop guard.
  std::size_t pieces_over_guard(const PiecewiseTemplate& t);

  const std::vector<BoolExpr::Ptr>& cells() const { return cells_; }

 private:
  PiecewiseTemplate assemble(const std::vector<BoolExpr::Ptr>& guard_cells);

  const LoopProgram& loop_;
  PiecewiseTemplate f_;
  Feasibility& feas_;
  BoolExpr::Ptr phi_;
  std::vector<Piece> terminal_;
  std::vector<BoolExpr::Ptr> cells_;
  TVarId next_ = 0;
};

struct OuterConfig {
  Strategy strategy = Strategy::Inductivity;
  int max_rounds = 8;
  double timeout_s = 0;
  CegisConfig cegis;
  /// Per-round template dumps.
  std::ostream* log = nullptr;
};

struct RoundRecord {
  int round = 0;
  std::string strategy;  // what produced this round's template
  std::size_t pieces = 0;
  std::size_t pieces_over_guard = 0;
  std::size_t counterexamples = 0;
  CegisResult::Outcome outcome = CegisResult::Outcome::Inconclusive;
  bool safe_mode_active = false;
  double elapsed_s = 0;
};

struct OuterResult {
  enum class Outcome { Invariant, Exhausted, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  PiecewiseTemplate invariant;
  PiecewiseTemplate final_template;
  Valuation valuation;  // invariant = instantiate(final_template, valuation)
  std::vector<RoundRecord> rounds;
  std::vector<State> counterexamples;  // S' of the final round
  std::size_t total_counterexamples = 0;
  std::string message;
  double elapsed_s = 0;
};

const char* to_string(OuterResult::Outcome o);

/// Template refinement around CEGIS until an invariant, the round cap, or the timeout.
OuterResult outer_loop(const LoopProgram& loop, const PiecewiseTemplate& f, const PiecewiseTemplate& g,
                       Feasibility& feas, const OuterConfig& config);

}  // namespace probinv
