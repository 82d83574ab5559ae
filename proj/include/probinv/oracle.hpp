#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "probinv/expectation.hpp"
#include "probinv/program.hpp"
#include "probinv/verifier.hpp"

namespace probinv {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit Markov chain of a finite-state loop: guard states first, then the one-step frontier.
struct ExplicitChain {
  std::vector<State> states;
  std::size_t guard_count = 0;
  /// Outgoing distribution of each guard state.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> successors;
  /// f on frontier states, indexed by state index - guard_count.
  std::vector<Rational> terminal;
  std::map<State, std::size_t> index;

  std::optional<std::size_t> find(const State& s) const;
  bool in_guard(std::size_t i) const { return i < guard_count; }
  std::size_t transitions() const;
};

/// Throws OracleError when a variable is unbounded or S_phi exceeds cap.
ExplicitChain build_chain(const LoopProgram& loop, const PiecewiseTemplate& f, std::size_t cap = 100000);

/// Least fixed point of Phi_f on every chain state (frontier states carry f).
/// Exact elimination per strongly connected component; components above max_component throw OracleError.
std::vector<Rational> exact_lfp(const ExplicitChain& chain, std::size_t max_component = 3000);

/// Checks 0 <= I, Phi_f(I) <= I and I <= g at every chain state; first violation in that order.
std::optional<Counterexample> pointwise_check(const PiecewiseTemplate& i, const ExplicitChain& chain,
                                              const PiecewiseTemplate& g);

/// One piece per guard state with its value; the rest of the state space carries f.
PiecewiseTemplate lookup_expectation(const LoopProgram& loop, const ExplicitChain& chain,
                                     const std::vector<Rational>& values, const PiecewiseTemplate& f);

/// "src dst p/q" per transition.
void dump_chain(std::ostream& os, const ExplicitChain& chain);

}  // namespace probinv
