#pragma once

#include <memory>
#include <optional>
#include <string>

#include "probinv/expectation.hpp"
#include "probinv/program.hpp"
#include "probinv/smt.hpp"

namespace probinv {

enum class Violation { WellDefinedness, Inductivity, Safety };

const char* to_string(Violation v);

/// A state s in Cex(I) with the values that witness it.
struct Counterexample {
  State state;
  Violation kind = Violation::Inductivity;
  ExtendedRational value = 0;   // I(s)
  ExtendedRational phi = 0;     // Phi_f(I)(s)
  ExtendedRational bound = 0;   // g(s)
};

/// Recomputes the flagged condition at cex.state by exact evaluation.
bool confirms(const Counterexample& cex);

struct VerifyResult {
  enum class Status { Admissible, Violated, Inconclusive };
  Status status = Status::Inconclusive;
  std::optional<Counterexample> cex;
  /// Cooperative mode: the distance-constrained query produced the counterexample.
  bool distance_achieved = false;
  std::string diagnostics;

  bool admissible() const { return status == Status::Admissible; }
};

/// Piecewise I has a piece with a negative value somewhere in its region; returns a witness state.
/// Inconclusive solver answers are reported through the optional flag.
std::optional<State> check_well_defined(const PiecewiseTemplate& i, const std::vector<std::string>& names,
                                        const SolverOptions& options = {}, bool* inconclusive = nullptr);

/// SMT verifier for concrete candidates over all of N^n.
class Verifier {
 public:
  Verifier(const LoopProgram& loop, PiecewiseTemplate f, PiecewiseTemplate g, SolverOptions options = {});

  /// i and psi_i = Phi_f(i) are concrete.
  VerifyResult verify(const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i);
  /// Prefers a counterexample at Manhattan distance at least m from last.
  VerifyResult cverify(const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i, const State& last,
                       const Rational& m);

  /// The existential query for one violation kind, as SMT-LIB text over p<i>.
  std::string query(Violation kind, const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i) const;

  std::size_t solver_checks() const { return session_ ? session_->checks() : 0; }

 private:
  SmtSession& session();
  VerifyResult run(const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i, const std::string& extra);

  const LoopProgram& loop_;
  PiecewiseTemplate f_;
  PiecewiseTemplate g_;
  SolverOptions options_;
  std::unique_ptr<SmtSession> session_;
};

/// Sum over variables of |a(x) - b(x)|.
Integer manhattan(const State& a, const State& b);

}  // namespace probinv
