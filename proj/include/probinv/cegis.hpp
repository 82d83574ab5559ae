#pragma once

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "probinv/synthesizer.hpp"
#include "probinv/verifier.hpp"
#include "probinv/wp.hpp"

namespace probinv {

struct CegisConfig {
  SynthMode mode = SynthMode::Plain;
  /// Cooperative verifier distance factor d > 1; empty disables cooperation.
  std::optional<Rational> coop_d = Rational(2);
  Rational m0 = 1;
  std::size_t budget = 5000;
  double timeout_s = 0;  // 0: none
  SolverOptions solver;
  /// JSON-lines trace sink.
  std::ostream* trace = nullptr;

  void validate() const;
};

struct CegisIteration {
  Valuation valuation;
  std::optional<Counterexample> cex;
  Rational m = 0;
  bool distance_achieved = false;
  double elapsed_s = 0;
};

struct CegisResult {
  enum class Outcome { Invariant, NoInstance, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  PiecewiseTemplate invariant;  // instantiated, on success
  Valuation valuation;
  std::vector<State> counterexamples;  // S'
  std::vector<CegisIteration> trace;
  /// Last instantiated candidate and its Phi_f, kept for inductivity-guided refinement.
  std::optional<PiecewiseTemplate> last_candidate;
  std::optional<PiecewiseTemplate> last_psi;
  bool safe_mode_active = false;
  std::string message;
  double elapsed_s = 0;
};

const char* to_string(CegisResult::Outcome o);

/// Alg. 1 for template t.
CegisResult cegis(CharFunctional& psi, const PiecewiseTemplate& t, const PiecewiseTemplate& g, const CegisConfig& config);

}  // namespace probinv
