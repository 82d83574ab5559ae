#include "probinv/cegis.hpp"

#include <nlohmann/json.hpp>

namespace probinv {

const char* to_string(CegisResult::Outcome o) {
  switch (o) {
    case CegisResult::Outcome::Invariant:
      return "invariant";
    case CegisResult::Outcome::NoInstance:
      return "no-instance";
    case CegisResult::Outcome::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

void CegisConfig::validate() const {
  if (coop_d && *coop_d <= 1) throw std::invalid_argument("cooperative distance factor must exceed 1");
  if (m0 <= 0) throw std::invalid_argument("initial distance bound must be positive");
  if (budget == 0) throw std::invalid_argument("counterexample budget must be positive");
}

namespace {

nlohmann::json state_json(const State& s, const std::vector<std::string>& names) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < s.size(); ++i) j[names[i]] = s[i].str();
  return j;
}

nlohmann::json valuation_json(const Valuation& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [t, q] : v) j[tvar_name(t)] = to_string(q);
  return j;
}

}  // namespace

CegisResult cegis(CharFunctional& psi, const PiecewiseTemplate& t, const PiecewiseTemplate& g, const CegisConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  const auto names = psi.loop().names();

  CegisResult out;
  const PiecewiseTemplate& psi_t = psi.apply(t);
  Synthesizer synth(t, psi_t, g, config.mode, psi.feasibility(), config.solver);
  out.safe_mode_active = synth.safe_active();
  Verifier verifier(psi.loop(), psi.post(), g, config.solver);
  Rational m = config.m0;
  std::optional<State> last;

  for (;;) {
    if (config.timeout_s > 0 && elapsed() > config.timeout_s) {
      out.message = "timeout";
      break;
    }
    if (out.counterexamples.size() >= config.budget) {
      out.message = "counterexample budget exhausted";
      break;
    }
    const SynthResult sr = synth.solve();
    if (sr.status == SynthResult::Status::None) {
      out.outcome = CegisResult::Outcome::NoInstance;
      break;
    }
    if (sr.status == SynthResult::Status::Inconclusive) {
      out.message = "synthesizer: " + sr.diagnostics;
      break;
    }
    CegisIteration it;
    it.valuation = sr.valuation;
    it.m = m;
    PiecewiseTemplate cand = instantiate(t, sr.valuation);
    PiecewiseTemplate cand_psi = instantiate(psi_t, sr.valuation);
    const VerifyResult vr =
        config.coop_d && last ? verifier.cverify(cand, cand_psi, *last, m) : verifier.verify(cand, cand_psi);
    out.last_candidate = cand;
    out.last_psi = cand_psi;
    it.elapsed_s = elapsed();
    if (vr.status == VerifyResult::Status::Inconclusive) {
      out.message = "verifier: " + vr.diagnostics;
      out.trace.push_back(std::move(it));
      break;
    }
    if (vr.status == VerifyResult::Status::Admissible) {
      out.outcome = CegisResult::Outcome::Invariant;
      out.invariant = std::move(cand);
      out.valuation = sr.valuation;
      out.trace.push_back(std::move(it));
      if (config.trace) {
        nlohmann::json j{{"iteration", out.trace.size()}, {"valuation", valuation_json(sr.valuation)},
                         {"result", "admissible"}, {"elapsed_s", it.elapsed_s}};
        *config.trace << j.dump() << "\n";
      }
      break;
    }
    it.cex = vr.cex;
    it.distance_achieved = vr.distance_achieved;
    if (config.coop_d && last) m = vr.distance_achieved ? m * *config.coop_d : m / *config.coop_d;
    if (config.trace) {
      nlohmann::json j{{"iteration", out.trace.size() + 1},
                       {"valuation", valuation_json(sr.valuation)},
                       {"counterexample", state_json(vr.cex->state, names)},
                       {"violation", to_string(vr.cex->kind)},
                       {"m", to_string(it.m)},
                       {"distance_achieved", vr.distance_achieved},
                       {"elapsed_s", it.elapsed_s}};
      *config.trace << j.dump() << "\n";
    }
    last = vr.cex->state;
    synth.add_state(vr.cex->state);
    out.counterexamples.push_back(vr.cex->state);
    out.trace.push_back(std::move(it));
  }
  out.elapsed_s = elapsed();
  return out;
}

}  // namespace probinv
