#include "probinv/verifier.hpp"

#include "probinv/wp.hpp"

namespace probinv {

const char* to_string(Violation v) {
  switch (v) {
    case Violation::WellDefinedness:
      return "well-definedness";
    case Violation::Inductivity:
      return "inductivity";
    case Violation::Safety:
      return "safety";
  }
  return "?";
}

bool confirms(const Counterexample& c) {
  switch (c.kind) {
    case Violation::WellDefinedness:
      return !c.value.is_infinite() && c.value.value() < 0;
    case Violation::Inductivity:
      return c.value < c.phi;
    case Violation::Safety:
      return c.bound < c.value;
  }
  return false;
}

Integer manhattan(const State& a, const State& b) {
  Integer d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return d;
}

namespace {

std::vector<std::string> var_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(smt::program_var(static_cast<VarId>(i)));
  return out;
}

void declare_state(SmtSession& s, std::size_t n) {
  for (const auto& x : var_names(n)) {
    s.declare_int(x);
    s.add("(>= " + x + " 0)");
  }
}

State decode(SmtSession& s, std::size_t n) {
  const auto vars = var_names(n);
  const auto model = s.values(vars);
  State st(n);
  for (std::size_t i = 0; i < n; ++i) st[i] = numerator(model.at(vars[i]));
  return st;
}

std::string guard_term(const BoolExpr::Ptr& g) { return smt::encode(*g, true); }

}  // namespace

std::optional<State> check_well_defined(const PiecewiseTemplate& i, const std::vector<std::string>& names,
                                        const SolverOptions& options, bool* inconclusive) {
  if (has_tvars(i)) throw std::invalid_argument("check_well_defined needs a concrete expectation");
  std::vector<std::string> parts;
  for (const auto& p : i.pieces)
    if (p.body) parts.push_back(smt::conj({guard_term(p.guard), smt::less_zero(*p.body, true)}));
  if (inconclusive) *inconclusive = false;
  if (parts.empty()) return std::nullopt;
  SmtSession s(options);
  declare_state(s, names.size());
  s.add(smt::disj(parts));
  const SatResult r = s.check();
  if (r == SatResult::Unknown && inconclusive) *inconclusive = true;
  if (r != SatResult::Sat) return std::nullopt;
  return decode(s, names.size());
}

Verifier::Verifier(const LoopProgram& loop, PiecewiseTemplate f, PiecewiseTemplate g, SolverOptions options)
    : loop_(loop), f_(std::move(f)), g_(std::move(g)), options_(std::move(options)) {}

SmtSession& Verifier::session() {
  if (!session_) {
    session_ = std::make_unique<SmtSession>(options_);
    declare_state(*session_, loop_.num_vars());
  }
  return *session_;
}

std::string Verifier::query(Violation kind, const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i) const {
  if (has_tvars(i) || has_tvars(psi_i)) throw std::invalid_argument("verifier needs concrete candidates");
  std::vector<std::string> parts;
  switch (kind) {
    case Violation::WellDefinedness:
      for (const auto& p : i.pieces)
        if (p.body) parts.push_back(smt::conj({guard_term(p.guard), smt::less_zero(*p.body, true)}));
      break;
    case Violation::Inductivity:
      for (const auto& c : psi_i.pieces) {
        for (const auto& b : i.pieces) {
          if (!b.body) continue;  // I = INF is never exceeded
          if (!c.body) {
            parts.push_back(smt::conj({guard_term(c.guard), guard_term(b.guard)}));
            continue;
          }
          const TemplatedLinExpr diff = *b.body - *c.body;
          if (diff.width() == 0 && !(diff.constant().constant() < 0)) continue;
          parts.push_back(smt::conj({guard_term(c.guard), guard_term(b.guard), smt::less_zero(diff, true)}));
        }
      }
      break;
    case Violation::Safety:
      for (const auto& h : g_.pieces) {
        if (!h.body) continue;
        for (const auto& b : i.pieces) {
          if (!b.body) {
            parts.push_back(smt::conj({guard_term(h.guard), guard_term(b.guard)}));
            continue;
          }
          parts.push_back(smt::conj({guard_term(h.guard), guard_term(b.guard), smt::less_zero(*h.body - *b.body, true)}));
        }
      }
      break;
  }
  return parts.empty() ? "false" : smt::disj(parts);
}

VerifyResult Verifier::run(const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i, const std::string& extra) {
  VerifyResult out;
  auto& s = session();
  for (const Violation kind : {Violation::WellDefinedness, Violation::Inductivity, Violation::Safety}) {
    const std::string q = query(kind, i, psi_i);
    if (q == "false") continue;
    s.push();
    s.add(q);
    if (!extra.empty()) s.add(extra);
    const SatResult r = s.check();
    if (r == SatResult::Unknown) {
      out.status = VerifyResult::Status::Inconclusive;
      out.diagnostics = std::string(to_string(kind)) + " query: " + s.diagnostics();
      s.pop();
      return out;
    }
    if (r == SatResult::Sat) {
      Counterexample c;
      c.state = decode(s, loop_.num_vars());
      s.pop();
      c.kind = kind;
      c.value = evaluate(i, c.state);
      c.phi = char_fun_at(loop_, f_, i, c.state);
      c.bound = evaluate(g_, c.state);
      if (!confirms(c))
        throw std::logic_error(std::string("solver model does not witness a ") + to_string(kind) + " violation");
      out.status = VerifyResult::Status::Violated;
      out.cex = std::move(c);
      return out;
    }
    s.pop();
  }
  out.status = VerifyResult::Status::Admissible;
  return out;
}

VerifyResult Verifier::verify(const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i) { return run(i, psi_i, ""); }

VerifyResult Verifier::cverify(const PiecewiseTemplate& i, const PiecewiseTemplate& psi_i, const State& last,
                               const Rational& m) {
  std::vector<std::string> terms;
  for (std::size_t k = 0; k < last.size(); ++k) {
    const std::string x = smt::program_var(static_cast<VarId>(k));
    const std::string v = smt::num(last[k]);
    terms.push_back("(ite (>= " + x + " " + v + ") (- " + x + " " + v + ") (- " + v + " " + x + "))");
  }
  const std::string far = "(>= " + smt::sum(terms) + " " + smt::num(ceil(m)) + ")";
  VerifyResult r = run(i, psi_i, far);
  if (r.status == VerifyResult::Status::Violated) {
    r.distance_achieved = true;
    return r;
  }
  if (r.status == VerifyResult::Status::Inconclusive) return r;
  return run(i, psi_i, "");
}

}  // namespace probinv
