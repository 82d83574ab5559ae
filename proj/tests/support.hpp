#pragma once

#include <algorithm>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "probinv/analysis.hpp"
#include "probinv/parser.hpp"

#ifndef PROBINV_BENCHMARKS
#error "PROBINV_BENCHMARKS must point at the benchmark corpus"
#endif

namespace probinv::test {

inline std::string bench_path(const std::string& rel) { return std::string(PROBINV_BENCHMARKS) + "/" + rel; }

struct Case {
  LoopProgram program;
  std::unique_ptr<Feasibility> feas;
  Property property;

  std::vector<std::string> names() const { return program.names(); }
};

inline std::unique_ptr<Case> load_program(const std::string& text) {
  auto c = std::make_unique<Case>();
  c->program = parse_program(text);
  c->feas = std::make_unique<Feasibility>(c->program.names());
  return c;
}

inline std::unique_ptr<Case> load_case(const std::string& bench, const std::string& prop = "prop1.txt") {
  auto c = load_program(read_file(bench_path(bench + "/program.pgcl")));
  c->property = parse_property(read_file(bench_path(bench + "/" + prop)), c->program, *c->feas);
  return c;
}

inline std::unique_ptr<Case> load_case_text(const std::string& program, const std::string& property) {
  auto c = load_program(program);
  c->property = parse_property(property, c->program, *c->feas);
  return c;
}

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, int num_range = 20, int den_max = 6) {
  std::uniform_int_distribution<int> n(-num_range, num_range), d(1, den_max);
  return Rational(n(rng)) / Rational(d(rng));
}

/// Uniform state inside the declared box; unbounded variables drawn from [0, unbounded_hi].
inline State random_state(const LoopProgram& p, Rng& rng, long unbounded_hi = 30) {
  State s(p.num_vars());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& d = p.vars[i];
    long lo = d.lo ? static_cast<long>(to_int64(*d.lo)) : 0;
    long hi = d.hi ? static_cast<long>(to_int64(*d.hi)) : unbounded_hi;
    // small boxes near the bounds matter most; mix full range with edges
    std::uniform_int_distribution<long> full(lo, hi), pick(0, 3), near(0, 3);
    const int mode = static_cast<int>(pick(rng));
    long v = full(rng);
    if (mode == 1) v = std::min(hi, lo + near(rng));
    if (mode == 2) v = std::max(lo, hi - near(rng));
    s[i] = v;
  }
  return s;
}

inline Valuation random_valuation(const std::set<TVarId>& tvars, Rng& rng) {
  Valuation v;
  for (const auto t : tvars) v[t] = random_rational(rng);
  return v;
}

/// Valuations near base: copies, uniform rescalings, and single-coordinate nudges.
inline std::vector<Valuation> around(const Valuation& base, std::size_t n, Rng& rng) {
  std::vector<Valuation> out;
  std::uniform_int_distribution<int> mode(0, 2), pct(-6, 6), pick(0, static_cast<int>(base.size()) - 1);
  for (std::size_t k = 0; k < n; ++k) {
    Valuation v = base;
    switch (mode(rng)) {
      case 0:
        break;
      case 1: {
        const Rational f = 1 + Rational(pct(rng)) / 100;
        for (auto& [id, q] : v) q *= f;
        break;
      }
      default: {
        if (v.empty()) break;
        auto it = std::next(v.begin(), pick(rng));
        const Rational nudge = Rational(pct(rng)) / 1000;
        it->second = it->second * (1 + nudge) + nudge / 100;
        break;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(PROBINV_BENCHMARKS))
    if (std::filesystem::exists(e.path() / "program.pgcl")) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline TemplatedLinExpr random_affine(std::size_t n, Rng& rng) {
  TemplatedLinExpr e(TCoeff(random_rational(rng)));
  for (std::size_t i = 0; i < n; ++i) e.set_coeff(static_cast<VarId>(i), TCoeff(random_rational(rng, 5, 4)));
  return e;
}

/// [atom]*E1 + [!atom]*E2 with atom a random halfspace through the sampled region.
inline PiecewiseTemplate random_concrete(const LoopProgram& p, Rng& rng) {
  const std::size_t n = p.num_vars();
  TemplatedLinExpr lhs;
  std::uniform_int_distribution<int> coef(-2, 2);
  for (std::size_t i = 0; i < n; ++i) lhs.set_coeff(static_cast<VarId>(i), TCoeff(Rational(coef(rng))));
  const State anchor = random_state(p, rng);
  const Rational at = concrete(lhs).evaluate(anchor);
  const auto atom = BoolExpr::less(lhs, TemplatedLinExpr(TCoeff(at + std::uniform_int_distribution<int>(-1, 1)(rng))));
  return {{{atom, random_affine(n, rng)}, {BoolExpr::negate(atom), random_affine(n, rng)}}};
}

inline State random_guard_state(const LoopProgram& p, Rng& rng) {
  for (int tries = 0; tries < 2000; ++tries) {
    const State s = random_state(p, rng);
    if (evaluate(*p.guard, s)) return s;
  }
  return {};
}

}  // namespace probinv::test
