#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "probinv/motzkin.hpp"
#include "probinv/smt.hpp"
#include "support.hpp"

using namespace probinv;
using namespace probinv::test;

namespace {

LinExpr lin(std::initializer_list<Rational> coeffs, const Rational& c) {
  LinExpr e(c);
  VarId k = 0;
  for (const auto& q : coeffs) e.set_coeff(k++, q);
  return e;
}

/// Satisfiable encoding (plus extra assertions) returns the template valuation, else nullopt.
std::optional<Valuation> solve(const UniversalImplication& u, const std::vector<TVarId>& tvars,
                               const std::string& extra = "") {
  SmtSession s;
  for (const auto t : tvars) s.declare_real(smt::template_var(t));
  const auto enc = motzkin_encode(u, "m");
  for (const auto& m : enc.multipliers) s.declare_real(m);
  s.add(enc.formula);
  if (!extra.empty()) s.add(extra);
  const auto r = s.check();
  REQUIRE(r != SatResult::Unknown);
  if (r == SatResult::Unsat) return std::nullopt;
  std::vector<std::string> names;
  for (const auto t : tvars) names.push_back(smt::template_var(t));
  const auto model = s.values(names);
  Valuation v;
  for (const auto t : tvars) v[t] = model.at(smt::template_var(t));
  return v;
}

}  // namespace

TEST_CASE("solver sessions") {
  SmtSession s;
  CHECK(s.check() == SatResult::Sat);
  s.declare_real("a");
  s.push();
  s.add("(>= a 0)");
  s.add("(<= a (- 1))");
  CHECK(s.check() == SatResult::Unsat);
  s.pop();
  s.add("(= (* 4 a) 1)");
  REQUIRE(s.check() == SatResult::Sat);
  CHECK(s.values({"a"}).at("a") == Rational(1) / 4);
  CHECK(s.checks() == 3);

  s.push();
  s.declare_int("k");
  CHECK(s.declared("k"));
  s.pop();
  CHECK_FALSE(s.declared("k"));
}

TEST_CASE("model values decode exactly") {
  CHECK(sexpr_to_rational(parse_sexpr("(/ 1.0 4.0)")) == Rational(1) / 4);
  CHECK(sexpr_to_rational(parse_sexpr("(- (/ 9 80000000))")) == Rational(-9) / 80000000);
  CHECK(sexpr_to_rational(parse_sexpr("0.125")) == Rational(1) / 8);
  CHECK(sexpr_to_rational(parse_sexpr("17")) == 17);
  CHECK_THROWS_AS(sexpr_to_rational(parse_sexpr("(+ 1 2)")), SolverError);
}

TEST_CASE("term builders") {
  CHECK(smt::num(Rational(-3) / 4) == "(- (/ 3 4))");
  CHECK(smt::program_var(2) == "p2");
  CHECK(smt::template_var(5) == "t5");
  // x/2 < 1 over the integers becomes x <= 1
  TemplatedLinExpr e = TemplatedLinExpr::variable(0, TCoeff(Rational(1) / 2)) - TemplatedLinExpr(TCoeff(1));
  CHECK(smt::integral(concrete(e)) == lin({1}, -2));
  SmtSession s;
  s.declare_int("p0");
  s.add("(>= p0 0)");
  s.add(smt::less_zero(e, true));
  s.add("(= p0 1)");
  CHECK(s.check() == SatResult::Sat);
}

TEST_CASE("missing solver is reported") {
  SolverOptions o;
  o.executable = "/nonexistent/solver";
  auto run = [&] {
    SmtSession s(o);
    s.declare_real("a");
    return s.check();
  };
  CHECK_THROWS_AS(run(), SolverError);
}

TEST_CASE("sessions dump their scripts") {
  const auto dir = std::filesystem::temp_directory_path() / "probinv-dump-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    SolverOptions o;
    o.dump_path = dir.string();
    SmtSession s(o);
    s.declare_real("a");
    s.add("(> a 0)");
    CHECK(s.check() == SatResult::Sat);
  }
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    std::ifstream in(e.path());
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.find("(check-sat)") != std::string::npos);
  }
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("motzkin: valid implication") {
  // forall x: x <= 5 ==> x <= 10
  UniversalImplication u(1);
  u.add_non_strict(lin({1}, -5));
  u.set_target(TemplatedLinExpr::variable(0) - TemplatedLinExpr(TCoeff(10)));
  CHECK(solve(u, {}));
  // one certificate: 1*(5 - x) + (x - 10) + 5 = 0
  SmtSession s;
  const auto enc = motzkin_encode(u, "m");
  REQUIRE(enc.multipliers.size() == 2);
  for (const auto& m : enc.multipliers) s.declare_real(m);
  s.add(enc.formula);
  s.add("(= m0 1)");
  s.add("(= m1 5)");
  CHECK(s.check() == SatResult::Sat);
}

TEST_CASE("motzkin: invalid implication") {
  UniversalImplication u(1);
  u.add_non_strict(lin({1}, -5));
  u.set_target(TemplatedLinExpr::variable(0) - TemplatedLinExpr(TCoeff(3)));
  CHECK_FALSE(solve(u, {}));
}

TEST_CASE("motzkin: true over the naturals, false over the reals") {
  // forall x in N: 2x <= 1 ==> x <= 0; x = 1/2 breaks the real version
  const std::vector<Literal> premise{{TemplatedLinExpr(TCoeff(1)) - TemplatedLinExpr::variable(0, TCoeff(2)), false}};
  const auto u = lift(premise, TemplatedLinExpr::variable(0), 1);
  CHECK_FALSE(solve(u, {}));
  for (long x = 0; x < 50; ++x) CHECK(u.holds_at({Rational(x)}));
}

TEST_CASE("motzkin: strict premises and integer tightening") {
  // forall x in N: x < 1 ==> x <= 0 holds only after tightening to x + 1 <= 1
  const std::vector<Literal> lt1{{TemplatedLinExpr::variable(0) - TemplatedLinExpr(TCoeff(1)), true}};
  CHECK(solve(lift(lt1, TemplatedLinExpr::variable(0), 1), {}));
  LiftOptions plain;
  plain.integer_tightening = false;
  CHECK_FALSE(solve(lift(lt1, TemplatedLinExpr::variable(0), 1, plain), {}));
  // an infeasible premise implies anything: x < 0 over the naturals
  const std::vector<Literal> neg{{TemplatedLinExpr::variable(0), true}};
  CHECK(solve(lift(neg, TemplatedLinExpr(TCoeff(5)), 1), {}));
}

TEST_CASE("motzkin: satisfiable encodings hold on sampled points") {
  Rng rng(42);
  std::uniform_int_distribution<int> coef(-3, 3), rhs(0, 12), dim(1, 3), rows(1, 3);
  int sat = 0, points = 0;
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = static_cast<std::size_t>(dim(rng));
    std::vector<Literal> premise;
    const int r = rows(rng);
    for (int i = 0; i < r; ++i) {
      TemplatedLinExpr e(TCoeff(Rational(-rhs(rng))));
      for (std::size_t k = 0; k < n; ++k) e.set_coeff(static_cast<VarId>(k), TCoeff(Rational(coef(rng))));
      premise.push_back({e, coef(rng) > 0});
    }
    // target: sum_k t_k x_k - t_n <= 0 with the t's constrained to random boxes
    TemplatedLinExpr target(TCoeff::var(static_cast<TVarId>(n), -1));
    std::vector<TVarId> tvars;
    std::string extra = "(and";
    for (std::size_t k = 0; k <= n; ++k) {
      tvars.push_back(static_cast<TVarId>(k));
      if (k < n) target.set_coeff(static_cast<VarId>(k), TCoeff::var(static_cast<TVarId>(k)));
      extra += " (>= " + smt::template_var(static_cast<TVarId>(k)) + " " + smt::num(Rational(coef(rng))) + ")";
    }
    extra += ")";
    const auto u = lift(premise, target, n);
    const auto v = solve(u, tvars, extra);
    if (!v) continue;
    ++sat;
    std::uniform_int_distribution<int> pt(0, 25);
    for (int k = 0; k < 1000; ++k) {
      std::vector<Rational> x(n);
      for (auto& xi : x) xi = pt(rng);
      CHECK(u.holds_at(x, *v));
      ++points;
    }
  }
  CHECK(sat >= 5);
  MESSAGE(sat << " satisfiable encodings, " << points << " points checked");
}
