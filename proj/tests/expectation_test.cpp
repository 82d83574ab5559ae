#include <doctest.h>

#include "probinv/verifier.hpp"
#include "support.hpp"

using namespace probinv;
using namespace probinv::test;

namespace {

TemplatedLinExpr var(VarId x) { return TemplatedLinExpr::variable(x); }
TemplatedLinExpr cst(const Rational& q) { return TemplatedLinExpr(TCoeff(q)); }
TemplatedLinExpr tv(TVarId t) { return TemplatedLinExpr(TCoeff::var(t)); }

// fail = 0, sent = 1
BoolExpr::Ptr brp_guard() {
  return BoolExpr::conjoin(BoolExpr::less(var(0), cst(10)), BoolExpr::less(var(1), cst(8000000)));
}

/// alpha*sent + beta*fail + gamma over the guard, 1 on fail=10, 0 elsewhere.
PiecewiseTemplate brp_template() {
  TemplatedLinExpr body;
  body.set_coeff(1, TCoeff::var(0));
  body.set_coeff(0, TCoeff::var(1));
  body.set_constant(TCoeff::var(2));
  const auto phi = brp_guard();
  const auto done = BoolExpr::equal(var(0), cst(10));
  return {{{phi, body},
           {done, cst(1)},
           {BoolExpr::conjoin(BoolExpr::negate(phi), BoolExpr::negate(done)), cst(0)}}};
}

/// Two affine pieces over the guard split at sent <= delta (t9).
PiecewiseTemplate split_template() {
  auto body = [](TVarId base) {
    TemplatedLinExpr b;
    b.set_coeff(1, TCoeff::var(base));
    b.set_coeff(0, TCoeff::var(base + 1));
    b.set_constant(TCoeff::var(base + 2));
    return b;
  };
  const auto phi = brp_guard();
  const auto lo = BoolExpr::less_equal(var(1), tv(9));
  const auto done = BoolExpr::equal(var(0), cst(10));
  return {{{BoolExpr::conjoin(phi, lo), body(0)},
           {BoolExpr::conjoin(phi, BoolExpr::negate(lo)), body(3)},
           {done, cst(1)},
           {BoolExpr::conjoin(BoolExpr::negate(phi), BoolExpr::negate(done)), cst(0)}}};
}

Rational brute_sum(const GuardedSum& gs, const State& s, const Valuation& v) {
  Rational out = 0;
  for (const auto& group : gs.groups)
    for (const auto& term : group)
      if (evaluate(*term.guard, s, v)) out += evaluate(term.body, s, v);
  return out;
}

}  // namespace

TEST_CASE("template evaluation at the paper's states") {
  const auto t = brp_template();
  const Valuation zero{{0, 0}, {1, 0}, {2, 0}};
  CHECK(evaluate(t, {9, 7999999}, zero) == 0);

  const auto cases = evaluate_at_state(t, {9, 7999999});
  REQUIRE(cases.size() == 1);
  REQUIRE(cases[0].value);
  CHECK(cases[0].value->constant() == 0);
  CHECK(cases[0].value->terms().at(0) == 7999999);
  CHECK(cases[0].value->terms().at(1) == 9);
  CHECK(cases[0].value->terms().at(2) == 1);

  const Valuation hand{{0, Rational(-9) / 80000000}, {1, Rational(79991) / 720000000}, {2, Rational(9) / 10}};
  CHECK(evaluate(t, {0, 0}, hand) == Rational(9) / 10);
  const auto inst = instantiate(t, hand);
  CHECK_FALSE(has_tvars(inst));
  CHECK(evaluate(inst, {0, 0}) == Rational(9) / 10);
  CHECK(evaluate(inst, {10, 3}) == 1);
  CHECK(evaluate(inst, {4, 8000000}) == 0);

  const auto zero_inst = instantiate(t, zero);
  CHECK(evaluate(zero_inst, {3, 3}) == 0);
}

TEST_CASE("variable partition evaluates to a case split") {
  const auto t = split_template();
  CHECK_FALSE(is_fixed_partition(t));
  const auto cases = evaluate_at_state(t, {5, 2});
  REQUIRE(cases.size() == 2);
  for (const auto& c : cases) {
    REQUIRE(c.value);
    const auto& terms = c.value->terms();
    REQUIRE(terms.size() == 3);
    // coefficients 2, 5, 1 on (alpha_k, beta_k, gamma_k)
    const TVarId base = terms.begin()->first;
    CHECK((base == 0 || base == 3));
    CHECK(terms.at(base) == 2);
    CHECK(terms.at(base + 1) == 5);
    CHECK(terms.at(base + 2) == 1);
    CHECK(has_tvars(*c.condition));
  }
  // at a terminal state there is only the constant piece
  const auto at_done = evaluate_at_state(t, {10, 2});
  int live = 0;
  for (const auto& c : at_done)
    if (!c.condition->is_false()) ++live;
  CHECK(live == 1);
}

TEST_CASE("infinity against finite values") {
  auto c = load_program("nat c;\nnat x;\nwhile(c<=0){ {c:=1}[0.5]{x:=x+1} }");
  const auto g = parse_expectation("[c=0 & x=0]*1 + [!(c=0 & x=0)]*INF", c->program, *c->feas);
  CHECK(evaluate(g, {1, 5}).is_infinite());
  CHECK(ExtendedRational(5) <= ExtendedRational::infinity());
  CHECK_FALSE(ExtendedRational::infinity() <= ExtendedRational(5));
  CHECK(ExtendedRational::infinity() <= ExtendedRational::infinity());
  CHECK(to_string(ExtendedRational::infinity()) == "INF");
}

TEST_CASE("partition violations are detected on evaluation") {
  PiecewiseTemplate overlapping{{{BoolExpr::less(var(0), cst(5)), cst(1)}, {BoolExpr::less(var(0), cst(7)), cst(2)}}};
  CHECK_THROWS_AS(evaluate(overlapping, {3}), PartitionError);
  CHECK_THROWS_AS(evaluate(overlapping, {9}), PartitionError);
  Feasibility feas({"x"});
  const auto report = check_partition(overlapping, feas);
  CHECK_FALSE(report.disjoint);
  CHECK_FALSE(report.covering);
}

TEST_CASE("substitution") {
  // [fail=10][fail/fail+1] = [fail+1=10]
  PiecewiseTemplate f{{{BoolExpr::equal(var(0), cst(10)), cst(1)},
                       {BoolExpr::negate(BoolExpr::equal(var(0), cst(10))), cst(0)}}};
  const auto g = substitute(f, 0, LinExpr::variable(0) + LinExpr(Rational(1)));
  CHECK(evaluate(g, {9, 0}) == 1);
  CHECK(evaluate(g, {10, 0}) == 0);

  // (alpha*sent + gamma)[sent/sent+1] = alpha*sent + alpha + gamma
  TemplatedLinExpr e;
  e.set_coeff(1, TCoeff::var(0));
  e.set_constant(TCoeff::var(2));
  const auto e2 = e.substitute(1, LinExpr::variable(1) + LinExpr(Rational(1)));
  CHECK(e2.coeff(1) == TCoeff::var(0));
  CHECK(e2.constant() == TCoeff::var(0) + TCoeff::var(2));

  // I[sent/sent+1][fail/0]
  const auto t = brp_template();
  const auto shifted = substitute(substitute(t, 1, LinExpr::variable(1) + LinExpr(Rational(1))), 0, LinExpr());
  const Valuation v{{0, 3}, {1, 5}, {2, 7}};
  CHECK(evaluate(shifted, {6, 11}, v) == evaluate(t, {0, 12}, v));
}

TEST_CASE("substitution lemma on random inputs") {
  Rng rng(11);
  const auto t = split_template();
  const auto tvars = collect_tvars(t);
  for (int k = 0; k < 300; ++k) {
    const Valuation v = random_valuation(tvars, rng);
    State s{std::uniform_int_distribution<long>(0, 12)(rng), std::uniform_int_distribution<long>(0, 20)(rng)};
    LinExpr e = LinExpr::variable(static_cast<VarId>(k % 2)) * Rational(k % 3) +
                LinExpr(Rational(static_cast<int>(k % 5)));
    const VarId x = static_cast<VarId>((k / 2) % 2);
    State moved = s;
    moved[static_cast<std::size_t>(x)] = numerator(e.evaluate(s));
    CHECK(evaluate(substitute(t, x, e), s, v) == evaluate(t, moved, v));
  }
}

TEST_CASE("instantiate commutes with evaluate") {
  Rng rng(5);
  for (const auto& t : {brp_template(), split_template()}) {
    const auto tvars = collect_tvars(t);
    for (int k = 0; k < 100; ++k) {
      const Valuation v = random_valuation(tvars, rng);
      const State s{std::uniform_int_distribution<long>(0, 11)(rng),
                    std::uniform_int_distribution<long>(0, 30)(rng)};
      CHECK(evaluate(instantiate(t, v), s) == evaluate(t, s, v));
    }
  }
}

TEST_CASE("normalize a two term sum") {
  Feasibility feas({"a", "b", "x", "y"});
  const auto a5 = BoolExpr::less(var(0), cst(5));
  const auto b5 = BoolExpr::less(var(1), cst(5));
  GuardedSum gs{{{{a5, var(2)}, {BoolExpr::negate(a5), cst(0)}}, {{b5, var(3)}, {BoolExpr::negate(b5), cst(0)}}}};
  const auto t = normalize(gs, feas);
  CHECK(t.size() == 4);
  CHECK(check_partition(t, feas).ok());
  CHECK(evaluate(t, {1, 1, 3, 4}) == 7);
  CHECK(evaluate(t, {1, 6, 3, 4}) == 3);
  CHECK(evaluate(t, {6, 1, 3, 4}) == 4);
  CHECK(evaluate(t, {6, 6, 3, 4}) == 0);

  GuardedSum single{{{{BoolExpr::truth(), var(2)}}}};
  const auto one = normalize(single, feas);
  REQUIRE(one.size() == 1);
  CHECK(one.pieces[0].guard->is_true());

  const auto empty = normalize(GuardedSum{}, feas);
  REQUIRE(empty.size() == 1);
  CHECK(evaluate(empty, {1, 2, 3, 4}) == 0);
}

TEST_CASE("normalize agrees with the guarded sum pointwise") {
  auto c = load_case("brp_running");
  const auto t = brp_template();
  // [!phi]*f + [phi]*(0.999*T[sent+1][fail/0] + 0.001*T[fail+1])
  const auto phi = brp_guard();
  const auto post = to_guarded_sum(c->property.post);
  const auto fwd = substitute(substitute(to_guarded_sum(t), 1, LinExpr::variable(1) + LinExpr(Rational(1))), 0,
                              LinExpr());
  const auto fail = substitute(to_guarded_sum(t), 0, LinExpr::variable(0) + LinExpr(Rational(1)));
  const auto step = add(scale(fwd, Rational(999) / 1000), scale(fail, Rational(1) / 1000));
  const auto gs = branch(phi, step, post);
  const auto norm = normalize(gs, *c->feas);
  CHECK(check_partition(norm, *c->feas).ok());
  Rng rng(3);
  const auto tvars = collect_tvars(t);
  for (int k = 0; k < 1000; ++k) {
    const Valuation v = random_valuation(tvars, rng);
    const State s = random_state(c->program, rng);
    CHECK(evaluate(norm, s, v) == brute_sum(gs, s, v));
    CHECK(evaluate(gs, s, v) == brute_sum(gs, s, v));
  }
}

TEST_CASE("well-definedness witnesses") {
  const std::vector<std::string> names{"x"};
  TemplatedLinExpr xm10 = var(0) - cst(10);
  PiecewiseTemplate bad{{{BoolExpr::less(var(0), cst(5)), xm10}, {BoolExpr::negate(BoolExpr::less(var(0), cst(5))), cst(0)}}};
  const auto w = check_well_defined(bad, names);
  REQUIRE(w);
  CHECK((*w)[0] < 5);

  PiecewiseTemplate zero{{{BoolExpr::truth(), cst(0)}}};
  CHECK_FALSE(check_well_defined(zero, names));

  const Valuation hand{{0, Rational(-9) / 80000000}, {1, Rational(79991) / 720000000}, {2, Rational(9) / 10}};
  CHECK_FALSE(check_well_defined(instantiate(brp_template(), hand), {"fail", "sent"}));
}

TEST_CASE("canonical piece order") {
  auto t = brp_template();
  auto u = t;
  std::reverse(u.pieces.begin(), u.pieces.end());
  const std::vector<std::string> names{"fail", "sent"};
  canonicalize(t, names);
  canonicalize(u, names);
  CHECK(to_string(t, names) == to_string(u, names));
}
