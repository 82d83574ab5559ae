#include <doctest.h>

#include <filesystem>

#include "support.hpp"

using namespace probinv;
using namespace probinv::test;

namespace {

void collect_choices(const Stmt& s, std::vector<Rational>& out) {
  if (s.kind() == Stmt::Kind::Choice) out.push_back(s.prob());
  for (const auto& p : s.parts()) collect_choices(*p, out);
}

std::vector<std::string> corpus_dirs() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(PROBINV_BENCHMARKS))
    if (std::filesystem::exists(e.path() / "program.pgcl")) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("0.999") == Rational(999) / 1000);
  CHECK(parse_rational("1/5") == Rational(1) / 5);
  CHECK(parse_rational("-3") == -3);
  CHECK(parse_rational("1e-3") == Rational(1) / 1000);
  CHECK(parse_rational("0999") == 999);
  CHECK(to_string(Rational(-9) / 80000000) == "-9/80000000");
  CHECK(to_string(Rational(4)) == "4");
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(floor(Rational(-1) / 2) == -1);
  CHECK(ceil(Rational(-1) / 2) == 0);
}

TEST_CASE("brp listing") {
  const auto p = parse_program(
      "nat failed [0,5];\nnat sent [0,8000000];\n"
      "while(failed<5 & sent<8000000){ {failed:=0; sent:=sent+1}[0.99]{failed:=failed+1} }");
  REQUIRE(p.num_vars() == 2);
  CHECK(p.names() == std::vector<std::string>{"failed", "sent"});
  REQUIRE(p.body->kind() == Stmt::Kind::Choice);
  CHECK(p.body->prob() == Rational(99) / 100);
  CHECK(p.body->lhs()->kind() == Stmt::Kind::Seq);
  CHECK(p.body->rhs()->kind() == Stmt::Kind::Assign);
  CHECK(p.all_bounded());
}

TEST_CASE("minimal loop") {
  const auto p = parse_program("nat x;\nwhile(x<1){skip}");
  CHECK(p.body->kind() == Stmt::Kind::Skip);
  CHECK_FALSE(p.all_bounded());
}

TEST_CASE("categorical assignment becomes a chain of choices") {
  const auto p = parse_program(read_file(bench_path("rw/program.pgcl")));
  std::vector<Rational> probs;
  collect_choices(*p.body, probs);
  REQUIRE(probs.size() == 5);
  CHECK(probs[0] == Rational(1) / 2);
  CHECK(probs[1] == Rational(1) / 5);
  CHECK(probs[2] == Rational(1) / 4);
  CHECK(probs[3] == Rational(1) / 3);
  CHECK(probs[4] == Rational(1) / 2);
}

TEST_CASE("program errors") {
  auto error_at = [](const std::string& text) -> std::pair<int, int> {
    try {
      parse_program(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(error_at("nat x;\nwhile(x<1){ y:=1 }") == std::pair{2, 13});
  CHECK(error_at("nat x;\nwhile(x<1){ {x:=1}[1.5]{skip} }").first == 2);
  CHECK(error_at("nat x;\nwhile(x<1){ x := 0 : 1/2 + 1 : 1/3 }").first == 2);
  CHECK(error_at("nat x;\nwhile(x<1){ x:=x*x }").first == 2);
  CHECK(error_at("nat x;\nwhile(x<1){ skip } while(x<1){skip}").first == 2);
  CHECK(error_at("nat x\nwhile(x<1){skip}").first == 2);
  CHECK_THROWS_AS(parse_program("nat x [0,5];\nwhile(x<5){ x:=x-1 }"), UnderflowError);
  CHECK_NOTHROW(parse_program("nat x [0,5];\nwhile(0<x){ x:=x-1 }"));
}

TEST_CASE("expectations") {
  auto c = load_program("nat fail [0,10];\nnat sent [0,8000000];\nwhile(fail<10){skip}");
  const auto names = c->names();
  auto e = parse_expectation("[fail=5] + [!(fail=5)]*0", c->program, *c->feas);
  CHECK(e.size() == 2);
  CHECK(evaluate(e, {5, 3}) == 1);
  CHECK(evaluate(e, {4, 3}) == 0);

  auto z = parse_expectation("0", c->program, *c->feas);
  CHECK(z.size() == 1);
  CHECK(z.pieces[0].guard->is_true());

  // an uncovered region gets an implicit zero piece
  auto partial = parse_expectation("[fail<3]*(fail+sent)", c->program, *c->feas);
  CHECK(partial.size() == 2);
  CHECK(evaluate(partial, {7, 100}) == 0);
  CHECK(evaluate(partial, {2, 100}) == 102);

  CHECK_THROWS_AS(parse_expectation("[fail<3]*1 + [fail<5]*2", c->program, *c->feas), ParseError);
  CHECK_THROWS_AS(parse_expectation("[fail<3]*(0-1)", c->program, *c->feas), ParseError);
  CHECK_THROWS_AS(parse_expectation("[x<3]*1", c->program, *c->feas), ParseError);
}

TEST_CASE("infinite pieces") {
  auto c = load_program("nat c;\nnat x;\nwhile(c<=0){ {c:=1}[0.5]{x:=x+1} }");
  auto g = parse_expectation("[c=0]*(2*x+1) + [!(c=0)]*INF", c->program, *c->feas);
  REQUIRE(g.size() == 2);
  CHECK(evaluate(g, {0, 4}) == 9);
  CHECK(evaluate(g, {1, 5}).is_infinite());
  CHECK(has_infinity(g));

  auto g2 = parse_expectation("[c=0 & x=0]*1 + [!(c=0 & x=0)]*INF", c->program, *c->feas);
  CHECK(evaluate(g2, {1, 5}).is_infinite());
  CHECK(evaluate(g2, {0, 0}) == 1);
}

TEST_CASE("property files") {
  auto c = load_program("nat c;\nnat x;\nwhile(c<=0){ {c:=1}[0.5]{x:=x+1} }");
  CHECK_THROWS_AS(parse_property("post: x\n", c->program, *c->feas), ParseError);
  CHECK_THROWS_AS(parse_property("post: INF\npre: 1\n", c->program, *c->feas), ParseError);
  const auto p = parse_property("# comment\npost: x\npre: [c=0]*(2*x+1) + [!(c=0)]*INF\n", c->program, *c->feas);
  CHECK(evaluate(p.post, {0, 7}) == 7);
}

TEST_CASE("corpus round trip") {
  const auto dirs = corpus_dirs();
  REQUIRE(dirs.size() >= 10);
  for (const auto& d : dirs) {
    CAPTURE(d);
    auto c = load_case(d);
    const std::string printed = to_string(c->program);
    const auto again = parse_program(printed);
    CHECK(structurally_equal(c->program, again));
    CHECK(to_string(again) == printed);

    for (const auto* e : {&c->property.post, &c->property.pre}) {
      const std::string text = to_string(*e, c->names());
      const auto back = parse_expectation(text, c->program, *c->feas);
      CHECK(to_string(back, c->names()) == text);
      Rng rng(7);
      for (int k = 0; k < 50; ++k) {
        const State s = random_state(c->program, rng);
        CHECK(evaluate(back, s) == evaluate(*e, s));
      }
    }
  }
}

TEST_CASE("canonical invariant text parses back") {
  auto c = load_case("brp_running");
  const std::string text =
      "[fail<10 & sent<8000000]*(-9/80000000*sent + 79991/720000000*fail + 9/10) + [fail=10]";
  const auto inv = parse_expectation(text, c->program, *c->feas);
  const auto reparsed = parse_expectation(to_string(inv, c->names()), c->program, *c->feas);
  const auto multi = parse_expectation(to_multiline_string(inv, c->names()), c->program, *c->feas);
  for (const State& s : std::vector<State>{{0, 0}, {9, 7999999}, {10, 5}, {3, 8000000}}) {
    CHECK(evaluate(reparsed, s) == evaluate(inv, s));
    CHECK(evaluate(multi, s) == evaluate(inv, s));
  }
  CHECK(evaluate(inv, {0, 0}) == Rational(9) / 10);
}
