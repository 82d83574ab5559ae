#include "probinv/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "probinv/analysis.hpp"

namespace probinv {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view src, int first_line = 1) {
  std::vector<Token> out;
  int line = first_line;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      bool dot = false;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || (src[j] == '.' && !dot))) {
        if (src[j] == '.') dot = true;
        ++j;
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    static const char* two[] = {":=", "<=", ">=", "!=", "==", "&&", "||"};
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        out.push_back({Tok::Symbol, t, l, cl});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string one = "<>=!&|()[]{};,+-*/:";
    if (one.find(c) != std::string::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is(const std::string& sym, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Tok::Symbol || t.kind == Tok::Ident) && t.text == sym;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(const std::string& sym) {
    if (!is(sym)) return false;
    ++pos_;
    return true;
  }
  Token expect(const std::string& sym) {
    if (!is(sym)) fail("expected '" + sym + "'" + found());
    return next();
  }
  std::string found() const {
    const Token& t = peek();
    return t.kind == Tok::End ? " but reached end of input" : " but found '" + t.text + "'";
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.column); }

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool is_keyword(const std::string& s) {
  return s == "nat" || s == "while" || s == "if" || s == "else" || s == "skip" || s == "true" || s == "false" ||
         s == "not" || s == "INF" || s == "inf";
}

// Shared guard grammar: or := and ('|' and)*, and := unary ('&' unary)*, unary := '!' unary | '(' or ')' | cmp.
template <typename Builder>
typename Builder::G parse_or(Cursor& c, Builder& b);

template <typename Builder>
typename Builder::G parse_cmp(Cursor& c, Builder& b) {
  auto lhs = b.operand(c);
  const Token op = c.peek();
  if (op.kind != Tok::Symbol) c.fail("expected a comparison" + c.found());
  c.next();
  auto rhs = b.operand(c);
  if (op.text == "<") return b.less(lhs, rhs);
  if (op.text == ">") return b.less(rhs, lhs);
  if (op.text == "<=") return b.negate(b.less(rhs, lhs));
  if (op.text == ">=") return b.negate(b.less(lhs, rhs));
  if (op.text == "=" || op.text == "==") return b.conjoin(b.negate(b.less(lhs, rhs)), b.negate(b.less(rhs, lhs)));
  if (op.text == "!=") return b.negate(b.conjoin(b.negate(b.less(lhs, rhs)), b.negate(b.less(rhs, lhs))));
  c.fail_at(op, "expected a comparison operator but found '" + op.text + "'");
}

template <typename Builder>
typename Builder::G parse_unary(Cursor& c, Builder& b) {
  if (c.accept("!") || c.accept("not")) return b.negate(parse_unary(c, b));
  if (c.accept("true")) return b.truth();
  if (c.accept("false")) return b.negate(b.truth());
  if (c.is("(")) {
    const std::size_t save = c.pos();
    try {
      return parse_cmp(c, b);
    } catch (const ParseError&) {
      c.reset(save);
    }
    c.expect("(");
    auto g = parse_or(c, b);
    c.expect(")");
    return g;
  }
  return parse_cmp(c, b);
}

template <typename Builder>
typename Builder::G parse_and(Cursor& c, Builder& b) {
  auto g = parse_unary(c, b);
  while (c.accept("&") || c.accept("&&")) g = b.conjoin(g, parse_unary(c, b));
  return g;
}

template <typename Builder>
typename Builder::G parse_or(Cursor& c, Builder& b) {
  auto g = parse_and(c, b);
  while (c.accept("|") || c.accept("||")) {
    auto h = parse_and(c, b);
    g = b.negate(b.conjoin(b.negate(g), b.negate(h)));
  }
  return g;
}

// --- program syntax ---------------------------------------------------------

class ProgramParser {
 public:
  using G = Guard::Ptr;

  explicit ProgramParser(Cursor& c) : c_(c) {}

  LoopProgram parse() {
    LoopProgram p;
    while (c_.is("nat")) {
      c_.next();
      const Token name = c_.next();
      if (name.kind != Tok::Ident || is_keyword(name.text)) c_.fail_at(name, "expected a variable name");
      for (const auto& v : p.vars)
        if (v.name == name.text) c_.fail_at(name, "variable '" + name.text + "' declared twice");
      VarDecl d{name.text, std::nullopt, std::nullopt};
      if (c_.accept("[")) {
        d.lo = natural();
        c_.expect(",");
        d.hi = natural();
        c_.expect("]");
        if (*d.hi < *d.lo) c_.fail_at(name, "empty range for '" + name.text + "'");
      }
      c_.expect(";");
      p.vars.push_back(std::move(d));
    }
    vars_ = &p.vars;
    c_.expect("while");
    c_.expect("(");
    p.guard = parse_or(c_, *this);
    c_.expect(")");
    c_.expect("{");
    p.body = block();
    c_.expect("}");
    if (!c_.at_end()) c_.fail("expected end of program" + c_.found());
    return p;
  }

  // Builder interface for the guard grammar.
  ProgramExpr::Ptr operand(Cursor&) { return expr(); }
  G less(const ProgramExpr::Ptr& a, const ProgramExpr::Ptr& b) { return Guard::less(a, b); }
  G negate(const G& g) { return Guard::negate(g); }
  G conjoin(const G& a, const G& b) { return Guard::conjoin(a, b); }
  G truth() { return Guard::negate(Guard::less(ProgramExpr::constant(0), ProgramExpr::constant(0))); }

 private:
  Integer natural() {
    const Token t = c_.next();
    if (t.kind != Tok::Number || t.text.find('.') != std::string::npos) c_.fail_at(t, "expected a natural number");
    return numerator(parse_rational(t.text));
  }

  Rational probability() {
    const Token t = c_.next();
    if (t.kind != Tok::Number) c_.fail_at(t, "expected a probability");
    Rational p = parse_rational(t.text);
    if (c_.accept("/")) {
      const Token d = c_.next();
      if (d.kind != Tok::Number) c_.fail_at(d, "expected a denominator");
      const Rational den = parse_rational(d.text);
      if (den == 0) c_.fail_at(d, "division by zero");
      p /= den;
    }
    if (p < 0 || p > 1) c_.fail_at(t, "probability " + to_string(p) + " outside [0,1]");
    return p;
  }

  VarId variable(const Token& t) {
    for (std::size_t i = 0; i < vars_->size(); ++i)
      if ((*vars_)[i].name == t.text) return static_cast<VarId>(i);
    c_.fail_at(t, "undeclared variable '" + t.text + "'");
  }

  ProgramExpr::Ptr factor() {
    const Token t = c_.peek();
    if (c_.accept("(")) {
      auto e = expr();
      c_.expect(")");
      return e;
    }
    if (t.kind == Tok::Number) return ProgramExpr::constant(natural());
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      c_.next();
      return ProgramExpr::var(variable(t));
    }
    c_.fail("expected an expression" + c_.found());
  }

  ProgramExpr::Ptr term() {
    auto lhs = factor();
    while (c_.is("*")) {
      const Token op = c_.next();
      auto rhs = factor();
      const bool lc = lhs->kind() == ProgramExpr::Kind::Const;
      const bool rc = rhs->kind() == ProgramExpr::Kind::Const;
      if (lc && rc) {
        lhs = ProgramExpr::constant(lhs->value() * rhs->value());
      } else if (lc) {
        lhs = ProgramExpr::scale(lhs->value(), rhs);
      } else if (rc) {
        lhs = ProgramExpr::scale(rhs->value(), lhs);
      } else {
        c_.fail_at(op, "product of two variables is not linear");
      }
    }
    return lhs;
  }

  ProgramExpr::Ptr expr() {
    auto e = term();
    for (;;) {
      if (c_.accept("+")) {
        e = ProgramExpr::add(e, term());
      } else if (c_.accept("-")) {
        e = ProgramExpr::sub(e, term());
      } else {
        return e;
      }
    }
  }

  Stmt::Ptr block() {
    std::vector<Stmt::Ptr> parts;
    while (!c_.is("}") && !c_.at_end()) {
      parts.push_back(statement());
      while (c_.accept(";")) {
      }
    }
    return Stmt::seq(std::move(parts));
  }

  Stmt::Ptr statement() {
    const Token t = c_.peek();
    if (c_.accept("skip")) return Stmt::skip();
    if (c_.accept("{")) {
      auto lhs = block();
      c_.expect("}");
      if (!c_.accept("[")) return lhs;
      const Rational p = probability();
      c_.expect("]");
      c_.expect("{");
      auto rhs = block();
      c_.expect("}");
      return Stmt::choice(p, lhs, rhs);
    }
    if (c_.accept("if")) {
      c_.expect("(");
      auto cond = parse_or(c_, *this);
      c_.expect(")");
      c_.expect("{");
      auto then_branch = block();
      c_.expect("}");
      Stmt::Ptr else_branch = Stmt::skip();
      if (c_.accept("else")) {
        if (c_.is("if")) {
          else_branch = statement();
        } else {
          c_.expect("{");
          else_branch = block();
          c_.expect("}");
        }
      }
      return Stmt::branch(cond, then_branch, else_branch);
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      c_.next();
      const VarId target = variable(t);
      c_.expect(":=");
      auto value = expr();
      if (!c_.is(":")) return Stmt::assign(target, value);
      return categorical(t, target, value);
    }
    c_.fail("expected a statement" + c_.found());
  }

  Stmt::Ptr categorical(const Token& at, VarId target, ProgramExpr::Ptr first) {
    std::vector<std::pair<ProgramExpr::Ptr, Rational>> options;
    c_.expect(":");
    options.emplace_back(first, probability());
    while (c_.accept("+")) {
      auto v = expr();
      c_.expect(":");
      options.emplace_back(v, probability());
    }
    Rational total = 0;
    for (const auto& [v, p] : options) total += p;
    if (total != 1) c_.fail_at(at, "categorical weights sum to " + to_string(total) + ", not 1");
    std::vector<std::pair<ProgramExpr::Ptr, Rational>> live;
    for (auto& o : options)
      if (o.second != 0) live.push_back(o);
    // x := v1:p1 + ... + vk:pk  ==  {x:=v1}[p1]{ {x:=v2}[p2/(1-p1)]{ ... } }
    Stmt::Ptr chain = Stmt::assign(target, live.back().first);
    Rational rest = live.back().second;
    for (std::size_t i = live.size() - 1; i-- > 0;) {
      rest += live[i].second;
      chain = Stmt::choice(live[i].second / rest, Stmt::assign(target, live[i].first), chain);
    }
    return chain;
  }

  Cursor& c_;
  const std::vector<VarDecl>* vars_ = nullptr;
};

// --- expectation syntax -----------------------------------------------------

class ExpectationParser {
 public:
  using G = BoolExpr::Ptr;

  ExpectationParser(Cursor& c, const LoopProgram& p) : c_(c), p_(p) {}

  LinExpr operand(Cursor&) { return linear(); }
  G less(const LinExpr& a, const LinExpr& b) { return BoolExpr::less(lift(a), lift(b)); }
  G negate(const G& g) { return BoolExpr::negate(g); }
  G conjoin(const G& a, const G& b) { return BoolExpr::conjoin(a, b); }
  G truth() { return BoolExpr::truth(); }

  LinExpr factor() {
    const Token t = c_.peek();
    if (c_.accept("-")) return -factor();
    if (c_.accept("(")) {
      auto e = linear();
      c_.expect(")");
      return e;
    }
    if (t.kind == Tok::Number) {
      c_.next();
      return LinExpr(parse_rational(t.text));
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      c_.next();
      const auto v = p_.find(t.text);
      if (!v) c_.fail_at(t, "undeclared variable '" + t.text + "'");
      return LinExpr::variable(*v);
    }
    c_.fail("expected an expression" + c_.found());
  }

  LinExpr product() {
    LinExpr lhs = factor();
    for (;;) {
      if (c_.is("*")) {
        const Token op = c_.next();
        LinExpr rhs = factor();
        if (!lhs.has_program_vars()) {
          lhs = rhs * lhs.constant();
        } else if (!rhs.has_program_vars()) {
          lhs = lhs * rhs.constant();
        } else {
          c_.fail_at(op, "product of two variables is not linear");
        }
      } else if (c_.is("/")) {
        const Token op = c_.next();
        LinExpr rhs = factor();
        if (rhs.has_program_vars() || rhs.constant() == 0) c_.fail_at(op, "division by a non-constant or zero");
        lhs = lhs * (Rational(1) / rhs.constant());
      } else {
        return lhs;
      }
    }
  }

  LinExpr linear() {
    LinExpr e = product();
    for (;;) {
      if (c_.accept("+")) {
        e += product();
      } else if (c_.accept("-")) {
        e -= product();
      } else {
        return e;
      }
    }
  }

  bool infinity() { return c_.accept("INF") || c_.accept("inf"); }

  struct Raw {
    G guard;
    std::optional<LinExpr> body;  // nullopt = INF
    Token at;
  };

  std::vector<Raw> parse_terms() {
    std::vector<Raw> pieces;
    std::optional<LinExpr> bare;
    Token bare_at = c_.peek();
    bool negative_next = false;
    for (;;) {
      const Token at = c_.peek();
      if (c_.accept("[")) {
        if (negative_next) c_.fail_at(at, "subtracting a bracketed term is not supported");
        G g = parse_or(c_, *this);
        c_.expect("]");
        std::optional<LinExpr> body = LinExpr(Rational(1));
        if (c_.accept("*")) {
          if (infinity()) {
            body.reset();
          } else {
            body = product();
          }
        }
        pieces.push_back({g, body, at});
      } else if (infinity()) {
        c_.fail_at(at, "INF is only allowed as a piece value");
      } else {
        LinExpr t = product();
        if (negative_next) t = -t;
        if (!bare) {
          bare = LinExpr();
          bare_at = at;
        }
        *bare += t;
      }
      negative_next = false;
      if (c_.accept("+")) continue;
      if (c_.accept("-")) {
        negative_next = true;
        continue;
      }
      break;
    }
    if (!c_.at_end()) c_.fail("unexpected input" + c_.found());
    if (bare) pieces.push_back({BoolExpr::truth(), bare, bare_at});
    return pieces;
  }

 private:
  Cursor& c_;
  const LoopProgram& p_;
};

}  // namespace

LoopProgram parse_program(std::string_view text, const ParseOptions& options) {
  Cursor c(lex(text));
  ProgramParser parser(c);
  LoopProgram p = parser.parse();
  if (options.check_underflow) {
    Feasibility feas(p.names(), options.solver);
    check_underflow(p, feas);
  }
  return p;
}

BoolExpr::Ptr parse_guard(std::string_view text, const LoopProgram& program) {
  Cursor c(lex(text));
  ExpectationParser parser(c, program);
  auto g = parse_or(c, parser);
  if (!c.at_end()) c.fail("unexpected input" + c.found());
  return g;
}

namespace {

PiecewiseTemplate parse_expectation_at(std::string_view text, int line, const LoopProgram& program,
                                       Feasibility& feas) {
  Cursor c(lex(text, line));
  ExpectationParser parser(c, program);
  const auto raw = parser.parse_terms();
  PiecewiseTemplate t;
  for (const auto& r : raw) {
    if (r.body && !r.body->has_program_vars() && r.body->constant() < 0)
      throw ParseError("negative constant piece", r.at.line, r.at.column);
    Piece p{r.guard, std::nullopt};
    if (r.body) p.body = lift(*r.body);
    t.pieces.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < t.pieces.size(); ++j) {
      if (feas.satisfiable(BoolExpr::conjoin(t.pieces[i].guard, t.pieces[j].guard)))
        throw ParseError("piece guards overlap", raw[j].at.line, raw[j].at.column);
    }
  }
  std::vector<BoolExpr::Ptr> rest;
  for (const auto& p : t.pieces) rest.push_back(BoolExpr::negate(p.guard));
  auto uncovered = BoolExpr::conjoin(rest);
  if (feas.satisfiable(uncovered)) t.pieces.push_back({uncovered, TemplatedLinExpr()});
  return t;
}

}  // namespace

PiecewiseTemplate parse_expectation(std::string_view text, const LoopProgram& program, Feasibility& feas) {
  return parse_expectation_at(text, 1, program, feas);
}

Property parse_property(std::string_view text, const LoopProgram& program, Feasibility& feas) {
  std::optional<PiecewiseTemplate> post;
  std::optional<PiecewiseTemplate> pre;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    line = line.substr(b);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'post:' or 'pre:'", line_no, 1);
    std::string label(line.substr(0, colon));
    while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back()))) label.pop_back();
    const std::string body(line.substr(colon + 1));
    if (label == "post" || label == "f") {
      if (post) throw ParseError("duplicate 'post:'", line_no, 1);
      post = parse_expectation_at(body, line_no, program, feas);
    } else if (label == "pre" || label == "g") {
      if (pre) throw ParseError("duplicate 'pre:'", line_no, 1);
      pre = parse_expectation_at(body, line_no, program, feas);
    } else {
      throw ParseError("unknown label '" + label + "'", line_no, 1);
    }
    if (end == text.size()) break;
  }
  if (!post) throw ParseError("missing 'post:' line", line_no, 1);
  if (!pre) throw ParseError("missing 'pre:' line", line_no, 1);
  if (has_infinity(*post)) throw ParseError("postexpectation must be finite", 1, 1);
  return Property{std::move(*post), std::move(*pre)};
}

}  // namespace probinv
