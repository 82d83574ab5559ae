#include "probinv/smt.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>

namespace probinv {

std::string resolve_solver_path(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("PROBINV_SOLVER"); env != nullptr && *env != '\0') return env;
  return "z3";
}

const char* to_string(SatResult r) {
  switch (r) {
    case SatResult::Sat:
      return "sat";
    case SatResult::Unsat:
      return "unsat";
    case SatResult::Unknown:
      return "unknown";
  }
  return "?";
}

// --- s-expressions ----------------------------------------------------------

namespace {

void skip_space(const std::string& t, std::size_t& i) {
  while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
}

SExpr parse_at(const std::string& t, std::size_t& i) {
  skip_space(t, i);
  if (i >= t.size()) throw SolverError("unexpected end of solver output");
  if (t[i] == '(') {
    ++i;
    SExpr e;
    e.is_atom = false;
    for (;;) {
      skip_space(t, i);
      if (i >= t.size()) throw SolverError("unbalanced solver output");
      if (t[i] == ')') {
        ++i;
        return e;
      }
      e.list.push_back(parse_at(t, i));
    }
  }
  if (t[i] == ')') throw SolverError("unbalanced solver output");
  SExpr e;
  if (t[i] == '"' || t[i] == '|') {
    const char q = t[i];
    const std::size_t end = t.find(q, i + 1);
    if (end == std::string::npos) throw SolverError("unterminated literal in solver output");
    e.atom = t.substr(i, end - i + 1);
    i = end + 1;
    return e;
  }
  const std::size_t start = i;
  while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != '(' && t[i] != ')') ++i;
  e.atom = t.substr(start, i - start);
  return e;
}

}  // namespace

SExpr parse_sexpr(const std::string& text) {
  std::size_t i = 0;
  return parse_at(text, i);
}

Rational sexpr_to_rational(const SExpr& e) {
  if (e.is_atom) {
    try {
      return parse_rational(e.atom);
    } catch (const std::invalid_argument&) {
      throw SolverError("cannot decode model value '" + e.atom + "'");
    }
  }
  if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "-") return -sexpr_to_rational(e.list[1]);
  if (e.list.size() == 3 && e.list[0].is_atom && e.list[0].atom == "/") {
    const Rational den = sexpr_to_rational(e.list[2]);
    if (den == 0) throw SolverError("division by zero in model value");
    return sexpr_to_rational(e.list[1]) / den;
  }
  throw SolverError("cannot decode model value");
}

// --- session ----------------------------------------------------------------

SmtSession::SmtSession(SolverOptions options) : options_(std::move(options)) {
  options_.executable = resolve_solver_path(options_.executable);
  if (!options_.dump_path.empty()) {
    std::string path = options_.dump_path;
    if (std::filesystem::is_directory(path)) {
      static std::atomic<unsigned> serial{0};
      path += "/session-" + std::to_string(::getpid()) + "-" + std::to_string(serial++) + ".smt2";
    }
    dump_.reset(std::fopen(path.c_str(), "a"));
    if (!dump_) throw SolverError("cannot open dump file " + path);
  }
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw SolverError(std::string("pipe: ") + std::strerror(errno));
  pid_ = fork();
  if (pid_ < 0) throw SolverError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(options_.executable.c_str()));
    for (auto& a : options_.arguments) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    std::fprintf(stdout, "(error \"cannot execute solver\")\n");
    std::fflush(stdout);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_solver_ = in_pipe[1];
  from_solver_ = out_pipe[0];
  signal(SIGPIPE, SIG_IGN);
  scopes_.emplace_back();
  send("(set-option :print-success false)");
  send("(set-option :produce-models true)");
  if (options_.timeout_ms > 0) set_timeout(options_.timeout_ms);
}

SmtSession::~SmtSession() { shutdown(); }

void SmtSession::shutdown() {
  if (pid_ <= 0) return;
  if (!dead_) {
    const std::string bye = "(exit)\n";
    [[maybe_unused]] auto n = write(to_solver_, bye.data(), bye.size());
  }
  close(to_solver_);
  close(from_solver_);
  int status = 0;
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    usleep(2000);
  }
  kill(pid_, SIGKILL);
  waitpid(pid_, &status, 0);
  pid_ = -1;
}

void SmtSession::send(const std::string& command) {
  if (dead_) throw SolverError("solver session is no longer usable: " + diagnostics_);
  if (dump_) std::fprintf(dump_.get(), "%s\n", command.c_str());
  std::string line = command + "\n";
  const char* p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    const ssize_t n = write(to_solver_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      dead_ = true;
      diagnostics_ = "solver pipe closed";
      throw SolverError(diagnostics_);
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

std::string SmtSession::read_line() {
  using Clock = std::chrono::steady_clock;
  const auto grace = std::chrono::milliseconds(options_.timeout_ms > 0 ? options_.timeout_ms + 10000 : 0);
  const auto deadline = Clock::now() + grace;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    int wait_ms = -1;
    if (options_.timeout_ms > 0) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) {
        dead_ = true;
        diagnostics_ = "solver did not answer in time";
        kill(pid_, SIGKILL);
        throw SolverError(diagnostics_);
      }
      wait_ms = static_cast<int>(left);
    }
    pollfd pfd{from_solver_, POLLIN, 0};
    const int r = poll(&pfd, 1, wait_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("poll: ") + std::strerror(errno));
    }
    if (r == 0) continue;
    char chunk[65536];
    const ssize_t n = read(from_solver_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      dead_ = true;
      diagnostics_ = "solver exited: " + buffer_;
      throw SolverError(diagnostics_);
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string SmtSession::read_sexpr() {
  std::string text;
  int depth = 0;
  bool started = false;
  for (;;) {
    std::string line = read_line();
    if (!started && line.rfind("(error", 0) == 0) {
      diagnostics_ = line;
      throw SolverError("solver error: " + line);
    }
    for (char c : line) {
      if (c == '(') {
        ++depth;
        started = true;
      } else if (c == ')') {
        --depth;
      }
    }
    text += line;
    text += '\n';
    if (started && depth <= 0) return text;
  }
}

void SmtSession::declare_int(const std::string& name) {
  if (declared(name)) return;
  send("(declare-fun " + name + " () Int)");
  scopes_.back().push_back(name);
}

void SmtSession::declare_real(const std::string& name) {
  if (declared(name)) return;
  send("(declare-fun " + name + " () Real)");
  scopes_.back().push_back(name);
}

bool SmtSession::declared(const std::string& name) const {
  for (const auto& scope : scopes_)
    for (const auto& n : scope)
      if (n == name) return true;
  return false;
}

void SmtSession::add(const std::string& formula) { send("(assert " + formula + ")"); }

void SmtSession::push() {
  send("(push 1)");
  scopes_.emplace_back();
}

void SmtSession::pop() {
  if (scopes_.size() <= 1) throw std::logic_error("pop without push");
  send("(pop 1)");
  scopes_.pop_back();
}

void SmtSession::set_timeout(unsigned ms) {
  options_.timeout_ms = ms;
  send("(set-option :timeout " + std::to_string(ms) + ")");
}

SatResult SmtSession::check() {
  ++checks_;
  send("(check-sat)");
  for (;;) {
    std::string line = read_line();
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (line == "sat") return SatResult::Sat;
    if (line == "unsat") return SatResult::Unsat;
    if (line == "unknown") {
      send("(get-info :reason-unknown)");
      diagnostics_ = read_sexpr();
      return SatResult::Unknown;
    }
    if (line.rfind("(error", 0) == 0) {
      diagnostics_ = line;
      throw SolverError("solver error: " + line);
    }
  }
}

std::map<std::string, Rational> SmtSession::values(const std::vector<std::string>& names) {
  std::map<std::string, Rational> out;
  if (names.empty()) return out;
  std::string cmd = "(get-value (";
  for (const auto& n : names) cmd += n + " ";
  cmd += "))";
  send(cmd);
  const SExpr e = parse_sexpr(read_sexpr());
  if (e.is_atom) throw SolverError("malformed model");
  for (const auto& pair : e.list) {
    if (pair.is_atom || pair.list.size() != 2 || !pair.list[0].is_atom) throw SolverError("malformed model entry");
    out[pair.list[0].atom] = sexpr_to_rational(pair.list[1]);
  }
  return out;
}

// --- term builders ----------------------------------------------------------

namespace smt {

std::string num(const Integer& z) { return z < 0 ? "(- " + Integer(-z).str() + ")" : z.str(); }

std::string num(const Rational& q) {
  if (is_integer(q)) return num(numerator(q));
  const Integer n = numerator(q);
  const std::string body = "(/ " + (n < 0 ? Integer(-n).str() : n.str()) + " " + denominator(q).str() + ")";
  return n < 0 ? "(- " + body + ")" : body;
}

std::string program_var(VarId v) { return "p" + std::to_string(v); }
std::string template_var(TVarId t) { return "t" + std::to_string(t); }

std::string sum(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  if (terms.size() == 1) return terms.front();
  std::string out = "(+";
  for (const auto& t : terms) out += " " + t;
  return out + ")";
}

std::string conj(const std::vector<std::string>& parts) {
  if (parts.empty()) return "true";
  if (parts.size() == 1) return parts.front();
  std::string out = "(and";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string disj(const std::vector<std::string>& parts) {
  if (parts.empty()) return "false";
  if (parts.size() == 1) return parts.front();
  std::string out = "(or";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string negate(const std::string& f) { return "(not " + f + ")"; }
std::string implies(const std::string& a, const std::string& b) { return "(=> " + a + " " + b + ")"; }

namespace {

std::string scaled(const Rational& q, const std::string& var) {
  if (q == 1) return var;
  return "(* " + num(q) + " " + var + ")";
}

}  // namespace

std::string term(const TCoeff& c) {
  std::vector<std::string> parts;
  for (const auto& [id, q] : c.terms()) parts.push_back(scaled(q, template_var(id)));
  if (c.constant() != 0 || parts.empty()) parts.push_back(num(c.constant()));
  return sum(parts);
}

std::string term(const TemplatedLinExpr& e) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < e.width(); ++i) {
    const TCoeff& c = e.coeff(static_cast<VarId>(i));
    if (c.is_zero()) continue;
    const std::string x = program_var(static_cast<VarId>(i));
    parts.push_back(c.is_constant() ? scaled(c.constant(), x) : "(* " + term(c) + " " + x + ")");
  }
  if (!e.constant().is_zero() || parts.empty()) parts.push_back(term(e.constant()));
  return sum(parts);
}

std::string term(const LinExpr& e) { return term(lift(e)); }

LinExpr integral(const LinExpr& e) {
  Integer den = denominator(e.constant());
  for (std::size_t i = 0; i < e.width(); ++i) den = lcm(den, denominator(e.coeff(static_cast<VarId>(i))));
  return den == 1 ? e : e * Rational(den);
}

std::string less_zero(const TemplatedLinExpr& e, bool integer_tightening) {
  if (integer_tightening && !has_tvars(e)) {
    const LinExpr z = integral(concrete(e));
    return "(<= " + term(z) + " (- 1))";
  }
  return "(< " + term(e) + " 0)";
}

std::string at_most_zero(const TemplatedLinExpr& e, bool integer_tightening) {
  if (integer_tightening && !has_tvars(e)) return "(<= " + term(integral(concrete(e))) + " 0)";
  return "(<= " + term(e) + " 0)";
}

std::string encode(const BoolExpr& b, bool integer_tightening) {
  switch (b.kind()) {
    case BoolExpr::Kind::True:
      return "true";
    case BoolExpr::Kind::False:
      return "false";
    case BoolExpr::Kind::Less:
      return less_zero(b.atom(), integer_tightening);
    case BoolExpr::Kind::Not: {
      const BoolExpr& inner = *b.operand();
      if (inner.kind() == BoolExpr::Kind::Less) {
        // !(e < 0) is 0 <= e, i.e. -e <= 0
        if (integer_tightening && !has_tvars(inner.atom()))
          return "(>= " + term(integral(concrete(inner.atom()))) + " 0)";
        return "(>= " + term(inner.atom()) + " 0)";
      }
      return negate(encode(inner, integer_tightening));
    }
    case BoolExpr::Kind::And: {
      std::vector<std::string> parts;
      for (const auto& c : b.children()) parts.push_back(encode(*c, integer_tightening));
      return conj(parts);
    }
  }
  return "true";
}

}  // namespace smt

}  // namespace probinv
