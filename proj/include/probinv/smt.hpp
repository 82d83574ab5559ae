#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "probinv/boolexpr.hpp"
#include "probinv/linear.hpp"

namespace probinv {

struct SolverOptions {
  /// Executable speaking SMT-LIB2 on stdin/stdout. Empty: $PROBINV_SOLVER, then "z3".
  std::string executable;
  std::vector<std::string> arguments{"-in", "-smt2"};
  /// Per check-sat limit handed to the solver; 0 means none.
  unsigned timeout_ms = 0;
  /// When non-empty every command is appended to this file; a directory gets one file per session.
  std::string dump_path;
};

std::string resolve_solver_path(const std::string& requested);

enum class SatResult { Sat, Unsat, Unknown };

const char* to_string(SatResult r);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimal s-expression, enough for solver responses.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_atom = true;
};

SExpr parse_sexpr(const std::string& text);
/// Decodes numerals, decimals, (- x) and (/ x y). Throws SolverError on anything else.
Rational sexpr_to_rational(const SExpr& e);

/// One external solver process driven incrementally over pipes.
class SmtSession {
 public:
  explicit SmtSession(SolverOptions options = {});
  ~SmtSession();
  SmtSession(const SmtSession&) = delete;
  SmtSession& operator=(const SmtSession&) = delete;

  /// Declarations are scoped like assertions: pop() forgets those made after the matching push().
  void declare_int(const std::string& name);
  void declare_real(const std::string& name);
  bool declared(const std::string& name) const;
  void add(const std::string& formula);
  void push();
  void pop();
  SatResult check();
  /// Model values after a sat answer.
  std::map<std::string, Rational> values(const std::vector<std::string>& names);
  void set_timeout(unsigned ms);

  std::size_t checks() const { return checks_; }
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  void send(const std::string& command);
  std::string read_line();
  std::string read_sexpr();
  void shutdown();

  SolverOptions options_;
  int pid_ = -1;
  int to_solver_ = -1;
  int from_solver_ = -1;
  std::string buffer_;
  std::vector<std::vector<std::string>> scopes_;
  std::size_t checks_ = 0;
  std::string diagnostics_;
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> dump_{nullptr, &std::fclose};
  bool dead_ = false;
};

/// SMT-LIB2 term builders. Program variables are named p<i>, template variables t<i>.
namespace smt {

std::string num(const Rational& q);
std::string num(const Integer& z);
std::string program_var(VarId v);
std::string template_var(TVarId t);
std::string sum(const std::vector<std::string>& terms);
std::string conj(const std::vector<std::string>& parts);
std::string disj(const std::vector<std::string>& parts);
std::string negate(const std::string& f);
std::string implies(const std::string& a, const std::string& b);

std::string term(const TCoeff& c);
std::string term(const TemplatedLinExpr& e);
std::string term(const LinExpr& e);

/// e < 0. Concrete atoms over integer program variables are tightened to e' <= -1 with integral e'.
std::string less_zero(const TemplatedLinExpr& e, bool integer_tightening);
/// e <= 0.
std::string at_most_zero(const TemplatedLinExpr& e, bool integer_tightening);
std::string encode(const BoolExpr& b, bool integer_tightening);

/// Scales a concrete expression by a positive factor so every coefficient is integral.
LinExpr integral(const LinExpr& e);

}  // namespace smt

}  // namespace probinv
