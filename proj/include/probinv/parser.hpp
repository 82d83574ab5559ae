#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "probinv/expectation.hpp"
#include "probinv/normalize.hpp"
#include "probinv/program.hpp"

namespace probinv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

struct ParseOptions {
  /// Reject programs whose assignments may fall below a declared lower bound (needs a solver).
  bool check_underflow = true;
  SolverOptions solver;
};

/// Appendix-style surface syntax: nat declarations, one while loop, loop-free body.
LoopProgram parse_program(std::string_view text, const ParseOptions& options = {});

/// Iverson-bracket expectation over the program's variables, e.g. "[c=0]*(2*x+1) + [!(c=0)]*INF".
/// Guards must be pairwise disjoint; uncovered states receive an implicit 0 piece.
PiecewiseTemplate parse_expectation(std::string_view text, const LoopProgram& program, Feasibility& feas);

/// Guard text over the program's variables.
BoolExpr::Ptr parse_guard(std::string_view text, const LoopProgram& program);

struct Property {
  PiecewiseTemplate post;  // f
  PiecewiseTemplate pre;   // g
};

/// Two labelled lines "post: <expectation>" and "pre: <expectation>"; '#' starts a comment.
Property parse_property(std::string_view text, const LoopProgram& program, Feasibility& feas);

std::string read_file(const std::string& path);

}  // namespace probinv
