#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "probinv/boolexpr.hpp"
#include "probinv/linear.hpp"

namespace probinv {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// forall x: A x <= a & B x < b  ==>  alpha^T x <= beta
struct UniversalImplication {
  RationalMatrix A;
  RationalVector a;
  RationalMatrix B;
  RationalVector b;
  std::vector<TCoeff> alpha;
  TCoeff beta;

  explicit UniversalImplication(std::size_t dimension = 0);

  std::size_t dimension() const { return alpha.size(); }
  void add_non_strict(const LinExpr& e);  // e <= 0
  void add_strict(const LinExpr& e);      // e < 0
  /// Target e <= 0 with templated coefficients.
  void set_target(const TemplatedLinExpr& e);
  /// Concrete implication at a point (alpha, beta instantiated by v).
  bool holds_at(const std::vector<Rational>& x, const Valuation& v = {}) const;
};

struct MotzkinEncoding {
  std::vector<std::string> multipliers;  // real-valued, declared by the caller
  std::string formula;                   // over template variables and multipliers
};

/// Linear multiplier system equivalent over the reals to the implication, split on mu0 = 0 / mu0 = 1.
/// Multipliers are named prefix0, prefix1, ...
MotzkinEncoding motzkin_encode(const UniversalImplication& u, const std::string& prefix);

struct LiftOptions {
  /// Add -x <= 0 for every variable.
  bool nonnegative = true;
  /// Rewrite integral strict atoms e < 0 as e + 1 <= 0.
  bool integer_tightening = true;
};

/// forall x in N^n: premise ==> target <= 0, with premise a conjunction of concrete literals.
UniversalImplication lift(const std::vector<Literal>& premise, const TemplatedLinExpr& target, std::size_t dimension,
                          const LiftOptions& options = {});

}  // namespace probinv
