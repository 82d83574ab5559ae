#include "probinv/linear.hpp"

#include <stdexcept>

namespace probinv {

std::string tvar_name(TVarId id) { return "t" + std::to_string(id); }

TCoeff TCoeff::var(TVarId id, const Rational& factor) {
  TCoeff c;
  if (factor != 0) c.terms_.emplace(id, factor);
  return c;
}

Rational TCoeff::evaluate(const Valuation& v) const {
  Rational out = constant_;
  for (const auto& [id, q] : terms_) {
    const auto it = v.find(id);
    if (it == v.end()) throw std::out_of_range("valuation misses template variable " + tvar_name(id));
    out += q * it->second;
  }
  return out;
}

TCoeff TCoeff::partially_evaluate(const Valuation& v) const {
  TCoeff out(constant_);
  for (const auto& [id, q] : terms_) {
    const auto it = v.find(id);
    if (it == v.end()) {
      out.terms_.emplace(id, q);
    } else {
      out.constant_ += q * it->second;
    }
  }
  return out;
}

void TCoeff::collect_tvars(std::set<TVarId>& out) const {
  for (const auto& [id, q] : terms_) out.insert(id);
}

TCoeff& TCoeff::operator+=(const TCoeff& o) {
  constant_ += o.constant_;
  for (const auto& [id, q] : o.terms_) {
    auto [it, inserted] = terms_.emplace(id, q);
    if (!inserted) {
      it->second += q;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

TCoeff& TCoeff::operator-=(const TCoeff& o) {
  constant_ -= o.constant_;
  for (const auto& [id, q] : o.terms_) {
    auto [it, inserted] = terms_.emplace(id, -q);
    if (!inserted) {
      it->second -= q;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

TCoeff& TCoeff::operator*=(const Rational& k) {
  if (k == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= k;
  for (auto& [id, q] : terms_) q *= k;
  return *this;
}

bool operator<(const TCoeff& a, const TCoeff& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  return a.terms_ < b.terms_;
}

namespace {

// Appends "coeff*name" to out with sign handling; `first` tracks the leading term.
void append_term(std::string& out, bool& first, const Rational& coeff, const std::string& name) {
  if (coeff == 0) return;
  const bool negative = coeff < 0;
  const Rational mag = negative ? Rational(-coeff) : coeff;
  if (first) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  first = false;
  if (name.empty()) {
    out += to_string(mag);
  } else if (mag == 1) {
    out += name;
  } else {
    out += to_string(mag) + "*" + name;
  }
}

}  // namespace

std::string to_string(const TCoeff& c) {
  std::string out;
  bool first = true;
  for (const auto& [id, q] : c.terms()) append_term(out, first, q, tvar_name(id));
  append_term(out, first, c.constant(), "");
  return first ? "0" : out;
}

TemplatedLinExpr lift(const LinExpr& e) {
  return e.map_coeffs([](const Rational& r) { return TCoeff(r); });
}

Rational evaluate(const TemplatedLinExpr& e, const State& s, const Valuation& v) {
  return e.evaluate(s).evaluate(v);
}

LinExpr instantiate(const TemplatedLinExpr& e, const Valuation& v) {
  return e.map_coeffs([&](const TCoeff& c) { return c.evaluate(v); });
}

bool has_tvars(const TemplatedLinExpr& e) {
  if (!e.constant().is_constant()) return true;
  for (std::size_t i = 0; i < e.width(); ++i)
    if (!e.coeff(static_cast<VarId>(i)).is_constant()) return true;
  return false;
}

void collect_tvars(const TemplatedLinExpr& e, std::set<TVarId>& out) {
  e.constant().collect_tvars(out);
  for (std::size_t i = 0; i < e.width(); ++i) e.coeff(static_cast<VarId>(i)).collect_tvars(out);
}

LinExpr concrete(const TemplatedLinExpr& e) {
  return e.map_coeffs([](const TCoeff& c) {
    if (!c.is_constant()) throw std::logic_error("expression still mentions template variables");
    return c.constant();
  });
}

LinExpr to_affine(const ProgramExpr& e) {
  switch (e.kind()) {
    case ProgramExpr::Kind::Const:
      return LinExpr(Rational(e.value()));
    case ProgramExpr::Kind::Var:
      return LinExpr::variable(e.var_id());
    case ProgramExpr::Kind::Scale:
      return to_affine(*e.lhs()) * Rational(e.value());
    case ProgramExpr::Kind::Add:
      return to_affine(*e.lhs()) + to_affine(*e.rhs());
    case ProgramExpr::Kind::Sub:
      return to_affine(*e.lhs()) - to_affine(*e.rhs());
  }
  return {};
}

std::string to_string(const LinExpr& e, const std::vector<std::string>& names) {
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < e.width(); ++i) append_term(out, first, e.coeff(static_cast<VarId>(i)), names.at(i));
  append_term(out, first, e.constant(), "");
  return first ? "0" : out;
}

std::string to_string(const TemplatedLinExpr& e, const std::vector<std::string>& names) {
  if (!has_tvars(e)) return to_string(concrete(e), names);
  std::string out;
  bool first = true;
  auto emit = [&](const TCoeff& c, const std::string& name) {
    if (c.is_zero()) return;
    if (c.is_constant()) {
      append_term(out, first, c.constant(), name);
      return;
    }
    if (!first) out += " + ";
    first = false;
    const bool single = c.constant() == 0 && c.terms().size() == 1 && c.terms().begin()->second == 1;
    const std::string coeff = single ? to_string(c) : "(" + to_string(c) + ")";
    out += name.empty() ? coeff : coeff + "*" + name;
  };
  for (std::size_t i = 0; i < e.width(); ++i) emit(e.coeff(static_cast<VarId>(i)), names.at(i));
  emit(e.constant(), "");
  return first ? "0" : out;
}

}  // namespace probinv
