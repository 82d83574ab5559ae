#include "probinv/boolexpr.hpp"

#include <stdexcept>

namespace probinv {

namespace {

// Scales a concrete atom e < 0 by a positive factor so its coefficients are coprime integers.
TemplatedLinExpr canonical_atom(TemplatedLinExpr e) {
  if (has_tvars(e)) return e;
  const LinExpr c = concrete(e);
  Integer den = denominator(c.constant());
  for (std::size_t i = 0; i < c.width(); ++i) den = lcm(den, denominator(c.coeff(static_cast<VarId>(i))));
  const LinExpr scaled = c * Rational(den);
  Integer g = boost::multiprecision::abs(numerator(scaled.constant()));
  for (std::size_t i = 0; i < scaled.width(); ++i)
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator(scaled.coeff(static_cast<VarId>(i)))));
  if (g == 0 || g == 1) return lift(scaled);
  return lift(scaled * Rational(Integer(1), g));
}

}  // namespace

BoolExpr::Ptr BoolExpr::truth() {
  static const Ptr node(new BoolExpr(Kind::True));
  return node;
}

BoolExpr::Ptr BoolExpr::falsity() {
  static const Ptr node(new BoolExpr(Kind::False));
  return node;
}

BoolExpr::Ptr BoolExpr::less(TemplatedLinExpr e) {
  if (!e.has_program_vars() && e.constant().is_constant()) return constant(e.constant().constant() < 0);
  auto node = new BoolExpr(Kind::Less);
  node->atom_ = canonical_atom(std::move(e));
  return Ptr(node);
}

BoolExpr::Ptr BoolExpr::equal(const TemplatedLinExpr& lhs, const TemplatedLinExpr& rhs) {
  return conjoin(negate(less(lhs, rhs)), negate(less(rhs, lhs)));
}

BoolExpr::Ptr BoolExpr::negate(const Ptr& operand) {
  switch (operand->kind()) {
    case Kind::True:
      return falsity();
    case Kind::False:
      return truth();
    case Kind::Not:
      return operand->operand();
    default:
      break;
  }
  auto node = new BoolExpr(Kind::Not);
  node->children_ = {operand};
  return Ptr(node);
}

BoolExpr::Ptr BoolExpr::conjoin(const std::vector<Ptr>& parts) {
  std::vector<Ptr> flat;
  auto push = [&](const Ptr& p) {
    for (const auto& q : flat)
      if (structurally_equal(*q, *p)) return;
    flat.push_back(p);
  };
  for (const auto& p : parts) {
    if (p->is_false()) return falsity();
    if (p->is_true()) continue;
    if (p->kind() == Kind::And) {
      for (const auto& c : p->children()) push(c);
    } else {
      push(p);
    }
  }
  // a & !a
  for (const auto& p : flat) {
    if (p->kind() != Kind::Not) continue;
    for (const auto& q : flat)
      if (structurally_equal(*p->operand(), *q)) return falsity();
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  auto node = new BoolExpr(Kind::And);
  node->children_ = std::move(flat);
  return Ptr(node);
}

BoolExpr::Ptr BoolExpr::disjoin(const Ptr& a, const Ptr& b) { return negate(conjoin(negate(a), negate(b))); }

BoolExpr::Ptr BoolExpr::disjoin(const std::vector<Ptr>& parts) {
  std::vector<Ptr> negated;
  negated.reserve(parts.size());
  for (const auto& p : parts) negated.push_back(negate(p));
  return negate(conjoin(negated));
}

bool evaluate(const BoolExpr& b, const State& s, const Valuation& v) {
  switch (b.kind()) {
    case BoolExpr::Kind::True:
      return true;
    case BoolExpr::Kind::False:
      return false;
    case BoolExpr::Kind::Less:
      return evaluate(b.atom(), s, v) < 0;
    case BoolExpr::Kind::Not:
      return !evaluate(*b.operand(), s, v);
    case BoolExpr::Kind::And:
      for (const auto& c : b.children())
        if (!evaluate(*c, s, v)) return false;
      return true;
  }
  return false;
}

bool evaluate(const BoolExpr& b, const State& s) {
  static const Valuation empty;
  return evaluate(b, s, empty);
}

namespace {

template <typename AtomFn>
BoolExpr::Ptr rebuild(const BoolExpr::Ptr& b, AtomFn&& fn) {
  switch (b->kind()) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return b;
    case BoolExpr::Kind::Less:
      return BoolExpr::less(fn(b->atom()));
    case BoolExpr::Kind::Not:
      return BoolExpr::negate(rebuild(b->operand(), fn));
    case BoolExpr::Kind::And: {
      std::vector<BoolExpr::Ptr> parts;
      parts.reserve(b->children().size());
      for (const auto& c : b->children()) {
        auto r = rebuild(c, fn);
        if (r->is_false()) return r;
        parts.push_back(std::move(r));
      }
      return BoolExpr::conjoin(parts);
    }
  }
  return b;
}

}  // namespace

BoolExpr::Ptr at_state(const BoolExpr::Ptr& b, const State& s) {
  return rebuild(b, [&](const TemplatedLinExpr& e) { return TemplatedLinExpr(e.evaluate(s)); });
}

BoolExpr::Ptr instantiate(const BoolExpr::Ptr& b, const Valuation& v) {
  if (!has_tvars(*b)) return b;
  return rebuild(b, [&](const TemplatedLinExpr& e) { return lift(instantiate(e, v)); });
}

BoolExpr::Ptr substitute(const BoolExpr::Ptr& b, VarId x, const LinExpr& e) {
  return rebuild(b, [&](const TemplatedLinExpr& a) { return a.substitute(x, e); });
}

BoolExpr::Ptr substitute_all(const BoolExpr::Ptr& b, const std::vector<LinExpr>& es) {
  return rebuild(b, [&](const TemplatedLinExpr& a) { return a.substitute_all(es); });
}

bool has_tvars(const BoolExpr& b) {
  switch (b.kind()) {
    case BoolExpr::Kind::Less:
      return has_tvars(b.atom());
    case BoolExpr::Kind::Not:
    case BoolExpr::Kind::And:
      for (const auto& c : b.children())
        if (has_tvars(*c)) return true;
      return false;
    default:
      return false;
  }
}

void collect_tvars(const BoolExpr& b, std::set<TVarId>& out) {
  if (b.kind() == BoolExpr::Kind::Less) collect_tvars(b.atom(), out);
  if (b.kind() == BoolExpr::Kind::Not || b.kind() == BoolExpr::Kind::And)
    for (const auto& c : b.children()) collect_tvars(*c, out);
}

bool structurally_equal(const BoolExpr& a, const BoolExpr& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return true;
    case BoolExpr::Kind::Less:
      return a.atom() == b.atom();
    case BoolExpr::Kind::Not:
    case BoolExpr::Kind::And:
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!structurally_equal(*a.children()[i], *b.children()[i])) return false;
      return true;
  }
  return false;
}

std::vector<TemplatedLinExpr> atoms(const BoolExpr& b) {
  std::vector<TemplatedLinExpr> out;
  auto visit = [&](auto&& self, const BoolExpr& n) -> void {
    if (n.kind() == BoolExpr::Kind::Less) {
      for (const auto& e : out)
        if (e == n.atom()) return;
      out.push_back(n.atom());
    }
    if (n.kind() == BoolExpr::Kind::Not || n.kind() == BoolExpr::Kind::And)
      for (const auto& c : n.children()) self(self, *c);
  };
  visit(visit, b);
  return out;
}

namespace {

using Conj = std::vector<Literal>;

std::vector<Conj> dnf(const BoolExpr::Ptr& b, bool positive, std::size_t cap) {
  switch (b->kind()) {
    case BoolExpr::Kind::True:
      return positive ? std::vector<Conj>{Conj{}} : std::vector<Conj>{};
    case BoolExpr::Kind::False:
      return positive ? std::vector<Conj>{} : std::vector<Conj>{Conj{}};
    case BoolExpr::Kind::Less:
      return {Conj{Literal{b->atom(), positive}}};
    case BoolExpr::Kind::Not:
      return dnf(b->operand(), !positive, cap);
    case BoolExpr::Kind::And: {
      if (!positive) {
        // !(a & b) = !a | !b
        std::vector<Conj> out;
        for (const auto& c : b->children()) {
          auto part = dnf(c, false, cap);
          out.insert(out.end(), part.begin(), part.end());
          if (out.size() > cap) throw std::length_error("DNF exceeds cap");
        }
        return out;
      }
      std::vector<Conj> acc{Conj{}};
      for (const auto& c : b->children()) {
        auto part = dnf(c, true, cap);
        std::vector<Conj> next;
        for (const auto& x : acc) {
          for (const auto& y : part) {
            Conj z = x;
            z.insert(z.end(), y.begin(), y.end());
            next.push_back(std::move(z));
            if (next.size() > cap) throw std::length_error("DNF exceeds cap");
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

std::vector<std::vector<Literal>> to_dnf(const BoolExpr::Ptr& b, std::size_t cap) { return dnf(b, true, cap); }

bool literal_conjunction(const BoolExpr::Ptr& b, std::vector<Literal>& out) {
  switch (b->kind()) {
    case BoolExpr::Kind::True:
      return true;
    case BoolExpr::Kind::Less:
      out.push_back({b->atom(), true});
      return true;
    case BoolExpr::Kind::Not:
      if (b->operand()->kind() != BoolExpr::Kind::Less) return false;
      out.push_back({b->operand()->atom(), false});
      return true;
    case BoolExpr::Kind::And:
      for (const auto& c : b->children())
        if (!literal_conjunction(c, out)) return false;
      return true;
    default:
      return false;
  }
}

BoolExpr::Ptr from_guard(const Guard& g) {
  switch (g.kind()) {
    case Guard::Kind::Less:
      return BoolExpr::less(lift(to_affine(*g.left())), lift(to_affine(*g.right())));
    case Guard::Kind::Not:
      return BoolExpr::negate(from_guard(*g.operand()));
    case Guard::Kind::And:
      return BoolExpr::conjoin(from_guard(*g.first()), from_guard(*g.second()));
  }
  return BoolExpr::truth();
}

namespace {

std::pair<std::string, std::string> atom_sides(const TemplatedLinExpr& e, const std::vector<std::string>& names) {
  // Split e < 0 into lhs < rhs with positive coefficients on both sides where possible.
  TemplatedLinExpr lhs, rhs;
  auto place = [&](const TCoeff& c, std::optional<VarId> v) {
    if (c.is_zero()) return;
    const bool to_right = c.is_constant() && c.constant() < 0;
    TemplatedLinExpr term = v ? TemplatedLinExpr::variable(*v, to_right ? -c : c) : TemplatedLinExpr(to_right ? -c : c);
    if (to_right) {
      rhs += term;
    } else {
      lhs += term;
    }
  };
  for (std::size_t i = 0; i < e.width(); ++i) place(e.coeff(static_cast<VarId>(i)), static_cast<VarId>(i));
  place(e.constant(), std::nullopt);
  return {to_string(lhs, names), to_string(rhs, names)};
}

std::string atom_to_string(const TemplatedLinExpr& e, const std::vector<std::string>& names) {
  const auto [l, r] = atom_sides(e, names);
  return l + " < " + r;
}

bool negated_atom(const BoolExpr& b) { return b.kind() == BoolExpr::Kind::Not && b.operand()->kind() == BoolExpr::Kind::Less; }

}  // namespace

std::string to_string(const BoolExpr& b, const std::vector<std::string>& names) {
  switch (b.kind()) {
    case BoolExpr::Kind::True:
      return "true";
    case BoolExpr::Kind::False:
      return "false";
    case BoolExpr::Kind::Less:
      return atom_to_string(b.atom(), names);
    case BoolExpr::Kind::Not: {
      if (!negated_atom(b)) return "!(" + to_string(*b.operand(), names) + ")";
      const auto [l, r] = atom_sides(b.operand()->atom(), names);
      return r + " <= " + l;
    }
    case BoolExpr::Kind::And: {
      // e >= 0 & -e >= 0 prints as an equation
      const auto& ch = b.children();
      std::vector<bool> done(ch.size(), false);
      std::string out;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (done[i]) continue;
        std::string part;
        if (negated_atom(*ch[i])) {
          const auto& e = ch[i]->operand()->atom();
          for (std::size_t j = i + 1; j < ch.size() && part.empty(); ++j) {
            if (done[j] || !negated_atom(*ch[j]) || ch[j]->operand()->atom() != -e) continue;
            done[j] = true;
            const auto [l, r] = atom_sides(e, names);
            part = l + " = " + r;
          }
        }
        if (part.empty()) part = to_string(*ch[i], names);
        if (!out.empty()) out += " & ";
        out += part;
      }
      return out;
    }
  }
  return {};
}

}  // namespace probinv
