#include "probinv/program.hpp"

#include <sstream>

namespace probinv {

ProgramExpr::Ptr ProgramExpr::constant(Integer value) {
  return Ptr(new ProgramExpr(Kind::Const, std::move(value), -1, nullptr, nullptr));
}
ProgramExpr::Ptr ProgramExpr::var(VarId id) { return Ptr(new ProgramExpr(Kind::Var, 0, id, nullptr, nullptr)); }
ProgramExpr::Ptr ProgramExpr::scale(Integer factor, Ptr operand) {
  return Ptr(new ProgramExpr(Kind::Scale, std::move(factor), -1, std::move(operand), nullptr));
}
ProgramExpr::Ptr ProgramExpr::add(Ptr lhs, Ptr rhs) {
  return Ptr(new ProgramExpr(Kind::Add, 0, -1, std::move(lhs), std::move(rhs)));
}
ProgramExpr::Ptr ProgramExpr::sub(Ptr lhs, Ptr rhs) {
  return Ptr(new ProgramExpr(Kind::Sub, 0, -1, std::move(lhs), std::move(rhs)));
}

Guard::Ptr Guard::less(ProgramExpr::Ptr lhs, ProgramExpr::Ptr rhs) {
  return Ptr(new Guard(Kind::Less, std::move(lhs), std::move(rhs), nullptr, nullptr));
}
Guard::Ptr Guard::negate(Ptr operand) { return Ptr(new Guard(Kind::Not, nullptr, nullptr, std::move(operand), nullptr)); }
Guard::Ptr Guard::conjoin(Ptr lhs, Ptr rhs) {
  return Ptr(new Guard(Kind::And, nullptr, nullptr, std::move(lhs), std::move(rhs)));
}

Stmt::Ptr Stmt::skip() { return Ptr(new Stmt(Kind::Skip)); }

Stmt::Ptr Stmt::assign(VarId target, ProgramExpr::Ptr value) {
  auto s = new Stmt(Kind::Assign);
  s->target_ = target;
  s->value_ = std::move(value);
  return Ptr(s);
}

Stmt::Ptr Stmt::seq(std::vector<Ptr> parts) {
  std::vector<Ptr> flat;
  for (auto& p : parts) {
    if (p->kind() == Kind::Seq) {
      flat.insert(flat.end(), p->parts().begin(), p->parts().end());
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return skip();
  if (flat.size() == 1) return flat.front();
  auto s = new Stmt(Kind::Seq);
  s->parts_ = std::move(flat);
  return Ptr(s);
}

Stmt::Ptr Stmt::choice(Rational prob, Ptr lhs, Ptr rhs) {
  auto s = new Stmt(Kind::Choice);
  s->prob_ = std::move(prob);
  s->parts_ = {std::move(lhs), std::move(rhs)};
  return Ptr(s);
}

Stmt::Ptr Stmt::branch(Guard::Ptr cond, Ptr then_branch, Ptr else_branch) {
  auto s = new Stmt(Kind::If);
  s->cond_ = std::move(cond);
  s->parts_ = {std::move(then_branch), std::move(else_branch)};
  return Ptr(s);
}

std::optional<VarId> LoopProgram::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<VarId>(i);
  return std::nullopt;
}

std::vector<std::string> LoopProgram::names() const {
  std::vector<std::string> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(v.name);
  return out;
}

bool LoopProgram::all_bounded() const {
  for (const auto& v : vars)
    if (!v.bounded()) return false;
  return true;
}

Integer LoopProgram::lower_bound(VarId v) const {
  const auto& d = vars.at(static_cast<std::size_t>(v));
  return d.lo ? *d.lo : Integer(0);
}

// --- printing ---------------------------------------------------------------

std::string to_string(const ProgramExpr& e, const std::vector<std::string>& names) {
  auto wrapped = [&](const ProgramExpr& sub) {
    const bool compound = sub.kind() == ProgramExpr::Kind::Add || sub.kind() == ProgramExpr::Kind::Sub;
    return compound ? "(" + to_string(sub, names) + ")" : to_string(sub, names);
  };
  switch (e.kind()) {
    case ProgramExpr::Kind::Const:
      return e.value().str();
    case ProgramExpr::Kind::Var:
      return names.at(static_cast<std::size_t>(e.var_id()));
    case ProgramExpr::Kind::Scale:
      if (e.lhs()->kind() == ProgramExpr::Kind::Scale) return e.value().str() + "*(" + to_string(*e.lhs(), names) + ")";
      return e.value().str() + "*" + wrapped(*e.lhs());
    case ProgramExpr::Kind::Add:
      return to_string(*e.lhs(), names) + "+" + wrapped(*e.rhs());
    case ProgramExpr::Kind::Sub:
      return to_string(*e.lhs(), names) + "-" + wrapped(*e.rhs());
  }
  return {};
}

std::string to_string(const Guard& g, const std::vector<std::string>& names) {
  switch (g.kind()) {
    case Guard::Kind::Less:
      return to_string(*g.left(), names) + "<" + to_string(*g.right(), names);
    case Guard::Kind::Not:
      return "!(" + to_string(*g.operand(), names) + ")";
    case Guard::Kind::And: {
      std::string rhs = to_string(*g.second(), names);
      if (g.second()->kind() == Guard::Kind::And) rhs = "(" + rhs + ")";
      return to_string(*g.first(), names) + " & " + rhs;
    }
  }
  return {};
}

std::string to_string(const Stmt& s, const std::vector<std::string>& names, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (s.kind()) {
    case Stmt::Kind::Skip:
      return pad + "skip";
    case Stmt::Kind::Assign:
      return pad + names.at(static_cast<std::size_t>(s.target())) + " := " + to_string(*s.value(), names);
    case Stmt::Kind::Seq: {
      std::string out;
      for (std::size_t i = 0; i < s.parts().size(); ++i) {
        if (i > 0) out += ";\n";
        out += to_string(*s.parts()[i], names, indent);
      }
      return out;
    }
    case Stmt::Kind::Choice:
      return pad + "{\n" + to_string(*s.lhs(), names, indent + 2) + "\n" + pad + "}[" + to_string(s.prob()) +
             "]{\n" + to_string(*s.rhs(), names, indent + 2) + "\n" + pad + "}";
    case Stmt::Kind::If:
      return pad + "if(" + to_string(*s.cond(), names) + "){\n" + to_string(*s.lhs(), names, indent + 2) + "\n" +
             pad + "}else{\n" + to_string(*s.rhs(), names, indent + 2) + "\n" + pad + "}";
  }
  return {};
}

std::string to_string(const LoopProgram& p) {
  std::ostringstream out;
  for (const auto& v : p.vars) {
    out << "nat " << v.name;
    if (v.bounded()) out << " [" << v.lo->str() << "," << v.hi->str() << "]";
    out << ";\n";
  }
  const auto names = p.names();
  out << "\nwhile(" << to_string(*p.guard, names) << "){\n" << to_string(*p.body, names, 2) << "\n}\n";
  return out.str();
}

// --- structural equality ----------------------------------------------------

bool structurally_equal(const ProgramExpr& a, const ProgramExpr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ProgramExpr::Kind::Const:
      return a.value() == b.value();
    case ProgramExpr::Kind::Var:
      return a.var_id() == b.var_id();
    case ProgramExpr::Kind::Scale:
      return a.value() == b.value() && structurally_equal(*a.lhs(), *b.lhs());
    case ProgramExpr::Kind::Add:
    case ProgramExpr::Kind::Sub:
      return structurally_equal(*a.lhs(), *b.lhs()) && structurally_equal(*a.rhs(), *b.rhs());
  }
  return false;
}

bool structurally_equal(const Guard& a, const Guard& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Guard::Kind::Less:
      return structurally_equal(*a.left(), *b.left()) && structurally_equal(*a.right(), *b.right());
    case Guard::Kind::Not:
      return structurally_equal(*a.operand(), *b.operand());
    case Guard::Kind::And:
      return structurally_equal(*a.first(), *b.first()) && structurally_equal(*a.second(), *b.second());
  }
  return false;
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Stmt::Kind::Skip:
      return true;
    case Stmt::Kind::Assign:
      return a.target() == b.target() && structurally_equal(*a.value(), *b.value());
    case Stmt::Kind::Seq:
      if (a.parts().size() != b.parts().size()) return false;
      for (std::size_t i = 0; i < a.parts().size(); ++i)
        if (!structurally_equal(*a.parts()[i], *b.parts()[i])) return false;
      return true;
    case Stmt::Kind::Choice:
      return a.prob() == b.prob() && structurally_equal(*a.lhs(), *b.lhs()) &&
             structurally_equal(*a.rhs(), *b.rhs());
    case Stmt::Kind::If:
      return structurally_equal(*a.cond(), *b.cond()) && structurally_equal(*a.lhs(), *b.lhs()) &&
             structurally_equal(*a.rhs(), *b.rhs());
  }
  return false;
}

bool structurally_equal(const LoopProgram& a, const LoopProgram& b) {
  if (a.vars.size() != b.vars.size()) return false;
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    if (a.vars[i].name != b.vars[i].name || a.vars[i].lo != b.vars[i].lo || a.vars[i].hi != b.vars[i].hi)
      return false;
  }
  return structurally_equal(*a.guard, *b.guard) && structurally_equal(*a.body, *b.body);
}

}  // namespace probinv
