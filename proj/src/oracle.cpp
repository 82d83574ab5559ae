#include "probinv/oracle.hpp"

#include <algorithm>

#include "probinv/analysis.hpp"
#include "probinv/motzkin.hpp"

namespace probinv {

std::optional<std::size_t> ExplicitChain::find(const State& s) const {
  const auto it = index.find(s);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t ExplicitChain::transitions() const {
  std::size_t n = 0;
  for (const auto& row : successors) n += row.size();
  return n;
}

ExplicitChain build_chain(const LoopProgram& loop, const PiecewiseTemplate& f, std::size_t cap) {
  if (has_tvars(f)) throw std::invalid_argument("postexpectation must be concrete");
  ExplicitChain c;
  try {
    c.states = guard_states(loop, cap);
  } catch (const std::length_error& e) {
    throw OracleError(e.what());
  }
  c.guard_count = c.states.size();
  for (std::size_t i = 0; i < c.states.size(); ++i) c.index.emplace(c.states[i], i);
  c.successors.resize(c.guard_count);
  for (std::size_t i = 0; i < c.guard_count; ++i) {
    for (auto& [t, p] : outcomes(*loop.body, c.states[i])) {
      auto it = c.index.find(t);
      if (it == c.index.end()) {
        if (evaluate(*loop.guard, t)) throw OracleError("successor in the guard lies outside the declared box");
        it = c.index.emplace(t, c.states.size()).first;
        c.states.push_back(t);
        const ExtendedRational v = evaluate(f, t);
        if (v.is_infinite()) throw std::invalid_argument("postexpectation must be finite");
        c.terminal.push_back(v.value());
      }
      c.successors[i].push_back({it->second, p});
    }
  }
  return c;
}

namespace {

// Tarjan over the subgraph `active`, iteratively. Components come out sinks first.
std::vector<std::vector<std::size_t>> components(const ExplicitChain& c, const std::vector<bool>& active) {
  const std::size_t n = c.guard_count;
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> work;  // node, next edge
  for (std::size_t root = 0; root < n; ++root) {
    if (!active[root] || index[root] != unset) continue;
    work.push_back({root, 0});
    while (!work.empty()) {
      auto& [v, e] = work.back();
      if (e == 0 && index[v] == unset) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      const auto& row = c.successors[v];
      while (e < row.size()) {
        const std::size_t w = row[e].first;
        ++e;
        if (w >= n || !active[w]) continue;
        if (index[w] == unset) {
          work.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const std::size_t done = v;
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        out.push_back(std::move(comp));
      }
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
    }
  }
  return out;
}

// Solves m x = rhs in place by Gauss-Jordan elimination.
RationalVector solve(RationalMatrix m, RationalVector rhs) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && m(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::logic_error("singular system in exact_lfp");
    if (pivot != col) {
      m.row(pivot).swap(m.row(col));
      std::swap(rhs(pivot), rhs(col));
    }
    const Rational inv = 1 / m(col, col);
    for (Eigen::Index k = col; k < n; ++k) m(col, k) *= inv;
    rhs(col) *= inv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || m(r, col) == 0) continue;
      const Rational factor = m(r, col);
      for (Eigen::Index k = col; k < n; ++k) m(r, k) -= factor * m(col, k);
      rhs(r) -= factor * rhs(col);
    }
  }
  return rhs;
}

}  // namespace

std::vector<Rational> exact_lfp(const ExplicitChain& c, std::size_t max_component) {
  const std::size_t n = c.guard_count;
  std::vector<Rational> value(c.states.size(), Rational(0));
  for (std::size_t k = 0; k < c.terminal.size(); ++k) value[n + k] = c.terminal[k];

  // guard states that reach a frontier state with positive f
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> queue;
  std::vector<bool> relevant(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& [t, p] : c.successors[s]) {
      if (t < n) {
        preds[t].push_back(s);
      } else if (c.terminal[t - n] > 0 && !relevant[s]) {
        relevant[s] = true;
        queue.push_back(s);
      }
    }
  }
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (const auto s : preds[queue[q]])
      if (!relevant[s]) {
        relevant[s] = true;
        queue.push_back(s);
      }

  for (const auto& comp : components(c, relevant)) {
    if (comp.size() > max_component)
      throw OracleError("strongly connected component of " + std::to_string(comp.size()) +
                        " states is beyond exact elimination");
    std::map<std::size_t, Eigen::Index> local;
    for (std::size_t k = 0; k < comp.size(); ++k) local[comp[k]] = static_cast<Eigen::Index>(k);
    const auto size = static_cast<Eigen::Index>(comp.size());
    RationalMatrix m = RationalMatrix::Identity(size, size);
    RationalVector rhs = RationalVector::Zero(size);
    for (std::size_t k = 0; k < comp.size(); ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      for (const auto& [t, p] : c.successors[comp[k]]) {
        const auto it = local.find(t);
        if (it != local.end()) {
          m(row, it->second) -= p;
        } else {
          rhs(row) += p * value[t];
        }
      }
    }
    const RationalVector x = solve(std::move(m), std::move(rhs));
    for (std::size_t k = 0; k < comp.size(); ++k) value[comp[k]] = x(static_cast<Eigen::Index>(k));
  }
  return value;
}

std::optional<Counterexample> pointwise_check(const PiecewiseTemplate& i, const ExplicitChain& c,
                                              const PiecewiseTemplate& g) {
  std::vector<ExtendedRational> iv;
  iv.reserve(c.states.size());
  for (const auto& s : c.states) iv.push_back(evaluate(i, s));
  for (std::size_t k = 0; k < c.states.size(); ++k) {
    Counterexample cex;
    cex.state = c.states[k];
    cex.value = iv[k];
    cex.bound = evaluate(g, c.states[k]);
    if (c.in_guard(k)) {
      Rational phi = 0;
      bool infinite = false;
      for (const auto& [t, p] : c.successors[k]) {
        if (iv[t].is_infinite()) {
          infinite = true;
          break;
        }
        phi += p * iv[t].value();
      }
      cex.phi = infinite ? ExtendedRational::infinity() : ExtendedRational(phi);
    } else {
      cex.phi = c.terminal[k - c.guard_count];
    }
    for (const Violation v : {Violation::WellDefinedness, Violation::Inductivity, Violation::Safety}) {
      cex.kind = v;
      if (confirms(cex)) return cex;
    }
  }
  return std::nullopt;
}

PiecewiseTemplate lookup_expectation(const LoopProgram& loop, const ExplicitChain& c,
                                     const std::vector<Rational>& values, const PiecewiseTemplate& f) {
  PiecewiseTemplate out;
  const auto phi = loop_guard(loop);
  for (std::size_t k = 0; k < c.guard_count; ++k) {
    std::vector<BoolExpr::Ptr> eqs;
    for (std::size_t v = 0; v < loop.num_vars(); ++v)
      eqs.push_back(BoolExpr::equal(TemplatedLinExpr::variable(static_cast<VarId>(v)),
                                    TemplatedLinExpr(TCoeff(Rational(c.states[k][v])))));
    out.pieces.push_back({BoolExpr::conjoin(eqs), TemplatedLinExpr(TCoeff(values[k]))});
  }
  for (const auto& p : f.pieces) out.pieces.push_back({BoolExpr::conjoin(BoolExpr::negate(phi), p.guard), p.body});
  return out;
}

void dump_chain(std::ostream& os, const ExplicitChain& c) {
  for (std::size_t s = 0; s < c.guard_count; ++s)
    for (const auto& [t, p] : c.successors[s]) os << s << " " << t << " " << to_string(p) << "\n";
}

}  // namespace probinv
