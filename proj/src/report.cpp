#include "probinv/report.hpp"

#include <sstream>

namespace probinv {

nlohmann::json to_json(const State& s, const std::vector<std::string>& names) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < s.size(); ++i) j[names[i]] = s[i].str();
  return j;
}

nlohmann::json to_json(const Valuation& v) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [t, q] : v) j[tvar_name(t)] = to_string(q);
  return j;
}

nlohmann::json to_json(const ExtendedRational& r) { return r.is_infinite() ? "INF" : to_string(r.value()); }

nlohmann::json to_json(const PiecewiseTemplate& t, const std::vector<std::string>& names) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : t.pieces) {
    nlohmann::json piece{{"guard", to_string(*p.guard, names)}};
    if (!p.body) {
      piece["body"] = "INF";
    } else {
      nlohmann::json coeffs = nlohmann::json::object();
      for (std::size_t i = 0; i < p.body->width(); ++i) {
        const TCoeff& c = p.body->coeff(static_cast<VarId>(i));
        if (!c.is_zero()) coeffs[names[i]] = to_string(c);
      }
      piece["body"] = {{"constant", to_string(p.body->constant())}, {"coefficients", coeffs}};
    }
    pieces.push_back(piece);
  }
  return {{"text", to_string(t, names)}, {"pieces", pieces}};
}

nlohmann::json to_json(const Counterexample& c, const std::vector<std::string>& names) {
  return {{"state", to_json(c.state, names)},
          {"violation", to_string(c.kind)},
          {"I", to_json(c.value)},
          {"phi", to_json(c.phi)},
          {"g", to_json(c.bound)}};
}

nlohmann::json to_json(const RoundRecord& r) {
  return {{"round", r.round},
          {"template", r.strategy},
          {"pieces", r.pieces},
          {"pieces_over_guard", r.pieces_over_guard},
          {"counterexamples", r.counterexamples},
          {"outcome", to_string(r.outcome)},
          {"safe_mode_active", r.safe_mode_active},
          {"wall_time_s", r.elapsed_s}};
}

State parse_state(const std::string& text, const std::vector<std::string>& names, State base) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected name=value in '" + item + "'");
    const std::string name = item.substr(0, eq);
    std::size_t k = 0;
    while (k < names.size() && names[k] != name) ++k;
    if (k == names.size()) throw std::invalid_argument("unknown variable '" + name + "'");
    const Rational v = parse_rational(item.substr(eq + 1));
    if (!is_integer(v) || v < 0) throw std::invalid_argument("state values are natural numbers");
    base[k] = numerator(v);
  }
  return base;
}

}  // namespace probinv
