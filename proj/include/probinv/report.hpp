#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "probinv/cegis.hpp"
#include "probinv/refinement.hpp"
#include "probinv/verifier.hpp"

namespace probinv {

nlohmann::json to_json(const State& s, const std::vector<std::string>& names);
nlohmann::json to_json(const Valuation& v);
nlohmann::json to_json(const ExtendedRational& r);
/// {"text": ..., "pieces": [{"guard", "body": {"constant", "coefficients"} | "INF"}]}
nlohmann::json to_json(const PiecewiseTemplate& t, const std::vector<std::string>& names);
nlohmann::json to_json(const Counterexample& c, const std::vector<std::string>& names);
nlohmann::json to_json(const RoundRecord& r);

/// "x=1,y=2" over the program's variable names; unspecified variables keep their value in base.
State parse_state(const std::string& text, const std::vector<std::string>& names, State base);

}  // namespace probinv
