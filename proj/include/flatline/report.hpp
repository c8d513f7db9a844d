/// @file report.hpp
/// @brief JSON renderings of the library's values.

#pragma once

#include "flatline/ast.hpp"
#include "flatline/ctcheck.hpp"
#include "flatline/semantics.hpp"
#include "flatline/simcheck.hpp"

#include <json.hpp>

namespace flatline {

using Json = nlohmann::ordered_json;

Json to_json(const AExpr& e);
Json to_json(const BExpr& b);
/// Nodes carry their color as `"color": 0` (white) or the loop id.
Json to_json(const Cmd& c);
Json to_json(const Program& p);
Json to_json(const Store& s);
/// Array of serialized atoms.
Json to_json(const Leakage& l);
Json to_json(const Trace& t);
Json to_json(const Witness& w);
Json to_json(const Verdict& v);
Json to_json(const NumTable& t);
Json to_json(const Calibration& c);
Json to_json(const SimReport& r);

} // namespace flatline
