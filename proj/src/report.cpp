#include "flatline/report.hpp"

namespace flatline {

Json to_json(const AExpr& e)
{
    return std::visit(
        [](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>)
                return {{"kind", "int"}, {"value", n.value}};
            else if constexpr (std::is_same_v<T, VarRef>)
                return {{"kind", "var"}, {"name", n.name}};
            else
                return {{"kind", "binop"}, {"op", op_symbol(n.op)}, {"lhs", to_json(*n.lhs)}, {"rhs", to_json(*n.rhs)}};
        },
        e.node);
}

Json to_json(const BExpr& b)
{
    return std::visit(
        [](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoolLit>)
                return {{"kind", n.value ? "true" : "false"}};
            else if constexpr (std::is_same_v<T, OrExpr>)
                return {{"kind", "or"}, {"lhs", to_json(*n.lhs)}, {"rhs", to_json(*n.rhs)}};
            else if constexpr (std::is_same_v<T, NotExpr>)
                return {{"kind", "not"}, {"operand", to_json(*n.operand)}};
            else
                return {{"kind", n.op == CmpOp::Leq ? "leq" : "eq"},
                        {"lhs", to_json(*n.lhs)},
                        {"rhs", to_json(*n.rhs)}};
        },
        b.node);
}

Json to_json(const Cmd& c)
{
    Json j = std::visit(
        [](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                return {{"kind", "skip"}};
            else if constexpr (std::is_same_v<T, Assign>)
                return {{"kind", "assign"}, {"name", n.name}, {"value", to_json(*n.value)}};
            else if constexpr (std::is_same_v<T, Seq>)
                return {{"kind", "seq"}, {"first", to_json(*n.first)}, {"second", to_json(*n.second)}};
            else if constexpr (std::is_same_v<T, If>)
                return {{"kind", "if"},
                        {"cond", to_json(*n.cond)},
                        {"then", to_json(*n.then_branch)},
                        {"else", to_json(*n.else_branch)}};
            else if constexpr (std::is_same_v<T, While>)
                return {{"kind", "while"}, {"cond", to_json(*n.cond)}, {"body", to_json(*n.body)}};
            else {
                Json cases = Json::array();
                for (const auto& k : n.cases)
                    cases.push_back({{"guard", k.guard}, {"body", to_json(*k.body)}});
                return {{"kind", "switch"}, {"scrutinee", to_json(*n.scrutinee)}, {"cases", cases}};
            }
        },
        c.node);
    j["color"] = c.color.loop;
    return j;
}

Json to_json(const Program& p)
{
    return {{"dialect", p.dialect == Dialect::Source ? "source" : "target"},
            {"secrets", p.secrets},
            {"publics", p.publics},
            {"body", to_json(*p.body)}};
}

Json to_json(const Store& s)
{
    Json j = Json::object();
    for (const auto& [k, v] : s)
        j[k] = v;
    return j;
}

Json to_json(const Leakage& l)
{
    Json j = Json::array();
    for (const auto& a : l)
        j.push_back(to_string(a));
    return j;
}

Json to_json(const Trace& t)
{
    Json steps = Json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"rule", std::string(s.rule)}, {"leak", to_json(s.leak)}});
    Json j = {{"status", std::string(to_string(t.status))},
              {"steps", t.steps.size()},
              {"store", to_json(t.last.store)},
              {"leakage", to_json(t.cumulative_leakage())},
              {"trace", steps}};
    if (t.error)
        j["error"] = to_string(*t.error);
    return j;
}

Json to_json(const Witness& w)
{
    return {{"kind", std::string(to_string(w.kind))},
            {"step", w.step},
            {"store_a", to_json(w.store_a)},
            {"store_b", to_json(w.store_b)},
            {"leak_a", to_json(w.leak_a)},
            {"leak_b", to_json(w.leak_b)}};
}

Json to_json(const Verdict& v)
{
    Json j = {{"verdict", std::string(to_string(v.kind))}, {"pairs_checked", v.pairs_checked}};
    if (v.witness)
        j["witness"] = to_json(*v.witness);
    if (v.reason)
        j["reason"] = std::string(to_string(*v.reason));
    if (!v.detail.empty())
        j["detail"] = v.detail;
    return j;
}

Json to_json(const NumTable& t)
{
    return {{"skip_seq_while", t.n_skipseq_while}, {"assign_like", t.n_assign_like}, {"if", t.n_if}, {"exit", t.n_exit}, {"skip_case", t.n_skip_case}};
}

Json to_json(const Calibration& c)
{
    Json j = Json::object();
    for (const auto& [shape, hist] : c) {
        Json h = Json::object();
        for (const auto& [k, count] : hist)
            h[std::to_string(k)] = count;
        j[shape] = h;
    }
    return j;
}

Json to_json(const SimReport& r)
{
    Json failures = Json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"program", f.program},
                            {"run", f.run},
                            {"step", f.step},
                            {"clause", std::string(to_string(f.clause))},
                            {"detail", f.detail}});
    Json j = {{"programs_checked", r.programs_checked},
              {"runs_checked", r.runs_checked},
              {"steps_checked", r.steps_checked},
              {"runs_incomplete", r.runs_incomplete},
              {"failures", failures}};
    if (!r.calibration.empty())
        j["calibration"] = to_json(r.calibration);
    return j;
}

} // namespace flatline
