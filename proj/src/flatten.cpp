#include "flatline/flatten.hpp"

namespace flatline {

std::string fresh_pc_name(const Program& p)
{
    auto used = variables(*p.body);
    used.insert(p.secrets.begin(), p.secrets.end());
    used.insert(p.publics.begin(), p.publics.end());
    std::string name = "pc";
    for (int i = 1; used.contains(name); ++i)
        name = "pc" + std::to_string(i);
    return name;
}

namespace {

CmdPtr jump(const std::string& pc, Value k) { return assign(pc, lit(k)); }

void lab_into(const std::string& pc, const CmdPtr& c, Value n, Value m, CaseList& out)
{
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Skip>) {
                out.push_back({n, seq(skip(), jump(pc, m))});
            } else if constexpr (std::is_same_v<T, Assign>) {
                out.push_back({n, seq(assign(node.name, node.value), jump(pc, m))});
            } else if constexpr (std::is_same_v<T, Seq>) {
                Value mid = n + size(*node.first);
                lab_into(pc, node.first, n, mid, out);
                lab_into(pc, node.second, mid, m, out);
            } else if constexpr (std::is_same_v<T, If>) {
                Value else_at = n + 1 + size(*node.then_branch);
                out.push_back({n, if_(node.cond, jump(pc, n + 1), jump(pc, else_at))});
                lab_into(pc, node.then_branch, n + 1, m, out);
                lab_into(pc, node.else_branch, else_at, m, out);
            } else if constexpr (std::is_same_v<T, While>) {
                Value exit_at = n + 1 + size(*node.body);
                out.push_back({n, if_(node.cond, jump(pc, n + 1), jump(pc, exit_at))});
                lab_into(pc, node.body, n + 1, n, out);
                out.push_back({exit_at, seq(skip(), jump(pc, m))});
            } else {
                throw Error("lab: switch is not a source construct");
            }
        },
        c->node);
}

} // namespace

CaseList lab(const std::string& pc, const CmdPtr& c, Value n, Value m)
{
    CaseList out;
    lab_into(pc, c, n, m, out);
    return out;
}

CmdPtr dispatch_loop(const std::string& pc, CaseList cases)
{
    return while_(leq(lit(1), var(pc)), switch_(var(pc), std::move(cases)));
}

namespace {

Program wrap(const Program& p, const std::string& pc, CaseList cases)
{
    Program out;
    out.body = seq(jump(pc, 1), dispatch_loop(pc, std::move(cases)));
    out.secrets = p.secrets;
    out.publics = p.publics;
    out.publics.insert(pc);
    out.dialect = Dialect::Target;
    return out;
}

} // namespace

Program flatten_program(const Program& p)
{
    if (p.dialect == Dialect::Target || contains_switch(*p.body))
        throw Error("flatten: input is already a target program");
    auto pc = fresh_pc_name(p);
    return wrap(p, pc, lab(pc, p.body, 1, 0));
}

Program flatten_program_off_by_one(const Program& p)
{
    if (p.dialect == Dialect::Target || contains_switch(*p.body))
        throw Error("flatten: input is already a target program");
    auto pc = fresh_pc_name(p);
    auto cases = lab(pc, p.body, 1, 0);
    for (auto& k : cases) {
        if (auto target = jump_target(*k.body, pc)) {
            k.body = seq(as<Seq>(k.body)->first, jump(pc, *target + 1));
            break;
        }
    }
    return wrap(p, pc, std::move(cases));
}

FlatParts decompose(const Program& target)
{
    auto bad = [] { return Error("not a flattened program"); };
    const auto* s = as<Seq>(target.body);
    if (!s)
        throw bad();
    const auto* init = as<Assign>(s->first);
    if (!init)
        throw bad();
    const auto* loop = as<While>(s->second);
    if (!loop)
        throw bad();
    const auto* sw = as<Switch>(loop->body);
    if (!sw)
        throw bad();
    FlatParts parts{init->name, sw->cases, s->second};
    if (!(*s->second == *dispatch_loop(parts.pc, parts.cases)))
        throw bad();
    return parts;
}

const Case* find_case(const CaseList& cases, Value n)
{
    for (const auto& k : cases)
        if (k.guard == n)
            return &k;
    return nullptr;
}

std::optional<Value> jump_target(const Cmd& body, const std::string& pc)
{
    const auto* s = std::get_if<Seq>(&body.node);
    if (!s)
        return std::nullopt;
    const auto* a = as<Assign>(s->second);
    if (!a || a->name != pc)
        return std::nullopt;
    const auto* v = std::get_if<IntLit>(&a->value->node);
    if (!v)
        return std::nullopt;
    return v->value;
}

bool terminal_case_check(const Program& p)
{
    auto pc = fresh_pc_name(p);
    auto cases = lab(pc, p.body, 1, 0);
    Value n = size(*p.body);
    if (cases.empty() || cases.back().guard != n)
        return false;
    auto target = jump_target(*cases.back().body, pc);
    return target && *target == 0;
}

} // namespace flatline
