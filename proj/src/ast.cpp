#include "flatline/ast.hpp"

#include <algorithm>
#include <sstream>

namespace flatline {

bool same(const AExprPtr& a, const AExprPtr& b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

bool same(const BExprPtr& a, const BExprPtr& b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

bool same(const CmdPtr& a, const CmdPtr& b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

bool operator==(const ArithBin& a, const ArithBin& b)
{
    return a.op == b.op && same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}
bool operator==(const OrExpr& a, const OrExpr& b) { return same(a.lhs, b.lhs) && same(a.rhs, b.rhs); }
bool operator==(const NotExpr& a, const NotExpr& b) { return same(a.operand, b.operand); }
bool operator==(const Compare& a, const Compare& b)
{
    return a.op == b.op && same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}
bool operator==(const Assign& a, const Assign& b) { return a.name == b.name && same(a.value, b.value); }
bool operator==(const Seq& a, const Seq& b) { return same(a.first, b.first) && same(a.second, b.second); }
bool operator==(const If& a, const If& b)
{
    return same(a.cond, b.cond) && same(a.then_branch, b.then_branch) && same(a.else_branch, b.else_branch);
}
bool operator==(const While& a, const While& b) { return same(a.cond, b.cond) && same(a.body, b.body); }
bool operator==(const Case& a, const Case& b) { return a.guard == b.guard && same(a.body, b.body); }
bool operator==(const Switch& a, const Switch& b) { return same(a.scrutinee, b.scrutinee) && a.cases == b.cases; }

AExprPtr lit(Value v) { return std::make_shared<const AExpr>(AExpr{IntLit{v}}); }
AExprPtr var(std::string name) { return std::make_shared<const AExpr>(AExpr{VarRef{std::move(name)}}); }
AExprPtr arith(ArithOp op, AExprPtr lhs, AExprPtr rhs)
{
    return std::make_shared<const AExpr>(AExpr{ArithBin{op, std::move(lhs), std::move(rhs)}});
}

BExprPtr boolean(bool v) { return std::make_shared<const BExpr>(BExpr{BoolLit{v}}); }
BExprPtr lor(BExprPtr lhs, BExprPtr rhs)
{
    return std::make_shared<const BExpr>(BExpr{OrExpr{std::move(lhs), std::move(rhs)}});
}
BExprPtr lnot(BExprPtr operand) { return std::make_shared<const BExpr>(BExpr{NotExpr{std::move(operand)}}); }
BExprPtr leq(AExprPtr lhs, AExprPtr rhs)
{
    return std::make_shared<const BExpr>(BExpr{Compare{CmpOp::Leq, std::move(lhs), std::move(rhs)}});
}
BExprPtr eq(AExprPtr lhs, AExprPtr rhs)
{
    return std::make_shared<const BExpr>(BExpr{Compare{CmpOp::Eq, std::move(lhs), std::move(rhs)}});
}

CmdPtr skip(Color c) { return std::make_shared<const Cmd>(Cmd{Skip{}, c}); }
CmdPtr assign(std::string name, AExprPtr value, Color c)
{
    return std::make_shared<const Cmd>(Cmd{Assign{std::move(name), std::move(value)}, c});
}
CmdPtr seq(CmdPtr first, CmdPtr second, Color c)
{
    return std::make_shared<const Cmd>(Cmd{Seq{std::move(first), std::move(second)}, c});
}
CmdPtr if_(BExprPtr cond, CmdPtr then_branch, CmdPtr else_branch, Color c)
{
    return std::make_shared<const Cmd>(Cmd{If{std::move(cond), std::move(then_branch), std::move(else_branch)}, c});
}
CmdPtr while_(BExprPtr cond, CmdPtr body, Color c)
{
    return std::make_shared<const Cmd>(Cmd{While{std::move(cond), std::move(body)}, c});
}
CmdPtr switch_(AExprPtr scrutinee, CaseList cases, Color c)
{
    return std::make_shared<const Cmd>(Cmd{Switch{std::move(scrutinee), std::move(cases)}, c});
}

CmdPtr seq_all(const std::vector<CmdPtr>& cmds)
{
    if (cmds.empty())
        return skip();
    CmdPtr out = cmds.back();
    for (auto it = cmds.rbegin() + 1; it != cmds.rend(); ++it)
        out = seq(*it, out);
    return out;
}

//===----------------------------------------------------------------------===//

Value size(const Cmd& c)
{
    return std::visit(
        [](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip> || std::is_same_v<T, Assign>)
                return 1;
            else if constexpr (std::is_same_v<T, Seq>)
                return size(*n.first) + size(*n.second);
            else if constexpr (std::is_same_v<T, If>)
                return 1 + size(*n.then_branch) + size(*n.else_branch);
            else if constexpr (std::is_same_v<T, While>)
                return 2 + size(*n.body);
            else
                throw Error("size: switch is not a source-dialect command");
        },
        c.node);
}

namespace {

struct Colorer
{
    int next_id = 0;

    CmdPtr run(const CmdPtr& c, Color current)
    {
        return std::visit(
            [&](const auto& n) -> CmdPtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Skip>)
                    return skip(current);
                else if constexpr (std::is_same_v<T, Assign>)
                    return assign(n.name, n.value, current);
                else if constexpr (std::is_same_v<T, Seq>) {
                    auto a = run(n.first, current);
                    auto b = run(n.second, current);
                    return seq(a, b, current);
                } else if constexpr (std::is_same_v<T, If>) {
                    auto a = run(n.then_branch, current);
                    auto b = run(n.else_branch, current);
                    return if_(n.cond, a, b, current);
                } else if constexpr (std::is_same_v<T, While>) {
                    Color own = Color::of_loop(++next_id);
                    return while_(n.cond, run(n.body, own), own);
                } else {
                    CaseList cases;
                    for (const auto& k : n.cases)
                        cases.push_back({k.guard, run(k.body, current)});
                    return switch_(n.scrutinee, std::move(cases), current);
                }
            },
            c->node);
    }
};

// Strips every color; used for target programs, which stay uniformly white.
CmdPtr whiten(const CmdPtr& c)
{
    return std::visit(
        [&](const auto& n) -> CmdPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                return skip();
            else if constexpr (std::is_same_v<T, Assign>)
                return assign(n.name, n.value);
            else if constexpr (std::is_same_v<T, Seq>)
                return seq(whiten(n.first), whiten(n.second));
            else if constexpr (std::is_same_v<T, If>)
                return if_(n.cond, whiten(n.then_branch), whiten(n.else_branch));
            else if constexpr (std::is_same_v<T, While>)
                return while_(n.cond, whiten(n.body));
            else {
                CaseList cases;
                for (const auto& k : n.cases)
                    cases.push_back({k.guard, whiten(k.body)});
                return switch_(n.scrutinee, std::move(cases));
            }
        },
        c->node);
}

} // namespace

Program assign_colors(const Program& p)
{
    Program out = p;
    if (p.dialect == Dialect::Target) {
        out.body = whiten(p.body);
        return out;
    }
    Colorer colorer;
    out.body = colorer.run(p.body, Color::white_color());
    return out;
}

bool contains_switch(const Cmd& c)
{
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Switch>)
                return true;
            else if constexpr (std::is_same_v<T, Seq>)
                return contains_switch(*n.first) || contains_switch(*n.second);
            else if constexpr (std::is_same_v<T, If>)
                return contains_switch(*n.then_branch) || contains_switch(*n.else_branch);
            else if constexpr (std::is_same_v<T, While>)
                return contains_switch(*n.body);
            else
                return false;
        },
        c.node);
}

namespace {

void collect(const AExpr& e, std::set<std::string>& out)
{
    if (auto* v = std::get_if<VarRef>(&e.node))
        out.insert(v->name);
    else if (auto* b = std::get_if<ArithBin>(&e.node)) {
        collect(*b->lhs, out);
        collect(*b->rhs, out);
    }
}

void collect(const BExpr& e, std::set<std::string>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, OrExpr>) {
                collect(*n.lhs, out);
                collect(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, NotExpr>)
                collect(*n.operand, out);
            else if constexpr (std::is_same_v<T, Compare>) {
                collect(*n.lhs, out);
                collect(*n.rhs, out);
            }
        },
        e.node);
}

void collect(const Cmd& c, std::set<std::string>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>) {
                out.insert(n.name);
                collect(*n.value, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                collect(*n.first, out);
                collect(*n.second, out);
            } else if constexpr (std::is_same_v<T, If>) {
                collect(*n.cond, out);
                collect(*n.then_branch, out);
                collect(*n.else_branch, out);
            } else if constexpr (std::is_same_v<T, While>) {
                collect(*n.cond, out);
                collect(*n.body, out);
            } else if constexpr (std::is_same_v<T, Switch>) {
                collect(*n.scrutinee, out);
                for (const auto& k : n.cases)
                    collect(*k.body, out);
            }
        },
        c.node);
}

using VarSet = std::set<std::string>;

void read_uses(const VarSet& reads, const VarSet& assigned, VarSet& exposed)
{
    for (const auto& r : reads)
        if (!assigned.contains(r))
            exposed.insert(r);
}

VarSet intersect(const VarSet& a, const VarSet& b)
{
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

// Returns the variables definitely assigned after @p c, given those assigned before.
VarSet exposure(const Cmd& c, VarSet assigned, VarSet& exposed)
{
    return std::visit(
        [&](const auto& n) -> VarSet {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                return assigned;
            else if constexpr (std::is_same_v<T, Assign>) {
                read_uses(variables(*n.value), assigned, exposed);
                assigned.insert(n.name);
                return assigned;
            } else if constexpr (std::is_same_v<T, Seq>) {
                auto mid = exposure(*n.first, assigned, exposed);
                return exposure(*n.second, mid, exposed);
            } else if constexpr (std::is_same_v<T, If>) {
                read_uses(variables(*n.cond), assigned, exposed);
                auto a = exposure(*n.then_branch, assigned, exposed);
                auto b = exposure(*n.else_branch, assigned, exposed);
                return intersect(a, b);
            } else if constexpr (std::is_same_v<T, While>) {
                read_uses(variables(*n.cond), assigned, exposed);
                exposure(*n.body, assigned, exposed);
                return assigned;
            } else {
                read_uses(variables(*n.scrutinee), assigned, exposed);
                VarSet out = assigned;
                for (const auto& k : n.cases)
                    out = intersect(out, exposure(*k.body, assigned, exposed));
                return out;
            }
        },
        c.node);
}

} // namespace

std::set<std::string> variables(const Cmd& c)
{
    std::set<std::string> out;
    collect(c, out);
    return out;
}

std::set<std::string> variables(const AExpr& e)
{
    std::set<std::string> out;
    collect(e, out);
    return out;
}

std::set<std::string> variables(const BExpr& b)
{
    std::set<std::string> out;
    collect(b, out);
    return out;
}

std::set<std::string> upward_exposed(const Cmd& c)
{
    VarSet exposed;
    exposure(c, {}, exposed);
    return exposed;
}

int count_whiles(const Cmd& c)
{
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Seq>)
                return count_whiles(*n.first) + count_whiles(*n.second);
            else if constexpr (std::is_same_v<T, If>)
                return count_whiles(*n.then_branch) + count_whiles(*n.else_branch);
            else if constexpr (std::is_same_v<T, While>)
                return 1 + count_whiles(*n.body);
            else if constexpr (std::is_same_v<T, Switch>) {
                int k = 0;
                for (const auto& c : n.cases)
                    k += count_whiles(*c.body);
                return k;
            } else
                return 0;
        },
        c.node);
}

//===----------------------------------------------------------------------===//
// Pretty printing
//===----------------------------------------------------------------------===//

const char* op_symbol(ArithOp op)
{
    switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Mod: return "%";
    }
    return "?";
}

namespace {

int precedence(const AExpr& e)
{
    if (auto* b = std::get_if<ArithBin>(&e.node))
        return (b->op == ArithOp::Add || b->op == ArithOp::Sub) ? 1 : 2;
    return 3;
}

int precedence(const BExpr& e)
{
    if (std::holds_alternative<OrExpr>(e.node))
        return 1;
    if (std::holds_alternative<NotExpr>(e.node))
        return 2;
    return 3;
}

std::string parens_if(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent), ' '); }

} // namespace

std::string pretty(const AExpr& e)
{
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>)
                return std::to_string(n.value);
            else if constexpr (std::is_same_v<T, VarRef>)
                return n.name;
            else {
                int p = precedence(e);
                auto l = parens_if(precedence(*n.lhs) < p, pretty(*n.lhs));
                auto r = parens_if(precedence(*n.rhs) <= p, pretty(*n.rhs));
                return l + " " + op_symbol(n.op) + " " + r;
            }
        },
        e.node);
}

std::string pretty(const BExpr& b)
{
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoolLit>)
                return n.value ? "true" : "false";
            else if constexpr (std::is_same_v<T, OrExpr>)
                return pretty(*n.lhs) + " or " + parens_if(precedence(*n.rhs) <= 1, pretty(*n.rhs));
            else if constexpr (std::is_same_v<T, NotExpr>)
                return "not " + parens_if(precedence(*n.operand) < 2, pretty(*n.operand));
            else
                return pretty(*n.lhs) + (n.op == CmpOp::Leq ? " <= " : " == ") + pretty(*n.rhs);
        },
        b.node);
}

std::string pretty(const Cmd& c, int indent)
{
    const std::string ind = pad(indent);
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                return ind + "skip";
            else if constexpr (std::is_same_v<T, Assign>)
                return ind + n.name + " := " + pretty(*n.value);
            else if constexpr (std::is_same_v<T, Seq>) {
                std::string head;
                // `;` associates to the right, so a left-nested sequence needs a group.
                if (std::holds_alternative<Seq>(n.first->node))
                    head = ind + "(\n" + pretty(*n.first, indent + 2) + "\n" + ind + ")";
                else
                    head = pretty(*n.first, indent);
                return head + ";\n" + pretty(*n.second, indent);
            } else if constexpr (std::is_same_v<T, If>) {
                return ind + "if " + pretty(*n.cond) + " then\n" + pretty(*n.then_branch, indent + 2) + "\n" + ind +
                       "else\n" + pretty(*n.else_branch, indent + 2) + "\n" + ind + "end";
            } else if constexpr (std::is_same_v<T, While>) {
                return ind + "while " + pretty(*n.cond) + " do\n" + pretty(*n.body, indent + 2) + "\n" + ind + "end";
            } else {
                std::string out = ind + "switch " + pretty(*n.scrutinee) + " :\n";
                for (const auto& k : n.cases)
                    out += pad(indent + 2) + "case " + std::to_string(k.guard) + ":\n" + pretty(*k.body, indent + 4) +
                           "\n";
                return out + ind + "end";
            }
        },
        c.node);
}

std::string pretty(const Program& p)
{
    std::ostringstream out;
    auto decl = [&](const char* kw, const std::set<std::string>& names) {
        if (names.empty())
            return;
        out << kw << ' ';
        bool first = true;
        for (const auto& n : names) {
            out << (first ? "" : ", ") << n;
            first = false;
        }
        out << ";\n";
    };
    decl("secret", p.secrets);
    decl("public", p.publics);
    out << pretty(*p.body) << '\n';
    return out.str();
}

} // namespace flatline
