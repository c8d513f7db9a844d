#include "flatline/hoist.hpp"

#include "flatline/semantics.hpp"

#include <cassert>
#include <limits>

namespace flatline {

NaryAExpr NaryAExpr::literal(Value v)
{
    NaryAExpr e;
    e.value = v;
    return e;
}

NaryAExpr NaryAExpr::variable(std::string n)
{
    NaryAExpr e;
    e.kind = Kind::Var;
    e.name = std::move(n);
    return e;
}

NaryAExpr NaryAExpr::nary(ArithOp op, std::vector<NaryAExpr> args)
{
    assert(args.size() >= 2);
    NaryAExpr e;
    e.kind = Kind::Nary;
    e.op = op;
    // Keep chains maximal.
    for (auto& a : args) {
        if (a.kind == Kind::Nary && a.op == op)
            e.args.insert(e.args.end(), a.args.begin(), a.args.end());
        else
            e.args.push_back(std::move(a));
    }
    return e;
}

NaryAExpr NaryAExpr::neg(NaryAExpr a)
{
    NaryAExpr e;
    e.kind = Kind::Neg;
    e.args.push_back(std::move(a));
    return e;
}

NaryAExpr NaryAExpr::bin(ArithOp op, NaryAExpr l, NaryAExpr r)
{
    NaryAExpr e;
    e.kind = Kind::Bin;
    e.op = op;
    e.args.push_back(std::move(l));
    e.args.push_back(std::move(r));
    return e;
}

NaryBExpr NaryBExpr::constant(bool v)
{
    NaryBExpr b;
    b.kind = v ? Kind::True : Kind::False;
    return b;
}

NaryBExpr NaryBExpr::disj(std::vector<NaryBExpr> args)
{
    assert(args.size() >= 2);
    NaryBExpr b;
    b.kind = Kind::Or;
    for (auto& a : args) {
        if (a.kind == Kind::Or)
            b.args.insert(b.args.end(), a.args.begin(), a.args.end());
        else
            b.args.push_back(std::move(a));
    }
    return b;
}

NaryBExpr NaryBExpr::negation(NaryBExpr inner)
{
    NaryBExpr b;
    b.kind = Kind::Not;
    b.args.push_back(std::move(inner));
    return b;
}

NaryBExpr NaryBExpr::compare(CmpOp op, NaryAExpr l, NaryAExpr r)
{
    NaryBExpr b;
    b.kind = op == CmpOp::Leq ? Kind::Leq : Kind::Eq;
    b.operands.push_back(std::move(l));
    b.operands.push_back(std::move(r));
    return b;
}

//===----------------------------------------------------------------------===//
// Conversion
//===----------------------------------------------------------------------===//

namespace {

bool associative(ArithOp op) { return op == ArithOp::Add || op == ArithOp::Mul; }

void chain(const AExpr& e, ArithOp op, std::vector<NaryAExpr>& out)
{
    if (auto* b = std::get_if<ArithBin>(&e.node); b && b->op == op) {
        chain(*b->lhs, op, out);
        chain(*b->rhs, op, out);
    } else {
        out.push_back(normalize_nary(e));
    }
}

void chain(const BExpr& e, std::vector<NaryBExpr>& out)
{
    if (auto* o = std::get_if<OrExpr>(&e.node)) {
        chain(*o->lhs, out);
        chain(*o->rhs, out);
    } else {
        out.push_back(normalize_nary(e));
    }
}

} // namespace

NaryAExpr normalize_nary(const AExpr& e)
{
    if (auto* l = std::get_if<IntLit>(&e.node))
        return NaryAExpr::literal(l->value);
    if (auto* v = std::get_if<VarRef>(&e.node))
        return NaryAExpr::variable(v->name);
    const auto& b = std::get<ArithBin>(e.node);
    if (associative(b.op)) {
        std::vector<NaryAExpr> args;
        chain(e, b.op, args);
        return NaryAExpr::nary(b.op, std::move(args));
    }
    return NaryAExpr::bin(b.op, normalize_nary(*b.lhs), normalize_nary(*b.rhs));
}

NaryBExpr normalize_nary(const BExpr& b)
{
    return std::visit(
        [&](const auto& n) -> NaryBExpr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoolLit>)
                return NaryBExpr::constant(n.value);
            else if constexpr (std::is_same_v<T, OrExpr>) {
                std::vector<NaryBExpr> args;
                chain(b, args);
                return NaryBExpr::disj(std::move(args));
            } else if constexpr (std::is_same_v<T, NotExpr>)
                return NaryBExpr::negation(normalize_nary(*n.operand));
            else
                return NaryBExpr::compare(n.op, normalize_nary(*n.lhs), normalize_nary(*n.rhs));
        },
        b.node);
}

AExprPtr to_core(const NaryAExpr& e)
{
    switch (e.kind) {
    case NaryAExpr::Kind::Lit: return lit(e.value);
    case NaryAExpr::Kind::Var: return var(e.name);
    case NaryAExpr::Kind::Neg: return arith(ArithOp::Sub, lit(0), to_core(e.args[0]));
    case NaryAExpr::Kind::Bin: return arith(e.op, to_core(e.args[0]), to_core(e.args[1]));
    case NaryAExpr::Kind::Nary: {
        auto acc = to_core(e.args[0]);
        for (std::size_t i = 1; i < e.args.size(); ++i)
            acc = arith(e.op, acc, to_core(e.args[i]));
        return acc;
    }
    }
    return lit(0);
}

BExprPtr to_core(const NaryBExpr& b)
{
    switch (b.kind) {
    case NaryBExpr::Kind::True: return boolean(true);
    case NaryBExpr::Kind::False: return boolean(false);
    case NaryBExpr::Kind::Not: return lnot(to_core(b.args[0]));
    case NaryBExpr::Kind::Leq: return leq(to_core(b.operands[0]), to_core(b.operands[1]));
    case NaryBExpr::Kind::Eq: return eq(to_core(b.operands[0]), to_core(b.operands[1]));
    case NaryBExpr::Kind::Or: {
        auto acc = to_core(b.args[0]);
        for (std::size_t i = 1; i < b.args.size(); ++i)
            acc = lor(acc, to_core(b.args[i]));
        return acc;
    }
    }
    return boolean(false);
}

std::string pretty(const NaryAExpr& e)
{
    switch (e.kind) {
    case NaryAExpr::Kind::Lit: return std::to_string(e.value);
    case NaryAExpr::Kind::Var: return e.name;
    case NaryAExpr::Kind::Neg: return "-(" + pretty(e.args[0]) + ")";
    case NaryAExpr::Kind::Bin:
        return std::string(op_symbol(e.op)) + "(" + pretty(e.args[0]) + ", " + pretty(e.args[1]) + ")";
    case NaryAExpr::Kind::Nary: {
        std::string out = std::string(op_symbol(e.op)) + " [";
        for (std::size_t i = 0; i < e.args.size(); ++i)
            out += (i ? " " : "") + pretty(e.args[i]);
        return out + "]";
    }
    }
    return "?";
}

//===----------------------------------------------------------------------===//
// aval / bval
//===----------------------------------------------------------------------===//

namespace {

Value fold(ArithOp op, Value a, Value b)
{
    Value r{};
    bool bad = op == ArithOp::Add ? __builtin_add_overflow(a, b, &r) : __builtin_mul_overflow(a, b, &r);
    if (bad)
        throw EvalError({RuntimeErrorKind::Overflow, std::to_string(a) + " " + op_symbol(op) + " " + std::to_string(b)});
    return r;
}

Value unit(ArithOp op) { return op == ArithOp::Add ? 0 : 1; }

AvalResult aval_from(ArithOp op, const std::vector<NaryAExpr>& args, std::size_t from)
{
    const auto& a1 = args[from];
    if (args.size() - from == 2) {
        const auto& a2 = args[from + 1];
        if (a1.is_lit() && a2.is_lit())
            return {fold(op, a1.value, a2.value), {}};
        if (a1.is_lit())
            return {a1.value, {a2}};
        if (a2.is_lit())
            return {a2.value, {a1}};
        return {unit(op), {a1, a2}};
    }
    AvalResult rest = aval_from(op, args, from + 1);
    if (a1.is_lit())
        return {fold(op, a1.value, rest.value), std::move(rest.residual)};
    rest.residual.insert(rest.residual.begin(), a1);
    return rest;
}

bool is_true(const NaryBExpr& b) { return b.kind == NaryBExpr::Kind::True; }
bool is_false(const NaryBExpr& b) { return b.kind == NaryBExpr::Kind::False; }

NaryBExpr bval_or(const std::vector<NaryBExpr>& args, std::size_t from)
{
    const auto& b1 = args[from];
    if (args.size() - from == 2) {
        const auto& b2 = args[from + 1];
        if (is_true(b1) || is_true(b2))
            return NaryBExpr::constant(true);
        if (is_false(b1))
            return b2;
        if (is_false(b2))
            return b1;
        return NaryBExpr::disj({b1, b2});
    }
    if (is_false(b1))
        return bval_or(args, from + 1);
    if (is_true(b1))
        return NaryBExpr::constant(true);
    NaryBExpr rest = bval_or(args, from + 1);
    if (is_true(rest))
        return rest;
    if (is_false(rest))
        return b1;
    return NaryBExpr::disj({b1, std::move(rest)});
}

} // namespace

AvalResult aval(ArithOp op, const std::vector<NaryAExpr>& args)
{
    if (!associative(op) || args.size() < 2)
        throw Error("aval: needs + or * over at least two arguments");
    return aval_from(op, args, 0);
}

NaryBExpr bval(const NaryBExpr& b)
{
    switch (b.kind) {
    case NaryBExpr::Kind::Or: return bval_or(b.args, 0);
    case NaryBExpr::Kind::Leq:
    case NaryBExpr::Kind::Eq: {
        const auto& l = b.operands[0];
        const auto& r = b.operands[1];
        if (l.is_lit() && r.is_lit())
            return NaryBExpr::constant(b.kind == NaryBExpr::Kind::Leq ? l.value <= r.value : l.value == r.value);
        return b;
    }
    default: return b;
    }
}

//===----------------------------------------------------------------------===//
// hoist
//===----------------------------------------------------------------------===//

NaryAExpr hoist(const NaryAExpr& e)
{
    switch (e.kind) {
    case NaryAExpr::Kind::Lit:
    case NaryAExpr::Kind::Var: return e;
    case NaryAExpr::Kind::Neg: {
        auto a = hoist(e.args[0]);
        if (a.is_lit() && a.value != std::numeric_limits<Value>::min())
            return NaryAExpr::literal(-a.value);
        return NaryAExpr::neg(std::move(a));
    }
    case NaryAExpr::Kind::Bin: {
        auto l = hoist(e.args[0]);
        auto r = hoist(e.args[1]);
        if (l.is_lit() && r.is_lit()) {
            Value a = l.value;
            Value b = r.value;
            Value out{};
            // Anything that would trap is left for the runtime.
            if (e.op == ArithOp::Sub && !__builtin_sub_overflow(a, b, &out))
                return NaryAExpr::literal(out);
            bool traps = b == 0 || (e.op == ArithOp::Div && a == std::numeric_limits<Value>::min() && b == -1);
            if (e.op == ArithOp::Div && !traps)
                return NaryAExpr::literal(a / b);
            if (e.op == ArithOp::Mod && !traps)
                return NaryAExpr::literal(b == -1 ? 0 : a % b);
        }
        return NaryAExpr::bin(e.op, std::move(l), std::move(r));
    }
    case NaryAExpr::Kind::Nary: {
        std::vector<NaryAExpr> hoisted;
        for (const auto& a : e.args)
            hoisted.push_back(hoist(a));
        // Re-flatten in case an argument collapsed into the same operator.
        hoisted = NaryAExpr::nary(e.op, std::move(hoisted)).args;
        AvalResult r = aval(e.op, hoisted);
        if (r.residual.empty())
            return NaryAExpr::literal(r.value);
        if (e.op == ArithOp::Mul && r.value == 0)
            return NaryAExpr::literal(0);
        if (r.value != unit(e.op))
            r.residual.insert(r.residual.begin(), NaryAExpr::literal(r.value));
        if (r.residual.size() == 1)
            return r.residual.front();
        return NaryAExpr::nary(e.op, std::move(r.residual));
    }
    }
    return e;
}

NaryBExpr hoist(const NaryBExpr& b)
{
    switch (b.kind) {
    case NaryBExpr::Kind::True:
    case NaryBExpr::Kind::False: return b;
    case NaryBExpr::Kind::Not: {
        auto inner = hoist(b.args[0]);
        if (inner.is_const())
            return NaryBExpr::constant(is_false(inner));
        return NaryBExpr::negation(std::move(inner));
    }
    case NaryBExpr::Kind::Leq:
    case NaryBExpr::Kind::Eq: {
        NaryBExpr c = b;
        c.operands = {hoist(b.operands[0]), hoist(b.operands[1])};
        return bval(c);
    }
    case NaryBExpr::Kind::Or: {
        std::vector<NaryBExpr> hoisted;
        for (const auto& a : b.args)
            hoisted.push_back(hoist(a));
        return bval(NaryBExpr::disj(std::move(hoisted)));
    }
    }
    return b;
}

AExprPtr hoist_aexpr(const AExpr& e) { return to_core(hoist(normalize_nary(e))); }

BExprPtr hoist_bexpr(const BExpr& b) { return to_core(hoist(normalize_nary(b))); }

namespace {

std::optional<bool> constant_guard(const BExprPtr& b)
{
    if (auto* l = std::get_if<BoolLit>(&b->node))
        return l->value;
    return std::nullopt;
}

} // namespace

CmdPtr hoist_cmd(const CmdPtr& c)
{
    return std::visit(
        [&](const auto& n) -> CmdPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                return c;
            else if constexpr (std::is_same_v<T, Assign>)
                return assign(n.name, hoist_aexpr(*n.value));
            else if constexpr (std::is_same_v<T, Seq>) {
                auto first = hoist_cmd(n.first);
                auto second = hoist_cmd(n.second);
                if (is_skip(first))
                    return second;
                return seq(first, second);
            } else if constexpr (std::is_same_v<T, If>) {
                auto cond = hoist_bexpr(*n.cond);
                if (auto v = constant_guard(cond))
                    return hoist_cmd(*v ? n.then_branch : n.else_branch);
                return if_(cond, hoist_cmd(n.then_branch), hoist_cmd(n.else_branch));
            } else if constexpr (std::is_same_v<T, While>) {
                auto cond = hoist_bexpr(*n.cond);
                if (constant_guard(cond) == false)
                    return skip();
                return while_(cond, hoist_cmd(n.body));
            } else {
                auto scrutinee = hoist_aexpr(*n.scrutinee);
                if (auto* v = std::get_if<IntLit>(&scrutinee->node)) {
                    for (const auto& k : n.cases)
                        if (k.guard == v->value)
                            return hoist_cmd(k.body);
                }
                CaseList cases;
                for (const auto& k : n.cases)
                    cases.push_back({k.guard, hoist_cmd(k.body)});
                return switch_(scrutinee, std::move(cases));
            }
        },
        c->node);
}

Program hoist_program(const Program& p)
{
    Program out = p;
    out.body = hoist_cmd(p.body);
    out.dialect = contains_switch(*out.body) ? Dialect::Target : Dialect::Source;
    return out.dialect == Dialect::Source ? assign_colors(out) : out;
}

} // namespace flatline
