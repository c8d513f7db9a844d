#include "flatline/semantics.hpp"

#include <limits>

namespace flatline {

std::string to_string(const Store& s)
{
    std::string out;
    for (const auto& [k, v] : s) {
        if (!out.empty())
            out += ",";
        out += k + "=" + std::to_string(v);
    }
    return out;
}

std::string to_string(const RuntimeError& e)
{
    switch (e.kind) {
    case RuntimeErrorKind::UnboundVariable: return "UnboundVariable(" + e.detail + ")";
    case RuntimeErrorKind::DivisionByZero: return "DivisionByZero";
    case RuntimeErrorKind::Overflow: return "Overflow(" + e.detail + ")";
    }
    return "RuntimeError";
}

EvalError::EvalError(RuntimeError e) : Error(to_string(e)), error_(std::move(e)) {}

bool operator==(const LeakAtom& a, const LeakAtom& b)
{
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case LeakAtom::Kind::Eps: return true;
    case LeakAtom::Kind::Op: return a.op == b.op;
    case LeakAtom::Kind::Branch: return a.taken == b.taken;
    case LeakAtom::Kind::Write: return a.name == b.name;
    }
    return false;
}

std::string to_string(const LeakAtom& a)
{
    switch (a.kind) {
    case LeakAtom::Kind::Eps: return "eps";
    case LeakAtom::Kind::Op: return std::string("op:") + op_symbol(a.op);
    case LeakAtom::Kind::Branch: return a.taken ? "br:1" : "br:0";
    case LeakAtom::Kind::Write: return "wr:" + a.name;
    }
    return "?";
}

std::string to_string(const Leakage& l)
{
    std::string out;
    for (const auto& a : l) {
        if (!out.empty())
            out += ' ';
        out += to_string(a);
    }
    return out;
}

LeakAtom parse_leak_atom(std::string_view text)
{
    if (text == "eps")
        return LeakAtom::eps();
    if (text == "br:1")
        return LeakAtom::branch(true);
    if (text == "br:0")
        return LeakAtom::branch(false);
    if (text.starts_with("wr:") && text.size() > 3)
        return LeakAtom::write(std::string(text.substr(3)));
    if (text.starts_with("op:") && text.size() == 4) {
        for (ArithOp op : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Mod})
            if (text[3] == static_cast<char>(op))
                return LeakAtom::arith(op);
    }
    throw Error("not a leak atom: '" + std::string(text) + "'");
}

//===----------------------------------------------------------------------===//

namespace {

[[noreturn]] void overflow(ArithOp op, Value a, Value b)
{
    throw EvalError({RuntimeErrorKind::Overflow, std::to_string(a) + " " + op_symbol(op) + " " + std::to_string(b)});
}

Value apply(ArithOp op, Value a, Value b)
{
    Value r{};
    switch (op) {
    case ArithOp::Add:
        if (__builtin_add_overflow(a, b, &r))
            overflow(op, a, b);
        return r;
    case ArithOp::Sub:
        if (__builtin_sub_overflow(a, b, &r))
            overflow(op, a, b);
        return r;
    case ArithOp::Mul:
        if (__builtin_mul_overflow(a, b, &r))
            overflow(op, a, b);
        return r;
    case ArithOp::Div:
        if (b == 0)
            throw EvalError({RuntimeErrorKind::DivisionByZero, {}});
        if (a == std::numeric_limits<Value>::min() && b == -1)
            overflow(op, a, b);
        return a / b;
    case ArithOp::Mod:
        if (b == 0)
            throw EvalError({RuntimeErrorKind::DivisionByZero, {}});
        if (b == -1)
            return 0;
        return a % b;
    }
    return 0;
}

void leak_into(const AExpr& e, Leakage& out)
{
    if (auto* b = std::get_if<ArithBin>(&e.node)) {
        leak_into(*b->lhs, out);
        leak_into(*b->rhs, out);
        out.push_back(LeakAtom::arith(b->op));
    } else {
        out.push_back(LeakAtom::eps());
    }
}

void leak_into(const BExpr& e, Leakage& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoolLit>)
                out.push_back(LeakAtom::eps());
            else if constexpr (std::is_same_v<T, NotExpr>)
                leak_into(*n.operand, out);
            else {
                leak_into(*n.lhs, out);
                leak_into(*n.rhs, out);
            }
        },
        e.node);
}

} // namespace

Value eval_aexpr(const AExpr& e, const Store& s)
{
    return std::visit(
        [&](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntLit>)
                return n.value;
            else if constexpr (std::is_same_v<T, VarRef>) {
                auto it = s.find(n.name);
                if (it == s.end())
                    throw EvalError({RuntimeErrorKind::UnboundVariable, n.name});
                return it->second;
            } else {
                Value a = eval_aexpr(*n.lhs, s);
                Value b = eval_aexpr(*n.rhs, s);
                return apply(n.op, a, b);
            }
        },
        e.node);
}

bool eval_bexpr(const BExpr& b, const Store& s)
{
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoolLit>)
                return n.value;
            else if constexpr (std::is_same_v<T, OrExpr>) {
                bool l = eval_bexpr(*n.lhs, s);
                bool r = eval_bexpr(*n.rhs, s);
                return l || r;
            } else if constexpr (std::is_same_v<T, NotExpr>)
                return !eval_bexpr(*n.operand, s);
            else {
                Value l = eval_aexpr(*n.lhs, s);
                Value r = eval_aexpr(*n.rhs, s);
                return n.op == CmpOp::Leq ? l <= r : l == r;
            }
        },
        b.node);
}

Leakage leak_expr(const AExpr& e, const Store& s)
{
    eval_aexpr(e, s);
    Leakage out;
    leak_into(e, out);
    return out;
}

Leakage leak_expr(const BExpr& b, const Store& s)
{
    eval_bexpr(b, s);
    Leakage out;
    leak_into(b, out);
    return out;
}

//===----------------------------------------------------------------------===//

namespace {

Stepped step_cmd(const CmdPtr& c, const Store& s)
{
    return std::visit(
        [&](const auto& n) -> Stepped {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>) {
                // Callers never reach here: a bare skip is final.
                throw Error("step: skip is final");
            } else if constexpr (std::is_same_v<T, Assign>) {
                Value v = eval_aexpr(*n.value, s);
                Leakage l;
                leak_into(*n.value, l);
                l.push_back(LeakAtom::write(n.name));
                Store next = s;
                next[n.name] = v;
                return {{skip(c->color), std::move(next)}, std::move(l), "assign"};
            } else if constexpr (std::is_same_v<T, Seq>) {
                if (is_skip(n.first))
                    return {{n.second, s}, {LeakAtom::eps()}, "skip-seq"};
                Stepped inner = step_cmd(n.first, s);
                inner.next.cmd = seq(inner.next.cmd, n.second, c->color);
                return inner;
            } else if constexpr (std::is_same_v<T, If>) {
                bool v = eval_bexpr(*n.cond, s);
                Leakage l;
                leak_into(*n.cond, l);
                l.push_back(LeakAtom::branch(v));
                return {{v ? n.then_branch : n.else_branch, s}, std::move(l), v ? "if-true" : "if-false"};
            } else if constexpr (std::is_same_v<T, While>) {
                // The unfolding inherits the loop's color.
                auto unfolded = if_(n.cond, seq(n.body, c, c->color), skip(c->color), c->color);
                return {{unfolded, s}, {LeakAtom::eps()}, "while"};
            } else {
                Value v = eval_aexpr(*n.scrutinee, s);
                Leakage l;
                leak_into(*n.scrutinee, l);
                for (const auto& k : n.cases)
                    if (k.guard == v)
                        return {{k.body, s}, std::move(l), "switch"};
                return {{skip(c->color), s}, std::move(l), "switch-miss"};
            }
        },
        c->node);
}

} // namespace

StepResult step(const Config& c)
{
    if (c.is_final())
        return Stuck{};
    try {
        return step_cmd(c.cmd, c.store);
    } catch (const EvalError& e) {
        return e.error();
    }
}

std::string_view to_string(RunStatus s)
{
    switch (s) {
    case RunStatus::Terminated: return "Terminated";
    case RunStatus::StepLimit: return "StepLimit";
    case RunStatus::RuntimeError: return "RuntimeError";
    }
    return "?";
}

Leakage Trace::cumulative_leakage() const
{
    Leakage out;
    for (const auto& s : steps)
        out.insert(out.end(), s.leak.begin(), s.leak.end());
    return out;
}

Trace run(const Config& start, const RunOptions& opts)
{
    Trace t;
    t.last = start;
    while (!t.last.is_final()) {
        if (t.steps.size() >= opts.max_steps) {
            t.status = RunStatus::StepLimit;
            return t;
        }
        StepResult r = step(t.last);
        if (auto* err = std::get_if<RuntimeError>(&r)) {
            t.status = RunStatus::RuntimeError;
            t.error = *err;
            return t;
        }
        auto& s = std::get<Stepped>(r);
        TraceStep ts{s.rule, std::move(s.leak), std::nullopt};
        if (opts.record_configs)
            ts.config = s.next;
        t.steps.push_back(std::move(ts));
        t.last = std::move(s.next);
    }
    t.status = RunStatus::Terminated;
    return t;
}

} // namespace flatline
