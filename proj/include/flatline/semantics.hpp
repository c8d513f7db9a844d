/// @file semantics.hpp
/// @brief Leakage-instrumented small-step semantics.
///
/// Every step yields the successor configuration together with the list of
/// atomic observations it leaks. Leakage lists only ever grow.

#pragma once

#include "flatline/ast.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flatline {

using Store = std::map<std::string, Value>;

std::string to_string(const Store& s);

/// Closed integer range [lo, hi].
struct Interval
{
    Value lo = -2;
    Value hi = 2;

    [[nodiscard]] std::uint64_t count() const { return hi < lo ? 0 : static_cast<std::uint64_t>(hi - lo) + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

enum class RuntimeErrorKind
{
    UnboundVariable,
    DivisionByZero,
    Overflow,
};

struct RuntimeError
{
    RuntimeErrorKind kind{};
    std::string detail;
    friend bool operator==(const RuntimeError&, const RuntimeError&) = default;
};

std::string to_string(const RuntimeError& e);

/// Thrown by expression evaluation.
class EvalError : public Error
{
public:
    explicit EvalError(RuntimeError e);
    const RuntimeError& error() const { return error_; }

private:
    RuntimeError error_;
};

//===----------------------------------------------------------------------===//
// Leakage
//===----------------------------------------------------------------------===//

struct LeakAtom
{
    enum class Kind
    {
        Eps,
        Op,
        Branch,
        Write,
    };

    Kind kind = Kind::Eps;
    ArithOp op = ArithOp::Add;
    bool taken = false;
    std::string name;

    static LeakAtom eps() { return {}; }
    static LeakAtom arith(ArithOp op) { return {Kind::Op, op, false, {}}; }
    static LeakAtom branch(bool taken) { return {Kind::Branch, ArithOp::Add, taken, {}}; }
    static LeakAtom write(std::string name) { return {Kind::Write, ArithOp::Add, false, std::move(name)}; }

    friend bool operator==(const LeakAtom& a, const LeakAtom& b);
};

using Leakage = std::vector<LeakAtom>;

/// `eps`, `op:+`, `br:1`, `wr:x`.
std::string to_string(const LeakAtom& a);
/// Space-separated atoms.
std::string to_string(const Leakage& l);
LeakAtom parse_leak_atom(std::string_view text);

//===----------------------------------------------------------------------===//
// Expressions
//===----------------------------------------------------------------------===//

/// Integer evaluation with 64-bit checked arithmetic; `/` and `%` truncate
/// toward zero. Throws EvalError.
Value eval_aexpr(const AExpr& e, const Store& s);
/// Both sides of `or` are always evaluated.
bool eval_bexpr(const BExpr& b, const Store& s);

Leakage leak_expr(const AExpr& e, const Store& s);
Leakage leak_expr(const BExpr& b, const Store& s);

//===----------------------------------------------------------------------===//
// Commands
//===----------------------------------------------------------------------===//

struct Config
{
    CmdPtr cmd;
    Store store;

    [[nodiscard]] bool is_final() const { return is_skip(cmd); }
};

struct Stepped
{
    Config next;
    Leakage leak;
    /// Name of the rule that fired at the redex: assign, skip-seq, if-true,
    /// if-false, while, switch, switch-miss.
    std::string_view rule;
};

struct Stuck
{
};

using StepResult = std::variant<Stepped, Stuck, RuntimeError>;

StepResult step(const Config& c);

enum class RunStatus
{
    Terminated,
    StepLimit,
    RuntimeError,
};

std::string_view to_string(RunStatus s);

struct TraceStep
{
    std::string_view rule;
    Leakage leak;
    /// Present only when the run was asked to record configurations.
    std::optional<Config> config;
};

struct Trace
{
    std::vector<TraceStep> steps;
    RunStatus status = RunStatus::Terminated;
    std::optional<RuntimeError> error;
    Config last;

    /// Concatenation of every per-step leakage.
    [[nodiscard]] Leakage cumulative_leakage() const;
};

struct RunOptions
{
    std::size_t max_steps = 10000;
    bool record_configs = false;
};

Trace run(const Config& start, const RunOptions& opts = {});

} // namespace flatline
