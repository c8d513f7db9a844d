/// @file ast.hpp
/// @brief Colored abstract syntax of the while-language and its switch sugar.
///
/// Nodes are immutable and shared through `std::shared_ptr<const T>`, so a
/// configuration can reuse the untouched parts of the program it came from.
/// Equality of nodes is structural and ignores colors.

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace flatline {

using Value = std::int64_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

//===----------------------------------------------------------------------===//
// Expressions
//===----------------------------------------------------------------------===//

enum class ArithOp : char
{
    Add = '+',
    Sub = '-',
    Mul = '*',
    Div = '/',
    Mod = '%',
};

enum class CmpOp
{
    Leq,
    Eq,
};

struct AExpr;
struct BExpr;
using AExprPtr = std::shared_ptr<const AExpr>;
using BExprPtr = std::shared_ptr<const BExpr>;

struct IntLit
{
    Value value{};
    friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct VarRef
{
    std::string name;
    friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct ArithBin
{
    ArithOp op{};
    AExprPtr lhs;
    AExprPtr rhs;
    friend bool operator==(const ArithBin& a, const ArithBin& b);
};

struct AExpr
{
    std::variant<IntLit, VarRef, ArithBin> node;
    friend bool operator==(const AExpr&, const AExpr&) = default;
};

struct BoolLit
{
    bool value{};
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};

struct OrExpr
{
    BExprPtr lhs;
    BExprPtr rhs;
    friend bool operator==(const OrExpr& a, const OrExpr& b);
};

struct NotExpr
{
    BExprPtr operand;
    friend bool operator==(const NotExpr& a, const NotExpr& b);
};

struct Compare
{
    CmpOp op{};
    AExprPtr lhs;
    AExprPtr rhs;
    friend bool operator==(const Compare& a, const Compare& b);
};

struct BExpr
{
    std::variant<BoolLit, OrExpr, NotExpr, Compare> node;
    friend bool operator==(const BExpr&, const BExpr&) = default;
};

AExprPtr lit(Value v);
AExprPtr var(std::string name);
AExprPtr arith(ArithOp op, AExprPtr lhs, AExprPtr rhs);

BExprPtr boolean(bool v);
BExprPtr lor(BExprPtr lhs, BExprPtr rhs);
BExprPtr lnot(BExprPtr operand);
BExprPtr leq(AExprPtr lhs, AExprPtr rhs);
BExprPtr eq(AExprPtr lhs, AExprPtr rhs);

//===----------------------------------------------------------------------===//
// Commands
//===----------------------------------------------------------------------===//

/// Permanent color of a command: white (loop == 0) or the id of a while loop.
struct Color
{
    int loop = 0;

    [[nodiscard]] bool white() const { return loop == 0; }
    static Color white_color() { return {}; }
    static Color of_loop(int id) { return Color{id}; }
    friend bool operator==(const Color&, const Color&) = default;
};

struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

struct Skip
{
    friend bool operator==(const Skip&, const Skip&) = default;
};

struct Assign
{
    std::string name;
    AExprPtr value;
    friend bool operator==(const Assign& a, const Assign& b);
};

struct Seq
{
    CmdPtr first;
    CmdPtr second;
    friend bool operator==(const Seq& a, const Seq& b);
};

struct If
{
    BExprPtr cond;
    CmdPtr then_branch;
    CmdPtr else_branch;
    friend bool operator==(const If& a, const If& b);
};

struct While
{
    BExprPtr cond;
    CmdPtr body;
    friend bool operator==(const While& a, const While& b);
};

/// One `case guard: body` arm of a switch.
struct Case
{
    Value guard{};
    CmdPtr body;
    friend bool operator==(const Case& a, const Case& b);
};

/// Switch arms ordered by strictly increasing guard.
using CaseList = std::vector<Case>;

struct Switch
{
    AExprPtr scrutinee;
    CaseList cases;
    friend bool operator==(const Switch& a, const Switch& b);
};

struct Cmd
{
    std::variant<Skip, Assign, Seq, If, While, Switch> node;
    Color color;

    /// Colors are metadata: two commands are equal iff their syntax is.
    friend bool operator==(const Cmd& a, const Cmd& b) { return a.node == b.node; }
};

CmdPtr skip(Color c = {});
CmdPtr assign(std::string name, AExprPtr value, Color c = {});
CmdPtr seq(CmdPtr first, CmdPtr second, Color c = {});
CmdPtr if_(BExprPtr cond, CmdPtr then_branch, CmdPtr else_branch, Color c = {});
CmdPtr while_(BExprPtr cond, CmdPtr body, Color c = {});
CmdPtr switch_(AExprPtr scrutinee, CaseList cases, Color c = {});

/// Right-nested sequence of the given commands; `skip` when empty.
CmdPtr seq_all(const std::vector<CmdPtr>& cmds);

/// Deep structural equality through pointers; null equals only null.
bool same(const CmdPtr& a, const CmdPtr& b);
bool same(const AExprPtr& a, const AExprPtr& b);
bool same(const BExprPtr& a, const BExprPtr& b);

template <typename T>
const T* as(const CmdPtr& c)
{
    return std::get_if<T>(&c->node);
}

inline bool is_skip(const CmdPtr& c) { return std::holds_alternative<Skip>(c->node); }

//===----------------------------------------------------------------------===//
// Programs
//===----------------------------------------------------------------------===//

enum class Dialect
{
    Source,
    Target,
};

struct Program
{
    CmdPtr body;
    std::set<std::string> secrets;
    std::set<std::string> publics;
    Dialect dialect = Dialect::Source;
};

/// Number of switch cases the flattening emits for @p c.
/// Throws Error on a Switch node.
Value size(const Cmd& c);

/// Colors every while (and everything beneath it, up to the next nested
/// while) with a fresh loop id, numbered 1..k in pre-order. Everything else
/// becomes white, including the whole body of a target program.
Program assign_colors(const Program& p);

inline Color color_of(const Cmd& c) { return c.color; }

bool contains_switch(const Cmd& c);

/// Every identifier occurring in @p c.
std::set<std::string> variables(const Cmd& c);
std::set<std::string> variables(const AExpr& e);
std::set<std::string> variables(const BExpr& b);

/// Variables that some path may read before writing them: the inputs.
std::set<std::string> upward_exposed(const Cmd& c);

/// Number of While nodes in @p c.
int count_whiles(const Cmd& c);

//===----------------------------------------------------------------------===//
// Pretty printing
//===----------------------------------------------------------------------===//

const char* op_symbol(ArithOp op);

std::string pretty(const AExpr& e);
std::string pretty(const BExpr& b);
std::string pretty(const Cmd& c, int indent = 0);
std::string pretty(const Program& p);

} // namespace flatline
