/// @file hoist.hpp
/// @brief Algebraic simplification ("hoisting") over n-ary expressions.
///
/// Expressions are lifted into an n-ary form where associative chains of
/// `+`, `*` and `or` become argument lists, partially evaluated, and lowered
/// back to binary syntax with the folded constant first.

#pragma once

#include "flatline/ast.hpp"

#include <string>
#include <vector>

namespace flatline {

struct NaryAExpr
{
    enum class Kind
    {
        Lit,
        Var,
        Nary, ///< `+` or `*` over two or more arguments
        Neg,  ///< one argument
        Bin,  ///< `-`, `/` or `%` over exactly two arguments
    };

    Kind kind = Kind::Lit;
    Value value = 0;
    std::string name;
    ArithOp op = ArithOp::Add;
    std::vector<NaryAExpr> args;

    static NaryAExpr literal(Value v);
    static NaryAExpr variable(std::string n);
    static NaryAExpr nary(ArithOp op, std::vector<NaryAExpr> args);
    static NaryAExpr neg(NaryAExpr a);
    static NaryAExpr bin(ArithOp op, NaryAExpr l, NaryAExpr r);

    bool is_lit() const { return kind == Kind::Lit; }

    friend bool operator==(const NaryAExpr&, const NaryAExpr&) = default;
};

struct NaryBExpr
{
    enum class Kind
    {
        True,
        False,
        Or, ///< two or more arguments
        Not,
        Leq,
        Eq,
    };

    Kind kind = Kind::True;
    std::vector<NaryBExpr> args;
    std::vector<NaryAExpr> operands; ///< the two sides of Leq / Eq

    static NaryBExpr constant(bool v);
    static NaryBExpr disj(std::vector<NaryBExpr> args);
    static NaryBExpr negation(NaryBExpr b);
    static NaryBExpr compare(CmpOp op, NaryAExpr l, NaryAExpr r);

    bool is_const() const { return kind == Kind::True || kind == Kind::False; }

    friend bool operator==(const NaryBExpr&, const NaryBExpr&) = default;
};

NaryAExpr normalize_nary(const AExpr& e);
NaryBExpr normalize_nary(const BExpr& b);

/// Left-folded binary form; Neg becomes `0 - a`.
AExprPtr to_core(const NaryAExpr& e);
BExprPtr to_core(const NaryBExpr& b);

std::string pretty(const NaryAExpr& e);

struct AvalResult
{
    Value value = 0;
    std::vector<NaryAExpr> residual;
    friend bool operator==(const AvalResult&, const AvalResult&) = default;
};

/// Folds the constants of `op [args]`, collecting what is left in order.
/// @p op is `+` or `*`; needs at least two arguments. Throws EvalError on
/// overflow.
AvalResult aval(ArithOp op, const std::vector<NaryAExpr>& args);

/// Boolean partial evaluation of a disjunction or a comparison; anything
/// else is returned unchanged.
NaryBExpr bval(const NaryBExpr& b);

NaryAExpr hoist(const NaryAExpr& e);
NaryBExpr hoist(const NaryBExpr& b);

AExprPtr hoist_aexpr(const AExpr& e);
BExprPtr hoist_bexpr(const BExpr& b);
CmdPtr hoist_cmd(const CmdPtr& c);

/// hoist_cmd on the body; source programs are recolored.
Program hoist_program(const Program& p);

} // namespace flatline
