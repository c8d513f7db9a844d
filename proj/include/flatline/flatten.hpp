/// @file flatten.hpp
/// @brief Control-flow flattening into a single `switch` dispatch loop.

#pragma once

#include "flatline/ast.hpp"

#include <optional>
#include <string>

namespace flatline {

/// `pc`, or `pc1`, `pc2`, ... : the first name not used anywhere in @p p.
std::string fresh_pc_name(const Program& p);

/// Case list for @p c occupying guards [n, n + size(c) - 1], continuing at
/// @p m when done. Throws Error if @p c contains a switch.
CaseList lab(const std::string& pc, const CmdPtr& c, Value n, Value m);

/// `while 1 <= pc do switch pc : cases end end`
CmdPtr dispatch_loop(const std::string& pc, CaseList cases);

/// `pc := 1; while 1 <= pc do switch pc : lab(pc, body, 1, 0) end end`.
/// The counter is added to the publics. Throws Error on target input.
Program flatten_program(const Program& p);

/// The pieces of a program produced by flatten_program.
struct FlatParts
{
    std::string pc;
    CaseList cases;
    /// The `while 1 <= pc ...` loop.
    CmdPtr loop;
};

/// Throws Error if @p target does not have the flattened shape.
FlatParts decompose(const Program& target);

/// Case with guard @p n, or nullptr.
const Case* find_case(const CaseList& cases, Value n);

/// Target of a trailing `pc := k` in a case body, if it has that shape.
std::optional<Value> jump_target(const Cmd& body, const std::string& pc);

/// True iff the last case of lab(pc, p, 1, 0) has the shape `(n, c; pc := 0)`
/// with n = size(p).
bool terminal_case_check(const Program& p);

/// Test fixture: a flattening whose first jump lands one case too far.
Program flatten_program_off_by_one(const Program& p);

} // namespace flatline
