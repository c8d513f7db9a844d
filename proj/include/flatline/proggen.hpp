/// @file proggen.hpp
/// @brief Seeded random programs and stores for property tests.

#pragma once

#include "flatline/ast.hpp"
#include "flatline/semantics.hpp"

#include <cstdint>
#include <set>
#include <string>

namespace flatline {

enum class LoopMode
{
    /// Only `i := 0; while i <= K do (body; i := i + 1) end` with a fresh i.
    BoundedCounter,
    Free,
};

struct GenWeights
{
    int skip = 1;
    int assign = 4;
    int seq = 4;
    int if_ = 2;
    int while_ = 1;
};

struct GenConfig
{
    std::uint64_t seed = 0;
    int max_depth = 4;
    int max_vars = 3;
    Interval value_domain{-3, 3};
    LoopMode loop_mode = LoopMode::BoundedCounter;
    GenWeights weights;
    /// How many of the variables are declared secret (the rest are public).
    int secrets = 1;
    /// Upper bound of K in bounded loops.
    int max_loop_bound = 2;
    int max_expr_depth = 2;
};

/// Same configuration, same program. Variables are named v0, v1, ...;
/// loop counters i0, i1, ... are never written outside their loop header.
Program gen_program(const GenConfig& cfg);

/// Binds every variable in @p vars to a value of cfg.value_domain.
Store gen_store(const GenConfig& cfg, const std::set<std::string>& vars);

} // namespace flatline
