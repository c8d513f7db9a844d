/// @file ctcheck.hpp
/// @brief Dynamic observational non-interference check.
///
/// Pairs of stores that agree on the public inputs are executed side by side;
/// the first step at which their leakages (or their finality) differ is a
/// witness of insecurity.

#pragma once

#include "flatline/ast.hpp"
#include "flatline/semantics.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace flatline {

/// What the attacker compares per step: the whole atom list, or only its
/// length (a step-counting observer).
enum class Observer
{
    Full,
    Length,
};

struct Policy
{
    std::set<std::string> secrets;
    std::set<std::string> publics;
    Interval secret_domain;
    Interval public_domain;
    Observer observer = Observer::Full;
};

/// Inputs of @p p split by its declarations. Only variables that are read
/// before being written are inputs; undeclared ones are public.
Policy policy_for(const Program& p, Interval domain = {});

/// True iff the stores agree on every public variable.
/// Throws EvalError if either store leaves a public unbound.
bool phi(const Store& a, const Store& b, const Policy& pol);

class BoundExceeded : public Error
{
public:
    using Error::Error;
};

struct PairMode
{
    enum class Kind
    {
        Exhaustive,
        Random,
    };

    Kind kind = Kind::Exhaustive;
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    /// Exhaustive mode refuses store spaces larger than this.
    std::uint64_t bound = std::uint64_t{1} << 20;

    static PairMode exhaustive() { return {}; }
    static PairMode random(std::uint64_t seed, std::size_t samples) { return {Kind::Random, seed, samples}; }
};

using StorePair = std::pair<Store, Store>;

/// Unordered pairs agreeing on publics and differing on some secret.
/// Throws BoundExceeded in exhaustive mode when the space is too large.
std::vector<StorePair> enumerate_pairs(const Policy& pol, const PairMode& mode);

struct Witness
{
    enum class Kind
    {
        LeakMismatch,
        FinalityMismatch,
    };

    Store store_a;
    Store store_b;
    /// 1-based index of the offending step. For a finality mismatch: the
    /// number of steps after which exactly one side is final.
    std::size_t step = 0;
    Leakage leak_a;
    Leakage leak_b;
    Kind kind = Kind::LeakMismatch;
};

std::string_view to_string(Witness::Kind k);

struct Verdict
{
    enum class Kind
    {
        Secure,
        Insecure,
        Inconclusive,
    };

    Kind kind = Kind::Secure;
    std::size_t pairs_checked = 0;
    std::optional<Witness> witness;
    /// For Inconclusive: StepLimit or RuntimeError.
    std::optional<RunStatus> reason;
    std::string detail;
};

std::string_view to_string(Verdict::Kind k);

Verdict check_oni(const Program& p, const Policy& pol, const PairMode& mode, std::size_t max_steps = 10000);

} // namespace flatline
