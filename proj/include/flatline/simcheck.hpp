/// @file simcheck.hpp
/// @brief Executable simulation relation between a program and its
/// flattening, plus the step-matching and CT-diagram checks built on it.
///
/// The auxiliary relation is computed as a set of continuation guards:
/// `ends(kind, c, n)` holds every m such that running the cases from guard n
/// performs exactly what `c` still has to do and then continues at m.

#pragma once

#include "flatline/ast.hpp"
#include "flatline/ctcheck.hpp"
#include "flatline/semantics.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flatline {

/// Target steps matching one source step, per shape of the source redex.
struct NumTable
{
    int n_skipseq_while = 0;
    int n_assign_like = 8;
    int n_if = 9;
    /// Target steps from the dispatch loop with pc = 0 to `skip`.
    int n_exit = 2;
    /// `skip; c` whose skip still has its own case to run. Zero reproduces
    /// a purely syntax-directed count.
    int n_skip_case = 0;

    static NumTable nominal() { return {}; }
    /// Counts matching this implementation's step granularity.
    static NumTable artifact() { return {0, 7, 6, 2, 6}; }

    friend bool operator==(const NumTable&, const NumTable&) = default;
};

struct RelKind
{
    enum class Tag
    {
        Diamond,
        Bowtie,
    };

    Tag tag = Tag::Bowtie;
    Value n0 = 0;

    static RelKind diamond(Value n0) { return {Tag::Diamond, n0}; }
    static RelKind bowtie() { return {}; }
};

class IndexError : public Error
{
public:
    using Error::Error;
};

/// Everything the relation needs to know about a source program.
class SimContext
{
public:
    /// @p p is colored here if it is not already.
    explicit SimContext(const Program& p);

    const Program& source() const { return source_; }
    const std::string& pc() const { return pc_; }
    const CaseList& cases() const { return cases_; }
    /// The canonical dispatch loop built from cases().
    const CmdPtr& loop() const { return loop_; }
    Value max_guard() const { return static_cast<Value>(cases_.size()); }

    /// Case with guard n in [1, max_guard()], or nullptr.
    const Case* at(Value n) const;

    /// Continuation guards of @p c started at guard @p n.
    std::set<Value> ends(RelKind kind, const CmdPtr& c, Value n) const;

    /// Header guard of the loop colored @p color, if there is one.
    std::optional<Value> header_of(Color color) const;
    CmdPtr loop_of(Color color) const;

    /// True iff ls[n] has the shape `(n, skip; pc := k)`.
    bool is_skip_case(Value n) const;

private:
    Program source_;
    std::string pc_;
    CaseList cases_;
    CmdPtr loop_;
    std::map<int, std::pair<Value, CmdPtr>> headers_;
};

/// m ∈ ends(kind, c, n). Throws IndexError if n or m is not in [0, |ls|].
bool cmd_rel(const SimContext& ctx, RelKind kind, const CmdPtr& c, Value n, Value m);

/// The source/target configuration relation.
bool config_rel(const SimContext& ctx, const Config& A, const Config& alpha);
bool config_rel(const Program& p, const Config& A, const Config& alpha);

/// Target steps predicted by the source redex alone: skip-seq and while
/// give n_skipseq_while, if gives n_if, everything else n_assign_like.
int num_steps(const Config& A, const NumTable& tbl);

/// As above, except that a `skip; c` whose skip still has its own pending
/// case at @p pc counts n_skip_case.
int num_steps(const SimContext& ctx, const Config& A, Value pc, const NumTable& tbl);

/// Target steps from a related target configuration to `skip` once the
/// source has finished.
int drain_steps(const SimContext& ctx, Value pc, const NumTable& tbl);

/// Decreases on every source step that the target matches with zero steps.
Value measure(const Config& A);

/// Shape of the source redex: assign, if, while, skip-seq, final.
std::string redex_shape(const Config& A);

/// shape -> (observed count -> occurrences)
using Calibration = std::map<std::string, std::map<int, std::size_t>>;

class NoRelatedConfig : public Error
{
public:
    using Error::Error;
};

/// For each source step, the least k <= bound such that the target, stepped
/// k times, is related again. Throws NoRelatedConfig if there is none.
Calibration calibrate_num(const Program& p, const Store& sigma, std::size_t max_steps = 10000, int bound = 32);

void merge_into(Calibration& into, const Calibration& from);

struct SimFailure
{
    enum class Clause
    {
        Relation,
        Measure,
        Diagram,
        Final,
    };

    std::string program;
    std::size_t run = 0; ///< index of the store or pair
    std::size_t step = 0;
    Clause clause = Clause::Relation;
    std::string detail;
};

std::string_view to_string(SimFailure::Clause c);

struct SimReport
{
    std::size_t programs_checked = 0;
    std::size_t runs_checked = 0;
    std::size_t steps_checked = 0;
    /// Runs cut short by the step budget or a runtime error.
    std::size_t runs_incomplete = 0;
    std::vector<SimFailure> failures;
    Calibration calibration;

    void merge(const SimReport& other);
};

struct SimOptions
{
    NumTable table = NumTable::artifact();
    std::size_t max_steps = 10000;
    std::string label = "program";
    /// Check against the off-by-one flattening instead of the real one.
    bool mutate = false;
};

SimReport check_general_simulation(const Program& p, const std::vector<Store>& stores, const SimOptions& opts = {});

/// Configurations with equal commands.
bool equiv(const Config& a, const Config& b);

SimReport check_ct_simulation(const Program& p, const Policy& pol, const PairMode& mode, const SimOptions& opts = {});

} // namespace flatline
