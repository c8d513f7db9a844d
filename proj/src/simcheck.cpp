#include "flatline/simcheck.hpp"

#include "flatline/flatten.hpp"

#include <algorithm>

namespace flatline {

//===----------------------------------------------------------------------===//
// Case shapes
//===----------------------------------------------------------------------===//

namespace {

/// `pc := k` -> k
std::optional<Value> jump_of(const CmdPtr& c, const std::string& pc)
{
    const auto* a = as<Assign>(c);
    if (!a || a->name != pc)
        return std::nullopt;
    const auto* v = std::get_if<IntLit>(&a->value->node);
    if (!v)
        return std::nullopt;
    return v->value;
}

/// `if b then pc := k1 else pc := k2` with the given guard -> (k1, k2)
std::optional<std::pair<Value, Value>> dispatch_of(const Case* k, const BExprPtr& b, const std::string& pc)
{
    if (!k)
        return std::nullopt;
    const auto* i = as<If>(k->body);
    if (!i || !same(i->cond, b))
        return std::nullopt;
    auto t = jump_of(i->then_branch, pc);
    auto e = jump_of(i->else_branch, pc);
    if (!t || !e)
        return std::nullopt;
    return std::pair{*t, *e};
}

/// The `pc := k` tail of `c; pc := k` together with c.
std::optional<std::pair<CmdPtr, Value>> straight_of(const Case* k, const std::string& pc)
{
    if (!k)
        return std::nullopt;
    const auto* s = as<Seq>(k->body);
    if (!s)
        return std::nullopt;
    auto j = jump_of(s->second, pc);
    if (!j)
        return std::nullopt;
    return std::pair{s->first, *j};
}

/// Is @p c the unfolding `if b then (body; W) else skip` of a loop W?
const While* unfolded_loop(const CmdPtr& c, const If& i)
{
    const auto* s = as<Seq>(i.then_branch);
    if (!s || !is_skip(i.else_branch))
        return nullptr;
    const auto* w = as<While>(s->second);
    if (!w || !same(w->cond, i.cond) || !same(w->body, s->first))
        return nullptr;
    if (s->second->color != c->color || c->color.white())
        return nullptr;
    return w;
}

std::set<Value> intersect(const std::set<Value>& a, const std::set<Value>& b)
{
    std::set<Value> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

} // namespace

//===----------------------------------------------------------------------===//
// SimContext
//===----------------------------------------------------------------------===//

SimContext::SimContext(const Program& p)
{
    if (p.dialect == Dialect::Target || contains_switch(*p.body))
        throw Error("simulation checks need a source program");
    source_ = assign_colors(p);
    auto parts = decompose(flatten_program(source_));
    pc_ = parts.pc;
    cases_ = std::move(parts.cases);
    loop_ = parts.loop;

    // Header guard of every loop, following the case numbering.
    auto walk = [&](auto&& self, const CmdPtr& c, Value n) -> void {
        if (const auto* s = as<Seq>(c)) {
            self(self, s->first, n);
            self(self, s->second, n + size(*s->first));
        } else if (const auto* i = as<If>(c)) {
            self(self, i->then_branch, n + 1);
            self(self, i->else_branch, n + 1 + size(*i->then_branch));
        } else if (const auto* w = as<While>(c)) {
            headers_[c->color.loop] = {n, c};
            self(self, w->body, n + 1);
        }
    };
    walk(walk, source_.body, 1);
}

const Case* SimContext::at(Value n) const
{
    if (n < 1 || n > max_guard())
        return nullptr;
    return &cases_[static_cast<std::size_t>(n - 1)];
}

std::optional<Value> SimContext::header_of(Color color) const
{
    auto it = headers_.find(color.loop);
    if (color.white() || it == headers_.end())
        return std::nullopt;
    return it->second.first;
}

CmdPtr SimContext::loop_of(Color color) const
{
    auto it = headers_.find(color.loop);
    if (color.white() || it == headers_.end())
        return nullptr;
    return it->second.second;
}

bool SimContext::is_skip_case(Value n) const
{
    auto s = straight_of(at(n), pc_);
    return s && is_skip(s->first);
}

std::set<Value> SimContext::ends(RelKind kind, const CmdPtr& c, Value n) const
{
    if (n == 0)
        return is_skip(c) ? std::set<Value>{0} : std::set<Value>{};
    if (n < 0 || n > max_guard())
        return {};
    return std::visit(
        [&](const auto& node) -> std::set<Value> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Skip>) {
                // Either the residue of a finished step, or an original skip
                // whose case has yet to run.
                std::set<Value> out{n};
                if (auto s = straight_of(at(n), pc_); s && is_skip(s->first))
                    out.insert(s->second);
                return out;
            } else if constexpr (std::is_same_v<T, Assign>) {
                auto s = straight_of(at(n), pc_);
                if (s && same(s->first, assign(node.name, node.value)))
                    return {s->second};
                return {};
            } else if constexpr (std::is_same_v<T, Seq>) {
                std::set<Value> out;
                for (Value mid : ends(kind, node.first, n)) {
                    auto rest = ends(kind, node.second, mid);
                    out.insert(rest.begin(), rest.end());
                }
                return out;
            } else if constexpr (std::is_same_v<T, If>) {
                Value else_at = 0;
                if (const auto* w = unfolded_loop(c, node))
                    else_at = n + 1 + size(*w->body);
                else
                    else_at = n + 1 + size(*node.then_branch);
                auto d = dispatch_of(at(n), node.cond, pc_);
                if (!d || d->first != n + 1 || d->second != else_at)
                    return {};
                return intersect(ends(kind, node.then_branch, n + 1), ends(kind, node.else_branch, else_at));
            } else if constexpr (std::is_same_v<T, While>) {
                std::set<Value> out;
                Value exit_at = n + 1 + size(*node.body);
                auto d = dispatch_of(at(n), node.cond, pc_);
                if (d && d->first == n + 1 && d->second == exit_at &&
                    ends(RelKind::bowtie(), node.body, n + 1).contains(n)) {
                    if (auto s = straight_of(at(exit_at), pc_); s && is_skip(s->first))
                        out.insert(s->second);
                }
                if (kind.tag == RelKind::Tag::Diamond) {
                    auto s = straight_of(at(n), pc_);
                    if (n == kind.n0 || (s && is_skip(s->first) && s->second == kind.n0))
                        out.insert(kind.n0);
                }
                return out;
            } else {
                throw Error("relation: switch in a source command");
            }
        },
        c->node);
}

bool cmd_rel(const SimContext& ctx, RelKind kind, const CmdPtr& c, Value n, Value m)
{
    auto in_range = [&](Value g) { return g >= 0 && g <= ctx.max_guard(); };
    if (!in_range(n) || !in_range(m))
        throw IndexError("guard out of range [0, " + std::to_string(ctx.max_guard()) + "]");
    return ctx.ends(kind, c, n).contains(m);
}

//===----------------------------------------------------------------------===//
// Configuration relation
//===----------------------------------------------------------------------===//

namespace {

/// pc value of @p alpha if its store is A's plus pc.
std::optional<Value> store_match(const SimContext& ctx, const Store& source, const Store& target)
{
    auto it = target.find(ctx.pc());
    if (it == target.end() || source.contains(ctx.pc()))
        return std::nullopt;
    if (target.size() != source.size() + 1)
        return std::nullopt;
    for (const auto& [k, v] : source) {
        auto t = target.find(k);
        if (t == target.end() || t->second != v)
            return std::nullopt;
    }
    return it->second;
}

} // namespace

bool config_rel(const SimContext& ctx, const Config& A, const Config& alpha)
{
    auto pcv = store_match(ctx, A.store, alpha.store);
    if (!pcv)
        return false;
    if (is_skip(alpha.cmd))
        return is_skip(A.cmd);
    if (!same(alpha.cmd, ctx.loop()))
        return false;
    Value n = *pcv;
    if (n < 0 || n > ctx.max_guard())
        return false;
    Color color = A.cmd->color;
    if (color.white())
        return ctx.ends(RelKind::bowtie(), A.cmd, n).contains(0);
    auto n0 = ctx.header_of(color);
    if (!n0)
        return false;
    if (ctx.ends(RelKind::bowtie(), ctx.loop_of(color), *n0).empty())
        return false;
    return ctx.ends(RelKind::diamond(*n0), A.cmd, n).contains(0);
}

bool config_rel(const Program& p, const Config& A, const Config& alpha)
{
    return config_rel(SimContext(p), A, alpha);
}

//===----------------------------------------------------------------------===//
// num and measure
//===----------------------------------------------------------------------===//

namespace {

/// Leftmost non-sequence command, stopping at `skip; c`.
CmdPtr redex(CmdPtr c)
{
    while (const auto* s = as<Seq>(c)) {
        if (is_skip(s->first))
            return c;
        c = s->first;
    }
    return c;
}

} // namespace

std::string redex_shape(const Config& A)
{
    auto r = redex(A.cmd);
    if (as<Seq>(r))
        return "skip-seq";
    if (as<While>(r))
        return "while";
    if (as<If>(r))
        return "if";
    if (as<Assign>(r))
        return "assign";
    if (as<Switch>(r))
        return "switch";
    return "final";
}

int num_steps(const Config& A, const NumTable& tbl)
{
    auto r = redex(A.cmd);
    if (is_skip(r))
        return 0;
    if (as<Seq>(r) || as<While>(r))
        return tbl.n_skipseq_while;
    if (as<If>(r))
        return tbl.n_if;
    return tbl.n_assign_like;
}

int num_steps(const SimContext& ctx, const Config& A, Value pc, const NumTable& tbl)
{
    auto r = redex(A.cmd);
    if (as<Seq>(r) && ctx.is_skip_case(pc))
        return tbl.n_skip_case;
    return num_steps(A, tbl);
}

int drain_steps(const SimContext& ctx, Value pc, const NumTable& tbl)
{
    return tbl.n_exit + (ctx.is_skip_case(pc) ? tbl.n_skip_case : 0);
}

Value measure(const Config& A)
{
    auto mu = [](auto&& self, const CmdPtr& c) -> Value {
        if (const auto* w = as<While>(c))
            return 2 * self(self, w->body) + 3;
        if (const auto* s = as<Seq>(c))
            return self(self, s->first) + self(self, s->second) + 1;
        return 0;
    };
    return mu(mu, A.cmd);
}

//===----------------------------------------------------------------------===//
// Stepping helpers
//===----------------------------------------------------------------------===//

namespace {

/// Steps @p c up to @p k times, appending leakage. False if it could not.
bool advance(Config& c, int k, Leakage* leak = nullptr)
{
    for (int i = 0; i < k; ++i) {
        StepResult r = step(c);
        auto* s = std::get_if<Stepped>(&r);
        if (!s)
            return false;
        if (leak)
            leak->insert(leak->end(), s->leak.begin(), s->leak.end());
        c = std::move(s->next);
    }
    return true;
}

/// Target configuration right after the `pc := 1` prologue.
std::optional<Config> after_prologue(const Program& target, const Store& sigma, Leakage* leak = nullptr)
{
    Config alpha{target.body, sigma};
    if (!advance(alpha, 2, leak))
        return std::nullopt;
    return alpha;
}

Value pc_of(const SimContext& ctx, const Config& alpha)
{
    auto it = alpha.store.find(ctx.pc());
    return it == alpha.store.end() ? -1 : it->second;
}

std::optional<Config> source_step(const Config& A, Leakage* leak = nullptr)
{
    StepResult r = step(A);
    auto* s = std::get_if<Stepped>(&r);
    if (!s)
        return std::nullopt;
    if (leak)
        *leak = s->leak;
    return std::move(s->next);
}

} // namespace

Calibration calibrate_num(const Program& p, const Store& sigma, std::size_t max_steps, int bound)
{
    SimContext ctx(p);
    Calibration cal;
    Config A{ctx.source().body, sigma};
    auto alpha = after_prologue(flatten_program(ctx.source()), sigma);
    if (!alpha || !config_rel(ctx, A, *alpha))
        throw NoRelatedConfig("initial configurations are not related");

    for (std::size_t n = 0; n < max_steps && !A.is_final(); ++n) {
        auto shape = redex_shape(A);
        auto B = source_step(A);
        if (!B)
            return cal;
        Config beta = *alpha;
        int k = 0;
        while (!config_rel(ctx, *B, beta)) {
            if (++k > bound || !advance(beta, 1))
                throw NoRelatedConfig("no related target configuration within " + std::to_string(bound) +
                                      " steps after source step " + std::to_string(n + 1));
        }
        ++cal[shape][k];
        A = std::move(*B);
        alpha = std::move(beta);
    }
    if (A.is_final()) {
        int k = 0;
        while (!is_skip(alpha->cmd)) {
            if (++k > bound || !advance(*alpha, 1))
                throw NoRelatedConfig("target does not finish within " + std::to_string(bound) + " steps");
        }
        ++cal["final"][k];
    }
    return cal;
}

void merge_into(Calibration& into, const Calibration& from)
{
    for (const auto& [shape, hist] : from)
        for (const auto& [k, count] : hist)
            into[shape][k] += count;
}

std::string_view to_string(SimFailure::Clause c)
{
    switch (c) {
    case SimFailure::Clause::Relation: return "Relation";
    case SimFailure::Clause::Measure: return "Measure";
    case SimFailure::Clause::Diagram: return "Diagram";
    case SimFailure::Clause::Final: return "Final";
    }
    return "?";
}

void SimReport::merge(const SimReport& other)
{
    programs_checked += other.programs_checked;
    runs_checked += other.runs_checked;
    steps_checked += other.steps_checked;
    runs_incomplete += other.runs_incomplete;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    merge_into(calibration, other.calibration);
}

//===----------------------------------------------------------------------===//
// General simulation
//===----------------------------------------------------------------------===//

SimReport check_general_simulation(const Program& p, const std::vector<Store>& stores, const SimOptions& opts)
{
    SimContext ctx(p);
    Program target = opts.mutate ? flatten_program_off_by_one(ctx.source()) : flatten_program(ctx.source());
    SimReport report;
    report.programs_checked = 1;

    for (std::size_t run = 0; run < stores.size(); ++run) {
        ++report.runs_checked;
        auto fail = [&](std::size_t step, SimFailure::Clause clause, std::string detail) {
            report.failures.push_back({opts.label, run, step, clause, std::move(detail)});
        };
        Config A{ctx.source().body, stores[run]};
        auto alpha = after_prologue(target, stores[run]);
        if (!alpha || !config_rel(ctx, A, *alpha)) {
            fail(0, SimFailure::Clause::Relation, "initial configurations are not related");
            continue;
        }

        bool broken = false;
        std::size_t n = 0;
        for (; n < opts.max_steps && !A.is_final(); ++n) {
            int k = num_steps(ctx, A, pc_of(ctx, *alpha), opts.table);
            auto B = source_step(A);
            if (!B)
                break;
            Config beta = *alpha;
            if (!advance(beta, k) || !config_rel(ctx, *B, beta)) {
                fail(n + 1, SimFailure::Clause::Relation,
                     redex_shape(A) + " step not matched by " + std::to_string(k) + " target steps");
                broken = true;
                break;
            }
            if (k == 0 && measure(*B) >= measure(A))
                fail(n + 1, SimFailure::Clause::Measure,
                     "measure " + std::to_string(measure(A)) + " -> " + std::to_string(measure(*B)));
            ++report.steps_checked;
            A = std::move(*B);
            alpha = std::move(beta);
        }
        if (broken)
            continue;
        if (!A.is_final()) {
            ++report.runs_incomplete;
            continue;
        }
        Config omega = *alpha;
        int k = drain_steps(ctx, pc_of(ctx, omega), opts.table);
        if (!advance(omega, k) || !is_skip(omega.cmd) || !config_rel(ctx, A, omega))
            fail(n, SimFailure::Clause::Final, "target not final and related after " + std::to_string(k) + " steps");
    }
    return report;
}

//===----------------------------------------------------------------------===//
// CT diagrams
//===----------------------------------------------------------------------===//

bool equiv(const Config& a, const Config& b) { return same(a.cmd, b.cmd); }

SimReport check_ct_simulation(const Program& p, const Policy& pol, const PairMode& mode, const SimOptions& opts)
{
    SimContext ctx(p);
    Program target = opts.mutate ? flatten_program_off_by_one(ctx.source()) : flatten_program(ctx.source());
    SimReport report;
    report.programs_checked = 1;
    auto pairs = enumerate_pairs(pol, mode);

    for (std::size_t run = 0; run < pairs.size(); ++run) {
        ++report.runs_checked;
        auto fail = [&](std::size_t step, SimFailure::Clause clause, std::string detail) {
            report.failures.push_back({opts.label, run, step, clause, std::move(detail)});
        };
        const auto& [sa, sb] = pairs[run];
        Config A{ctx.source().body, sa};
        Config A2{ctx.source().body, sb};
        Leakage pa, pb;
        auto alpha = after_prologue(target, sa, &pa);
        auto alpha2 = after_prologue(target, sb, &pb);
        if (!alpha || !alpha2 || pa != pb || !equiv(*alpha, *alpha2) || !equiv(A, A2)) {
            fail(0, SimFailure::Clause::Diagram, "initial configurations are not equivalent");
            continue;
        }

        bool stop = false;
        std::size_t n = 0;
        for (; n < opts.max_steps && !A.is_final() && !A2.is_final(); ++n) {
            Leakage ta, tb;
            auto B = source_step(A, &ta);
            auto B2 = source_step(A2, &tb);
            if (!B || !B2 || ta != tb) {
                // Either a trap or different source leakage: nothing to check.
                ++report.runs_incomplete;
                stop = true;
                break;
            }
            int k = num_steps(ctx, A, pc_of(ctx, *alpha), opts.table);
            int k2 = num_steps(ctx, A2, pc_of(ctx, *alpha2), opts.table);
            if (k != k2) {
                fail(n + 1, SimFailure::Clause::Diagram, "step counts differ: " + std::to_string(k) + " vs " +
                                                             std::to_string(k2));
                stop = true;
                break;
            }
            Config beta = *alpha;
            Config beta2 = *alpha2;
            Leakage la, lb;
            bool ok = advance(beta, k, &la) && advance(beta2, k2, &lb);
            if (!ok || !config_rel(ctx, *B, beta) || !config_rel(ctx, *B2, beta2)) {
                fail(n + 1, SimFailure::Clause::Relation, "burst does not reach related configurations");
                stop = true;
                break;
            }
            if (la != lb)
                fail(n + 1, SimFailure::Clause::Diagram, "target bursts leak differently");
            if (!equiv(*B, *B2))
                fail(n + 1, SimFailure::Clause::Diagram, "source successors are not equivalent");
            if (!equiv(beta, beta2))
                fail(n + 1, SimFailure::Clause::Diagram, "target successors are not equivalent");
            if (B->is_final() != B2->is_final())
                fail(n + 1, SimFailure::Clause::Diagram, "finality differs between equivalent configurations");
            ++report.steps_checked;
            A = std::move(*B);
            A2 = std::move(*B2);
            alpha = std::move(beta);
            alpha2 = std::move(beta2);
        }
        if (stop)
            continue;
        if (!A.is_final() || !A2.is_final()) {
            ++report.runs_incomplete;
            continue;
        }
        Leakage da, db;
        int k = drain_steps(ctx, pc_of(ctx, *alpha), opts.table);
        int k2 = drain_steps(ctx, pc_of(ctx, *alpha2), opts.table);
        bool ok = advance(*alpha, k, &da) && advance(*alpha2, k2, &db);
        if (!ok || !is_skip(alpha->cmd) || !is_skip(alpha2->cmd))
            fail(n, SimFailure::Clause::Final, "targets do not both finish");
        else if (da != db)
            fail(n, SimFailure::Clause::Final, "final target steps leak differently");
    }
    return report;
}

} // namespace flatline
