#include "flatline/proggen.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace flatline {

namespace {

class Generator
{
public:
    explicit Generator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed)
    {
        if (cfg.max_depth < 1)
            throw Error("max_depth must be at least 1");
        if (cfg.value_domain.count() == 0)
            throw Error("empty value domain");
        for (int i = 0; i < std::max(1, cfg.max_vars); ++i)
            vars_.push_back("v" + std::to_string(i));
    }

    Program program()
    {
        Program p;
        p.body = cmd(cfg_.max_depth);
        for (int i = 0; i < static_cast<int>(vars_.size()); ++i)
            (i < cfg_.secrets ? p.secrets : p.publics).insert(vars_[i]);
        return p;
    }

private:
    const GenConfig& cfg_;
    std::mt19937_64 rng_;
    std::vector<std::string> vars_;
    int counters_ = 0;

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    Value constant() { return cfg_.value_domain.lo + static_cast<Value>(below(cfg_.value_domain.count())); }

    Value nonzero_constant()
    {
        std::vector<Value> choices;
        for (Value v = cfg_.value_domain.lo; v <= cfg_.value_domain.hi && choices.size() < 64; ++v)
            if (v != 0)
                choices.push_back(v);
        if (choices.empty())
            return 1;
        return choices[below(choices.size())];
    }

    const std::string& variable() { return vars_[below(vars_.size())]; }

    AExprPtr aexpr(int depth)
    {
        if (depth <= 0 || below(3) == 0)
            return below(2) ? var(variable()) : lit(constant());
        switch (below(5)) {
        case 0: return arith(ArithOp::Add, aexpr(depth - 1), aexpr(depth - 1));
        case 1: return arith(ArithOp::Sub, aexpr(depth - 1), aexpr(depth - 1));
        case 2: return arith(ArithOp::Mul, aexpr(depth - 1), aexpr(depth - 1));
        case 3: return arith(ArithOp::Div, aexpr(depth - 1), lit(nonzero_constant()));
        default: return arith(ArithOp::Mod, aexpr(depth - 1), lit(nonzero_constant()));
        }
    }

    BExprPtr bexpr(int depth)
    {
        if (depth <= 0)
            return below(2) ? leq(aexpr(0), aexpr(0)) : eq(aexpr(0), aexpr(0));
        switch (below(8)) {
        case 0: return lnot(bexpr(depth - 1));
        case 1: return lor(bexpr(depth - 1), bexpr(depth - 1));
        case 2: return boolean(below(2) == 0);
        case 3:
        case 4: return eq(aexpr(depth - 1), aexpr(depth - 1));
        default: return leq(aexpr(depth - 1), aexpr(depth - 1));
        }
    }

    CmdPtr leaf()
    {
        const auto& w = cfg_.weights;
        int total = w.skip + w.assign;
        if (total <= 0 || static_cast<int>(below(static_cast<std::uint64_t>(total))) < w.skip)
            return skip();
        return assign(variable(), aexpr(cfg_.max_expr_depth));
    }

    CmdPtr cmd(int depth)
    {
        if (depth <= 1)
            return leaf();
        const auto& w = cfg_.weights;
        int weights[] = {w.skip, w.assign, w.seq, w.if_, w.while_};
        int total = 0;
        for (int x : weights)
            total += std::max(0, x);
        if (total == 0)
            return skip();
        int pick = static_cast<int>(below(static_cast<std::uint64_t>(total)));
        int which = 0;
        while (pick >= std::max(0, weights[which]))
            pick -= std::max(0, weights[which++]);
        switch (which) {
        case 0: return skip();
        case 1: return assign(variable(), aexpr(cfg_.max_expr_depth));
        case 2: {
            auto first = cmd(depth - 1);
            return seq(first, cmd(depth - 1));
        }
        case 3: {
            auto b = bexpr(cfg_.max_expr_depth);
            auto t = cmd(depth - 1);
            return if_(b, t, cmd(depth - 1));
        }
        default: return loop(depth);
        }
    }

    CmdPtr loop(int depth)
    {
        if (cfg_.loop_mode == LoopMode::Free) {
            auto b = bexpr(cfg_.max_expr_depth);
            return while_(b, cmd(depth - 1));
        }
        std::string i = "i" + std::to_string(counters_++);
        Value bound = static_cast<Value>(below(static_cast<std::uint64_t>(std::max(0, cfg_.max_loop_bound)) + 1));
        auto body = cmd(depth - 1);
        auto bump = assign(i, arith(ArithOp::Add, var(i), lit(1)));
        return seq(assign(i, lit(0)), while_(leq(var(i), lit(bound)), seq(body, bump)));
    }
};

} // namespace

Program gen_program(const GenConfig& cfg) { return Generator(cfg).program(); }

Store gen_store(const GenConfig& cfg, const std::set<std::string>& vars)
{
    if (cfg.value_domain.count() == 0)
        throw Error("empty value domain");
    std::mt19937_64 rng(cfg.seed);
    Store s;
    for (const auto& v : vars)
        s[v] = cfg.value_domain.lo + static_cast<Value>(rng() % cfg.value_domain.count());
    return s;
}

} // namespace flatline
