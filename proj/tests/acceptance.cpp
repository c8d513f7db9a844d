// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "helpers.hpp"

#include "flatline/ctcheck.hpp"
#include "flatline/flatten.hpp"
#include "flatline/hoist.hpp"
#include "flatline/proggen.hpp"
#include "flatline/semantics.hpp"
#include "flatline/simcheck.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace flatline;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Program generated(std::uint64_t seed, int depth = 5)
{
    GenConfig g;
    g.seed = seed;
    g.max_depth = depth;
    g.weights = {1, 2, 4, 2, 2};
    return assign_colors(gen_program(g));
}

std::vector<Store> stores_for(const Program& p, std::uint64_t seed, int n)
{
    std::vector<Store> out;
    GenConfig g;
    auto vars = upward_exposed(*p.body);
    for (int k = 0; k < n; ++k) {
        g.seed = seed * 1000 + static_cast<std::uint64_t>(k);
        out.push_back(gen_store(g, vars));
    }
    return out;
}

Store without(Store s, const std::string& name)
{
    s.erase(name);
    return s;
}

Outcome pin_triple()
{
    auto t0 = Clock::now();
    auto nonct = testing::corpus("pin_nonct.imp");
    auto ct = testing::corpus("pin_ct.imp");
    auto v1 = check_oni(nonct, policy_for(nonct, {0, 3}), PairMode::exhaustive());
    auto pol = policy_for(ct, {0, 3});
    auto v2 = check_oni(ct, pol, PairMode::exhaustive());
    auto v3 = check_oni(flatten_program(ct), pol, PairMode::exhaustive());
    double secs = seconds_since(t0);

    bool leak = v1.witness && v1.witness->kind == Witness::Kind::LeakMismatch;
    std::ostringstream d;
    d << "non-ct " << to_string(v1.kind) << (leak ? " (LeakMismatch)" : "") << ", ct " << to_string(v2.kind)
      << ", flat(ct) " << to_string(v3.kind) << ", " << secs << " s";
    bool pass = v1.kind == Verdict::Kind::Insecure && leak && v2.kind == Verdict::Kind::Secure &&
                v3.kind == Verdict::Kind::Secure && secs < 10.0;
    return {pass, d.str()};
}

Outcome flattening_correctness()
{
    auto t0 = Clock::now();
    std::size_t agree = 0, total = 0, traps = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        auto p = generated(seed, 6);
        auto f = flatten_program(p);
        const auto& pc = decompose(f).pc;
        for (const auto& s : stores_for(p, seed, 10)) {
            ++total;
            auto a = run({p.body, s});
            auto b = run({f.body, s}, {RunOptions{}.max_steps * 10, false});
            if (a.status != b.status)
                continue;
            if (a.status == RunStatus::RuntimeError) {
                ++traps;
                agree += a.error == b.error;
                continue;
            }
            agree += a.status == RunStatus::Terminated && without(b.last.store, pc) == a.last.store;
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << agree << "/" << total << " runs agree (" << traps << " trapping on both sides), " << secs << " s";
    return {agree == total && secs < 60.0, d.str()};
}

Outcome ct_preservation()
{
    const char* corpus[] = {"pin_ct.imp",     "ct_swap.imp",     "ct_select.imp",        "ct_sum_loop.imp",
                            "ct_public_branch.imp", "ct_public_loop.imp", "ct_mask.imp", "ct_poly.imp",
                            "ct_nested.imp",  "ct_compare.imp",  "ct_minmax.imp",        "ct_accumulate.imp",
                            "ct_skip_mix.imp"};
    std::size_t hand = 0, hand_ok = 0, gen_secure = 0, gen_ok = 0;
    std::string bad;
    auto check = [&](const Program& p, const std::string& name, std::size_t& count, std::size_t& ok, bool must) {
        auto pol = policy_for(p, {-2, 2});
        auto v = check_oni(p, pol, PairMode::exhaustive());
        if (v.kind != Verdict::Kind::Secure) {
            if (must)
                bad += " " + name + "(source " + std::string(to_string(v.kind)) + ")";
            return;
        }
        ++count;
        auto f = check_oni(flatten_program(p), pol, PairMode::exhaustive());
        if (f.kind == Verdict::Kind::Secure)
            ++ok;
        else
            bad += " " + name;
    };
    for (const char* name : corpus) {
        ++hand;
        check(testing::corpus(name), name, hand_ok, hand_ok, true);
    }
    // hand_ok was bumped once for Secure source and once for Secure target.
    std::size_t hand_pass = hand_ok / 2;
    for (std::uint64_t seed = 0; seed < 300; ++seed)
        check(generated(seed), "gen#" + std::to_string(seed), gen_secure, gen_ok, false);

    std::ostringstream d;
    d << "hand-written " << hand_pass << "/" << hand << ", generated secure " << gen_ok << "/" << gen_secure;
    if (!bad.empty())
        d << ", failing:" << bad;
    return {bad.empty() && hand >= 10 && hand_pass == hand && gen_ok == gen_secure && gen_secure > 0, d.str()};
}

Outcome lab_invariants()
{
    std::size_t ok = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto p = generated(seed, 6);
        auto ls = lab("pc", p.body, 1, 0);
        bool good = static_cast<Value>(ls.size()) == size(*p.body);
        for (std::size_t i = 0; good && i < ls.size(); ++i)
            good = ls[i].guard == static_cast<Value>(i + 1);
        ok += good && terminal_case_check(p);
    }
    return {ok == 1000, std::to_string(ok) + "/1000 programs"};
}

Outcome simulation_diagrams()
{
    SimReport total;
    Calibration cal;
    std::size_t programs = 0;
    std::uint64_t seed = 0;
    while (programs < 200) {
        auto p = generated(seed, 6);
        auto stores = stores_for(p, seed, 3);
        ++seed;
        bool short_enough = true;
        for (const auto& s : stores) {
            auto t = run({p.body, s}, {1000, false});
            short_enough = short_enough && t.status == RunStatus::Terminated;
        }
        if (!short_enough)
            continue;
        ++programs;
        SimOptions opts;
        opts.label = "gen#" + std::to_string(seed - 1);
        total.merge(check_general_simulation(p, stores, opts));
        for (const auto& s : stores)
            merge_into(cal, calibrate_num(p, s));
        if (programs % 4 == 0) {
            auto pol = policy_for(p, {-1, 1});
            total.merge(check_ct_simulation(p, pol, PairMode::random(seed, 10), opts));
        }
    }

    auto nominal = NumTable::nominal();
    std::ostringstream d;
    d << programs << " programs, " << total.steps_checked << " steps, " << total.failures.size() << " failures";
    d << "; calibration (observed | nominal):";
    for (const auto& [shape, hist] : cal) {
        d << " " << shape << "=";
        bool first = true;
        for (const auto& [k, n] : hist) {
            d << (first ? "" : ",") << k;
            first = false;
        }
        if (shape == "assign")
            d << "|" << nominal.n_assign_like;
        else if (shape == "if")
            d << "|" << nominal.n_if;
        else if (shape == "while" || shape == "skip-seq")
            d << "|" << nominal.n_skipseq_while;
    }
    if (!total.failures.empty())
        d << "; first: " << total.failures.front().program << " " << total.failures.front().detail;
    return {total.failures.empty(), d.str()};
}

std::size_t non_write(const Leakage& l)
{
    std::size_t n = 0;
    for (const auto& a : l)
        n += a.kind != LeakAtom::Kind::Write;
    return n;
}

Outcome hoisting_counterexample()
{
    auto p = testing::corpus("hoist_example.imp");
    auto pol = policy_for(p, {-2, 5});
    pol.observer = Observer::Length;
    auto before = check_oni(p, pol, PairMode::exhaustive());
    auto after = check_oni(hoist_program(p), pol, PairMode::exhaustive());

    std::ostringstream d;
    d << "before " << to_string(before.kind) << ", after " << to_string(after.kind);
    bool lengths = false;
    if (after.witness) {
        auto a = non_write(after.witness->leak_a), b = non_write(after.witness->leak_b);
        d << ", witness expression leakage " << a << " vs " << b << " at step " << after.witness->step;
        lengths = std::min(a, b) == 1 && std::max(a, b) == 5;
    }
    return {before.kind == Verdict::Kind::Secure && after.kind == Verdict::Kind::Insecure && lengths, d.str()};
}

Outcome unit_values()
{
    using testing::cmd;
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const char* what) {
        if (!ok)
            failed.push_back(what);
    };
    auto aex = [](const std::string& t) { return as<Assign>(cmd("x := " + t))->value; };
    auto bex = [](const std::string& t) { return as<If>(cmd("if " + t + " then skip else skip end"))->cond; };
    auto cases_equal = [](const CaseList& ls, std::vector<std::pair<Value, std::string>> want) {
        if (ls.size() != want.size())
            return false;
        for (std::size_t i = 0; i < ls.size(); ++i)
            if (ls[i].guard != want[i].first || !same(ls[i].body, cmd(want[i].second)))
                return false;
        return true;
    };
    auto leak_text = [](const Leakage& l) { return to_string(l); };
    using N = NaryAExpr;
    using NB = NaryBExpr;

    expect(size(*skip()) == 1, "size skip");
    expect(size(*cmd("if b <= 0 then skip else x := 1 end")) == 3, "size if");
    expect(size(*cmd("while b <= 0 do skip end")) == 3, "size while");

    expect(cases_equal(lab("pc", skip(), 1, 0), {{1, "skip; pc := 0"}}), "lab skip");
    expect(cases_equal(lab("pc", cmd("x := 1; skip"), 1, 0), {{1, "x := 1; pc := 2"}, {2, "skip; pc := 0"}}), "lab seq");
    expect(cases_equal(lab("pc", cmd("while b <= 0 do skip end"), 1, 0),
                       {{1, "if b <= 0 then pc := 2 else pc := 3 end"}, {2, "skip; pc := 1"}, {3, "skip; pc := 0"}}),
           "lab while");

    expect(leak_text(leak_expr(*aex("5"), {})) == "eps", "leak literal");
    expect(leak_text(leak_expr(*aex("x + 1"), {{"x", 0}})) == "eps eps op:+", "leak sum");
    expect(leak_text(leak_expr(*bex("not (x <= y)"), {{"x", 0}, {"y", 0}})) == "eps eps", "leak not");

    expect(aval(ArithOp::Add, {N::literal(2), N::literal(3)}) == AvalResult{5, {}}, "aval constants");
    expect(aval(ArithOp::Add, {N::variable("x"), N::variable("y")}) == AvalResult{0, {N::variable("x"), N::variable("y")}},
           "aval neutral");
    expect(aval(ArithOp::Mul, {N::literal(0), N::variable("x"), N::variable("y")}) ==
               AvalResult{0, {N::variable("x"), N::variable("y")}},
           "aval zero");

    auto xy = NB::compare(CmpOp::Leq, N::variable("x"), N::variable("y"));
    expect(bval(NB::disj({NB::constant(true), xy})) == NB::constant(true), "bval or true");
    expect(bval(NB::disj({NB::constant(false), xy})) == xy, "bval or false");
    expect(bval(NB::compare(CmpOp::Leq, N::literal(3), N::literal(4))) == NB::constant(true), "bval leq");

    std::string detail = "all hold";
    if (!failed.empty()) {
        detail = "failed:";
        for (const auto& f : failed)
            detail += " [" + f + "]";
    }
    return {failed.empty(), detail};
}

Outcome hoist_preservation()
{
    std::size_t programs = 0, runs = 0, agree = 0;
    for (std::uint64_t seed = 0; programs < 500; ++seed) {
        auto p = generated(seed, 6);
        auto stores = stores_for(p, seed + 7, 5);
        std::vector<Trace> src;
        bool trap_free = true;
        for (const auto& s : stores) {
            src.push_back(run({p.body, s}));
            trap_free = trap_free && src.back().status == RunStatus::Terminated;
        }
        if (!trap_free)
            continue;
        ++programs;
        auto h = hoist_program(p);
        for (std::size_t k = 0; k < stores.size(); ++k) {
            ++runs;
            auto t = run({h.body, stores[k]});
            agree += t.status == RunStatus::Terminated && t.last.store == src[k].last.store;
        }
    }
    return {agree == runs, std::to_string(agree) + "/" + std::to_string(runs) + " runs agree over " +
                               std::to_string(programs) + " programs"};
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {1, "pin triple", pin_triple},
        {2, "flattening correctness", flattening_correctness},
        {3, "ct preservation", ct_preservation},
        {4, "lab invariants", lab_invariants},
        {5, "simulation diagrams", simulation_diagrams},
        {6, "hoisting counterexample", hoisting_counterexample},
        {7, "unit values", unit_values},
        {8, "hoist preservation", hoist_preservation},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
