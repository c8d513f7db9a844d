#include "helpers.hpp"

#include "flatline/flatten.hpp"
#include "flatline/proggen.hpp"
#include "flatline/simcheck.hpp"

#include <doctest.h>

using namespace flatline;
using testing::cmd;
using testing::prog;

TEST_CASE("step-count tables")
{
    CHECK(NumTable::nominal() == NumTable{0, 8, 9, 2, 0});
    CHECK(NumTable::artifact().n_assign_like == 7);
    CHECK(NumTable::artifact().n_if == 6);
}

TEST_CASE("syntactic num")
{
    auto tbl = NumTable::nominal();
    CHECK(num_steps({cmd("while b <= 0 do skip end"), {}}, tbl) == 0);
    CHECK(num_steps({cmd("x := 1"), {}}, tbl) == 8);
    CHECK(num_steps({cmd("x := 1; y := 2"), {}}, tbl) == 8);
    CHECK(num_steps({cmd("skip; y := 2"), {}}, tbl) == 0);
    CHECK(num_steps({cmd("if b <= 0 then skip else skip end"), {}}, tbl) == 9);
}

TEST_CASE("measure")
{
    CHECK(measure({cmd("while b <= 0 do skip end"), {}}) == 3);
    CHECK(measure({cmd("skip; x := 1"), {}}) == 1);
    CHECK(measure({cmd("x := 1"), {}}) == 0);
}

TEST_CASE("redex shapes")
{
    CHECK(redex_shape({cmd("x := 1; y := 2"), {}}) == "assign");
    CHECK(redex_shape({cmd("skip; y := 2"), {}}) == "skip-seq");
    CHECK(redex_shape({cmd("while b <= 0 do skip end"), {}}) == "while");
    CHECK(redex_shape({skip(), {}}) == "final");
}

TEST_CASE("auxiliary relation")
{
    SimContext w(prog("while b <= 0 do skip end"));
    CHECK(cmd_rel(w, RelKind::diamond(1), w.source().body, 1, 1));
    CHECK(cmd_rel(w, RelKind::bowtie(), w.source().body, 1, 0));
    CHECK_FALSE(cmd_rel(w, RelKind::bowtie(), w.source().body, 2, 0));
    CHECK_THROWS_AS(cmd_rel(w, RelKind::bowtie(), w.source().body, 9, 0), IndexError);

    SimContext a(prog("x := 1"));
    CHECK(cmd_rel(a, RelKind::bowtie(), a.source().body, 1, 0));
    CHECK_FALSE(cmd_rel(a, RelKind::bowtie(), cmd("x := 2"), 1, 0));

    SimContext s(prog("skip"));
    CHECK(cmd_rel(s, RelKind::bowtie(), skip(), 1, 1));
    CHECK(cmd_rel(s, RelKind::bowtie(), skip(), 1, 0));
}

TEST_CASE("configuration relation")
{
    auto p = prog("x := 1; y := x");
    SimContext ctx(p);
    Store s{{"x", 5}};
    auto with_pc = [&](Value pc) {
        Store t = s;
        t[ctx.pc()] = pc;
        return t;
    };
    CHECK(config_rel(ctx, {skip(), s}, {skip(), with_pc(0)}));
    CHECK(config_rel(ctx, {p.body, s}, {ctx.loop(), with_pc(1)}));
    CHECK_FALSE(config_rel(ctx, {p.body, s}, {ctx.loop(), with_pc(2)}));
    Store other = with_pc(1);
    other["x"] = 6;
    CHECK_FALSE(config_rel(ctx, {p.body, s}, {ctx.loop(), other}));
}

TEST_CASE("equivalence compares commands only")
{
    Config a{cmd("x := 1"), {{"x", 0}}};
    CHECK(equiv(a, a));
    CHECK(equiv(a, {cmd("x := 1"), {{"x", 7}}}));
    CHECK_FALSE(equiv({skip(), {}}, a));
}

TEST_CASE("general simulation on small programs")
{
    for (const char* text : {"skip", "x := 1; y := 2", "while x <= 2 do x := x + 1 end",
                             "if x <= 0 then skip else x := 0 end; skip; y := x"}) {
        auto r = check_general_simulation(prog(text), {{{"x", -1}}, {{"x", 1}}});
        CHECK_MESSAGE(r.failures.empty(), text);
        CHECK(r.runs_checked == 2);
    }
}

TEST_CASE("nominal table is reported, not silently accepted")
{
    SimOptions opts;
    opts.table = NumTable::nominal();
    auto r = check_general_simulation(prog("x := 1"), {{}}, opts);
    CHECK_FALSE(r.failures.empty());
}

TEST_CASE("mutated flattening is caught")
{
    SimOptions opts;
    opts.mutate = true;
    auto r = check_general_simulation(prog("x := 1; y := 2"), {{}}, opts);
    REQUIRE_FALSE(r.failures.empty());
    CHECK(r.failures.front().clause == SimFailure::Clause::Relation);
}

TEST_CASE("calibration")
{
    auto cal = calibrate_num(prog("x := 0; while x <= 1 do x := x + 1 end; if x == 2 then skip else skip end"), {});
    CHECK(cal.at("assign").count(7) == 1);
    CHECK(cal.at("assign").size() == 1);
    CHECK(cal.at("while").begin()->first == 0);
    CHECK(cal.at("if").count(6) == 1);
}

TEST_CASE("ct diagrams on the pin program")
{
    auto p = testing::corpus("pin_ct.imp");
    auto r = check_ct_simulation(p, policy_for(p, {0, 3}), PairMode::exhaustive());
    CHECK(r.failures.empty());
    CHECK(r.runs_checked == 120);
}

TEST_CASE("generated programs simulate")
{
    GenConfig g;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        g.seed = seed;
        auto p = assign_colors(gen_program(g));
        std::vector<Store> stores;
        for (std::uint64_t k = 0; k < 3; ++k) {
            GenConfig sg = g;
            sg.seed = seed * 100 + k;
            stores.push_back(gen_store(sg, upward_exposed(*p.body)));
        }
        auto r = check_general_simulation(p, stores);
        CHECK_MESSAGE(r.failures.empty(), pretty(p));
    }
}
