#include "helpers.hpp"

#include "flatline/semantics.hpp"

#include <doctest.h>

#include <limits>

using namespace flatline;
using testing::cmd;

namespace {

Leakage leaks(std::initializer_list<const char*> atoms)
{
    Leakage l;
    for (const char* a : atoms)
        l.push_back(parse_leak_atom(a));
    return l;
}

AExprPtr aexpr(const std::string& text) { return as<Assign>(cmd("x := " + text))->value; }

BExprPtr bexpr(const std::string& text) { return as<If>(cmd("if " + text + " then skip else skip end"))->cond; }

} // namespace

TEST_CASE("arithmetic evaluation")
{
    CHECK(eval_aexpr(*aexpr("2 + 3"), {}) == 5);
    CHECK(eval_aexpr(*aexpr("(8 * 3) + 4"), {}) == 28);
    CHECK(eval_aexpr(*aexpr("-7 / 2"), {}) == -3);
    CHECK(eval_aexpr(*aexpr("-7 % 2"), {}) == -1);
    CHECK(eval_aexpr(*aexpr("x % -1"), {{"x", std::numeric_limits<Value>::min()}}) == 0);
}

TEST_CASE("runtime errors")
{
    auto kind = [](const std::string& text, const Store& s) {
        try {
            eval_aexpr(*aexpr(text), s);
        } catch (const EvalError& e) {
            return e.error().kind;
        }
        FAIL("no error");
        return RuntimeErrorKind::Overflow;
    };
    CHECK(kind("x / 0", {{"x", 1}}) == RuntimeErrorKind::DivisionByZero);
    CHECK(kind("x % 0", {{"x", 1}}) == RuntimeErrorKind::DivisionByZero);
    CHECK(kind("y", {}) == RuntimeErrorKind::UnboundVariable);
    CHECK(kind("x + 1", {{"x", std::numeric_limits<Value>::max()}}) == RuntimeErrorKind::Overflow);
    CHECK(kind("x / -1", {{"x", std::numeric_limits<Value>::min()}}) == RuntimeErrorKind::Overflow);
}

TEST_CASE("boolean evaluation")
{
    CHECK(eval_bexpr(*bexpr("true or false"), {}));
    CHECK(eval_bexpr(*bexpr("3 <= 3"), {}));
    CHECK_FALSE(eval_bexpr(*bexpr("not (x == 1)"), {{"x", 1}}));
    // Both sides of `or` are evaluated, so an error on the right surfaces.
    CHECK_THROWS_AS(eval_bexpr(*bexpr("true or 1 / z == 0"), {{"z", 0}}), EvalError);
}

TEST_CASE("expression leakage")
{
    CHECK(leak_expr(*aexpr("5"), {}) == leaks({"eps"}));
    CHECK(leak_expr(*aexpr("x + 1"), {{"x", 0}}) == leaks({"eps", "eps", "op:+"}));
    CHECK(leak_expr(*bexpr("not (x <= y)"), {{"x", 0}, {"y", 0}}) == leaks({"eps", "eps"}));
    CHECK(leak_expr(*bexpr("true"), {}) == leaks({"eps"}));
    CHECK(leak_expr(*aexpr("(21 * x) + y"), {{"x", 0}, {"y", 0}}).size() == 5);
}

TEST_CASE("leak atom text round trip")
{
    for (const char* a : {"eps", "op:+", "op:%", "br:1", "br:0", "wr:x"})
        CHECK(to_string(parse_leak_atom(a)) == a);
}

TEST_CASE("assign step")
{
    auto r = step({cmd("x := y + 1"), {{"y", 2}}});
    auto* s = std::get_if<Stepped>(&r);
    REQUIRE(s);
    CHECK(is_skip(s->next.cmd));
    CHECK(s->next.store == Store{{"x", 3}, {"y", 2}});
    CHECK(s->leak == leaks({"eps", "eps", "op:+", "wr:x"}));
    CHECK(s->rule == "assign");
}

TEST_CASE("while unfolds and keeps its color")
{
    auto w = cmd("while b <= 0 do x := 1 end");
    auto r = step({w, {{"b", 0}}});
    auto* s = std::get_if<Stepped>(&r);
    REQUIRE(s);
    CHECK(s->leak == leaks({"eps"}));
    CHECK(s->rule == "while");
    const auto* i = as<If>(s->next.cmd);
    REQUIRE(i);
    CHECK(same(i->cond, as<While>(w)->cond));
    CHECK(is_skip(i->else_branch));
    CHECK(s->next.cmd->color == w->color);
    const auto* body = as<Seq>(i->then_branch);
    REQUIRE(body);
    CHECK(same(body->second, w));
}

TEST_CASE("if leaks the guard and the branch taken")
{
    auto r = step({cmd("if x <= 0 then skip else y := 1 end"), {{"x", 3}}});
    auto* s = std::get_if<Stepped>(&r);
    REQUIRE(s);
    CHECK(s->leak == leaks({"eps", "eps", "br:0"}));
    CHECK(s->rule == "if-false");
    CHECK(same(s->next.cmd, cmd("y := 1")));
}

TEST_CASE("switch steps")
{
    auto sw = as<While>(cmd("while 1 <= pc do switch pc : case 1: skip ; pc := 0 end end"))->body;
    auto hit = step({sw, {{"pc", 1}}});
    REQUIRE(std::holds_alternative<Stepped>(hit));
    CHECK(std::get<Stepped>(hit).rule == "switch");
    CHECK(same(std::get<Stepped>(hit).next.cmd, cmd("skip; pc := 0")));

    auto miss = step({sw, {{"pc", 99}}});
    REQUIRE(std::holds_alternative<Stepped>(miss));
    CHECK(is_skip(std::get<Stepped>(miss).next.cmd));
    CHECK(std::get<Stepped>(miss).leak == leaks({"eps"}));
}

TEST_CASE("skip is stuck; errors are reported")
{
    CHECK(std::holds_alternative<Stuck>(step({skip(), {}})));
    auto r = step({cmd("x := 1 / y"), {{"y", 0}}});
    REQUIRE(std::holds_alternative<RuntimeError>(r));
    CHECK(std::get<RuntimeError>(r).kind == RuntimeErrorKind::DivisionByZero);
}

TEST_CASE("runs")
{
    auto t0 = run({skip(), {}});
    CHECK(t0.steps.empty());
    CHECK(t0.status == RunStatus::Terminated);

    auto t1 = run({cmd("x := 1; x := 2"), {}}, {10, false});
    REQUIRE(t1.steps.size() == 3);
    CHECK(t1.steps[0].rule == "assign");
    CHECK(t1.steps[1].rule == "skip-seq");
    CHECK(t1.steps[2].rule == "assign");
    CHECK(t1.status == RunStatus::Terminated);
    CHECK(t1.last.store == Store{{"x", 2}});

    auto t2 = run({cmd("while true do skip end"), {}}, {5, false});
    CHECK(t2.status == RunStatus::StepLimit);
    CHECK(t2.steps.size() == 5);

    auto t3 = run({cmd("x := 1; y := x / z"), {{"z", 0}}});
    CHECK(t3.status == RunStatus::RuntimeError);
    REQUIRE(t3.error);
    CHECK(t3.error->kind == RuntimeErrorKind::DivisionByZero);
}

TEST_CASE("cumulative leakage is the concatenation of step leakages")
{
    auto t = run({cmd("x := 1"), {}});
    CHECK(to_string(t.cumulative_leakage()) == "eps wr:x");
}
