#include "helpers.hpp"

#include <doctest.h>

using namespace flatline;
using testing::cmd;

TEST_CASE("size")
{
    CHECK(size(*skip()) == 1);
    CHECK(size(*assign("x", lit(1))) == 1);
    CHECK(size(*cmd("if b <= 0 then skip else x := 1 end")) == 3);
    CHECK(size(*cmd("while b <= 0 do skip end")) == 3);
    CHECK(size(*cmd("x := 1; y := 2; z := 3")) == 3);
    CHECK(size(*cmd("while b <= 0 do if b == 1 then skip else skip end end")) == 5);
}

TEST_CASE("colors")
{
    auto p = testing::prog("skip");
    CHECK(p.body->color.white());

    auto w = testing::prog("while b <= 0 do x := 1 end").body;
    CHECK(w->color == Color::of_loop(1));
    CHECK(as<While>(w)->body->color == Color::of_loop(1));

    auto s = testing::prog("x := 1; while b <= 0 do skip end").body;
    const auto* sq = as<Seq>(s);
    REQUIRE(sq);
    CHECK(sq->first->color.white());
    CHECK(sq->second->color == Color::of_loop(1));
    CHECK(as<While>(sq->second)->body->color == Color::of_loop(1));
}

TEST_CASE("distinct loops get distinct colors")
{
    auto s = testing::prog("while a <= 0 do skip end; while b <= 0 do skip end").body;
    const auto* sq = as<Seq>(s);
    REQUIRE(sq);
    CHECK(sq->first->color != sq->second->color);
    CHECK_FALSE(sq->first->color.white());
}

TEST_CASE("pretty")
{
    CHECK(pretty(*skip()) == "skip");
    CHECK(pretty(*assign("x", arith(ArithOp::Add, lit(1), lit(2)))) == "x := 1 + 2");
}

TEST_CASE("structural equality ignores colors")
{
    CHECK(same(skip(Color::of_loop(3)), skip()));
    CHECK_FALSE(same(skip(), assign("x", lit(1))));
}

TEST_CASE("upward exposed variables")
{
    auto c = cmd("t := a; a := b; b := t");
    CHECK(upward_exposed(*c) == std::set<std::string>{"a", "b"});
    CHECK(variables(*c) == std::set<std::string>{"a", "b", "t"});
}

TEST_CASE("count whiles and switch detection")
{
    CHECK(count_whiles(*cmd("while a <= 0 do while b <= 0 do skip end end")) == 2);
    CHECK_FALSE(contains_switch(*cmd("skip")));
    CHECK(contains_switch(*cmd("switch pc : case 1: skip end")));
}
