#include "helpers.hpp"

#include "flatline/proggen.hpp"
#include "flatline/semantics.hpp"

#include <doctest.h>

using namespace flatline;

TEST_CASE("depth one gives a leaf")
{
    GenConfig g;
    g.max_depth = 1;
    for (std::uint64_t s = 0; s < 50; ++s) {
        g.seed = s;
        auto p = gen_program(g);
        CHECK((is_skip(p.body) || as<Assign>(p.body) != nullptr));
    }
}

TEST_CASE("deterministic per seed")
{
    GenConfig g;
    g.seed = 42;
    g.max_depth = 5;
    CHECK(same(gen_program(g).body, gen_program(g).body));
    CHECK(gen_store(g, {"a", "b"}) == gen_store(g, {"a", "b"}));
}

TEST_CASE("stores")
{
    GenConfig g;
    CHECK(gen_store(g, {}).empty());
    g.value_domain = {0, 0};
    CHECK(gen_store(g, {"a", "b"}) == Store{{"a", 0}, {"b", 0}});
}

TEST_CASE("bounded-counter programs terminate without traps")
{
    GenConfig g;
    g.max_depth = 5;
    for (std::uint64_t s = 0; s < 100; ++s) {
        g.seed = s;
        auto p = gen_program(g);
        CHECK_FALSE(contains_switch(*p.body));
        auto vars = upward_exposed(*p.body);
        auto t = run({p.body, gen_store(g, vars)});
        CHECK(t.status == RunStatus::Terminated);
    }
}

TEST_CASE("declared secrets")
{
    GenConfig g;
    g.secrets = 2;
    g.max_vars = 3;
    auto p = gen_program(g);
    CHECK(p.secrets == std::set<std::string>{"v0", "v1"});
    CHECK(p.publics == std::set<std::string>{"v2"});
}
