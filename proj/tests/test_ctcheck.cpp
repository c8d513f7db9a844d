#include "helpers.hpp"

#include "flatline/ctcheck.hpp"
#include "flatline/flatten.hpp"

#include <doctest.h>

using namespace flatline;

TEST_CASE("phi compares publics only")
{
    Policy pol;
    pol.publics = {"p"};
    pol.secrets = {"s"};
    CHECK(phi({{"p", 1}, {"s", 0}}, {{"p", 1}, {"s", 9}}, pol));
    CHECK_FALSE(phi({{"p", 1}}, {{"p", 2}}, pol));
    CHECK(phi({{"p", 4}, {"s", 4}}, {{"p", 4}, {"s", 4}}, pol));
    CHECK_THROWS_AS(phi({}, {{"p", 1}}, pol), EvalError);
}

TEST_CASE("policy from declarations")
{
    auto pol = policy_for(testing::prog("secret s; public p; t := s + p + q"), Interval{0, 1});
    CHECK(pol.secrets == std::set<std::string>{"s"});
    CHECK(pol.publics == std::set<std::string>{"p", "q"});
    CHECK(pol.secret_domain == Interval{0, 1});
}

TEST_CASE("exhaustive pairs")
{
    Policy pol;
    pol.secrets = {"s"};
    pol.secret_domain = {0, 1};
    auto pairs = enumerate_pairs(pol, PairMode::exhaustive());
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == Store{{"s", 0}});
    CHECK(pairs[0].second == Store{{"s", 1}});

    pol.publics = {"p"};
    pol.public_domain = {0, 2};
    pol.secret_domain = {0, 2};
    auto more = enumerate_pairs(pol, PairMode::exhaustive());
    CHECK(more.size() == 3 * 3);
    for (const auto& [a, b] : more) {
        CHECK(phi(a, b, pol));
        CHECK(a != b);
    }
}

TEST_CASE("no secrets, no pairs")
{
    Policy pol;
    pol.publics = {"p"};
    CHECK(enumerate_pairs(pol, PairMode::exhaustive()).empty());
    CHECK(enumerate_pairs(pol, PairMode::random(1, 10)).empty());
}

TEST_CASE("random pairs are deterministic per seed")
{
    Policy pol;
    pol.secrets = {"a", "b"};
    pol.publics = {"p"};
    auto x = enumerate_pairs(pol, PairMode::random(7, 50));
    auto y = enumerate_pairs(pol, PairMode::random(7, 50));
    REQUIRE(x.size() == 50);
    CHECK(x == y);
    for (const auto& [a, b] : x) {
        CHECK(phi(a, b, pol));
        CHECK(a != b);
    }
}

TEST_CASE("exhaustive bound")
{
    Policy pol;
    for (int i = 0; i < 12; ++i)
        pol.secrets.insert("s" + std::to_string(i));
    pol.secret_domain = {-2, 2};
    CHECK_THROWS_AS(enumerate_pairs(pol, PairMode::exhaustive()), BoundExceeded);
}

TEST_CASE("pin programs")
{
    auto nonct = testing::corpus("pin_nonct.imp");
    auto v = check_oni(nonct, policy_for(nonct, {0, 3}), PairMode::exhaustive());
    CHECK(v.kind == Verdict::Kind::Insecure);
    REQUIRE(v.witness);
    CHECK(v.witness->kind == Witness::Kind::LeakMismatch);
    CHECK(v.witness->leak_a != v.witness->leak_b);

    auto ct = testing::corpus("pin_ct.imp");
    auto pol = policy_for(ct, {0, 3});
    CHECK(check_oni(ct, pol, PairMode::exhaustive()).kind == Verdict::Kind::Secure);
    CHECK(check_oni(flatten_program(ct), pol, PairMode::exhaustive()).kind == Verdict::Kind::Secure);
}

TEST_CASE("secret-dependent loop length is a finality or leak mismatch")
{
    auto p = testing::prog("secret s; i := 0; while i <= s do i := i + 1 end");
    auto v = check_oni(p, policy_for(p, {0, 2}), PairMode::exhaustive());
    CHECK(v.kind == Verdict::Kind::Insecure);
}

TEST_CASE("divergence is inconclusive")
{
    auto p = testing::prog("secret s; while true do s := s end");
    auto v = check_oni(p, policy_for(p, {0, 1}), PairMode::exhaustive(), 50);
    CHECK(v.kind == Verdict::Kind::Inconclusive);
    CHECK(v.reason == RunStatus::StepLimit);
}

TEST_CASE("length observer ignores atom contents")
{
    auto p = testing::prog("secret s; if s <= 0 then x := 1 else x := 2 end");
    auto pol = policy_for(p, {0, 1});
    CHECK(check_oni(p, pol, PairMode::exhaustive()).kind == Verdict::Kind::Insecure);
    pol.observer = Observer::Length;
    CHECK(check_oni(p, pol, PairMode::exhaustive()).kind == Verdict::Kind::Secure);
}
