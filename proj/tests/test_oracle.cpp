#include "helpers.hpp"

#include "apnv/oracle.hpp"

#include <doctest.h>

#include <set>

using namespace apnv;
using namespace th;

namespace {
const HomogeneousEquation& E1() { return example1().equation("E1"); }
const Transition& t() { return example1().net().structure.transition("t"); }
} // namespace

TEST_CASE("ground term enumeration") {
    const auto& sig = example1().signature;
    CHECK(enumerate_ground_terms(sig, 0).size() == 1);
    CHECK(enumerate_ground_terms(sig, 1).size() == 3);
    const auto d2 = enumerate_ground_terms(sig, 2);
    CHECK(d2.size() == 7);
    CHECK(d2.front() == c());
    CHECK(std::set<Term>(d2.begin(), d2.end()).size() == 7);
    for (const auto& x : d2) {
        CHECK(x.is_ground());
        CHECK(x.depth() <= 2);
    }
}

TEST_CASE("brute zeros of E1 up to sum 8") {
    auto r = brute_zeros(E1(), 8);
    REQUIRE(std::holds_alternative<std::vector<std::vector<std::int64_t>>>(r));
    const auto& zs = std::get<std::vector<std::vector<std::int64_t>>>(r);
    std::set<std::vector<std::int64_t>> s(zs.begin(), zs.end());
    CHECK(s.count({0, 0, 0, 0, 0}));
    CHECK(s.count({0, 1, 0, 3, 0}));
    CHECK(s.count({0, 2, 0, 6, 0}));
    CHECK_FALSE(s.count({1, 1, 1, 2, 0}));
    CHECK(std::holds_alternative<Exhausted>(brute_zeros(E1(), 200, 10)));
}

TEST_CASE("brute stability finds a counterexample for (E1, t)") {
    Bounds b;
    b.term_depth = 1;
    b.tokens_per_place = 4;
    auto r = brute_stability(E1(), t(), example1().signature, b);
    REQUIRE(std::holds_alternative<Counterexample>(r));
    const auto& ce = std::get<Counterexample>(r);
    CHECK(satisfies(ce.marking, E1()));
    CHECK_FALSE(satisfies(ce.successor, E1()));
    CHECK(ce.successor == fire(ce.marking, t(), ce.sigma));
    b.candidate_cap = 1;
    CHECK(std::holds_alternative<Exhausted>(brute_stability(E1(), t(), example1().signature, b)));
}

TEST_CASE("step enumeration binds consume variables by matching") {
    const auto& n = example1().net();
    const auto steps = enumerate_steps(n.structure, n.marking("m5"), 2);
    REQUIRE_FALSE(steps.empty());
    bool sigma1 = false;
    for (const auto& s : steps) {
        CHECK(s.successor == fire(n.marking("m5"), n.structure.transition(s.transition), s.sigma));
        sigma1 = sigma1 || s.sigma == Assignment{{"W", c()}, {"Y", c()}, {"Z", g(c())}};
    }
    CHECK(sigma1);
    CHECK(enumerate_steps(n.structure, n.marking("m1"), 2).empty());
}

TEST_CASE("bounded reachability") {
    const auto& n = example1();
    // m4 enables nothing, so the reachable set is just m4
    auto r = bounded_reachability(n.net().with_marking("m4"), n.equation("E2"), Bounds{});
    REQUIRE(std::holds_alternative<HoldsUpToBound>(r));
    CHECK(std::get<HoldsUpToBound>(r).complete);
    CHECK(std::get<HoldsUpToBound>(r).states == 1);
    // from m5 one firing of sigma1 breaks E1
    auto v = bounded_reachability(n.net().with_marking("m5"), n.equation("E1"), Bounds{});
    REQUIRE(std::holds_alternative<ViolatedAt>(v));
    const auto& va = std::get<ViolatedAt>(v);
    CHECK(va.run.size() == 1);
    CHECK_FALSE(satisfies(va.marking, n.equation("E1")));
    CHECK(run(n.net().with_marking("m5"), va.run).back() == va.marking);
    // a violating initial marking is reported with an empty run
    auto i = bounded_reachability(n.net().with_marking("m4"), n.equation("E1"), Bounds{});
    REQUIRE(std::holds_alternative<ViolatedAt>(i));
    CHECK(std::get<ViolatedAt>(i).run.empty());
}
