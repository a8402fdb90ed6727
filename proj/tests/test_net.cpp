#include "helpers.hpp"

#include "apnv/error.hpp"
#include "apnv/net.hpp"

#include <doctest.h>

using namespace apnv;
using namespace th;

namespace {

const NetStructure& S1() { return example1().net().structure; }
const Transition& t() { return S1().transition("t"); }
Assignment sigma1() { return {{"W", c()}, {"Y", c()}, {"Z", g(c())}}; }

} // namespace

TEST_CASE("the example transition") {
    CHECK(preset(t()) == std::set<std::string>{"A", "B", "C", "D"});
    CHECK(t().variables() == std::set<std::string>{"W", "Y", "Z"});
    CHECK(t().effect().str() == "{ A: -1 * g(W), B: -1 * f(Y), C: -1 * W, D: -2 * Z, E: 1 * f(W) }");
}

TEST_CASE("transitions reject malformed arcs") {
    auto P = make_places({"A"});
    PVector in(P, CyclicGroup::integers()), out(P, CyclicGroup::integers());
    in.add_term(0, c(), -1);
    CHECK_THROWS_AS(Transition("bad", in, out), UsageError);
    PVector two(P, CyclicGroup::integers());
    two.add_term(0, c(), 1);
    two.add_term(0, f(c()), 1);
    CHECK_THROWS_AS(Transition("bad", two, out), UsageError);
    CHECK_THROWS_AS(Transition("bad", out, PVector(make_places({"B"}), CyclicGroup::integers())), UsageError);
}

TEST_CASE("firing m5 with sigma1") {
    const PVector& m5 = example1().net().marking("m5");
    CHECK(enabled(m5, t(), sigma1()));
    PVector next = fire(m5, t(), sigma1());
    CHECK(next.at("E").coeff(f(c())) == 1);
    CHECK(next.at("D").coeff(g(c())) == 1);
    CHECK(next.at("A").coeff(g(c())) == 4);
    // total token count drops by 4 (1 + 1 + 1 + 2 consumed, 1 produced)
    auto total = [](const PVector& m) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            s += m[i].total();
        return s;
    };
    CHECK(total(m5) - total(next) == 4);
}

TEST_CASE("not enabled reports the first deficient place") {
    const PVector& m1 = example1().net().marking("m1");
    CHECK_FALSE(enabled(m1, t(), sigma1()));
    try {
        fire(m1, t(), sigma1());
        FAIL("expected NotEnabled");
    } catch (const NotEnabled& e) {
        CHECK(e.place() == "A");
        CHECK(e.token() == g(c()));
    }
}

TEST_CASE("firing modes must ground every variable") {
    const PVector& m5 = example1().net().marking("m5");
    CHECK_THROWS_AS(fire(m5, t(), Assignment{{"W", c()}, {"Y", c()}}), UsageError);
    CHECK_THROWS_AS(fire(m5, t(), Assignment{{"W", c()}, {"Y", c()}, {"Z", V("Q")}}), UsageError);
}

TEST_CASE("runs") {
    Net net = example1().net().with_marking("m5");
    auto traj = run(net, {{"t", sigma1()}});
    CHECK(traj.size() == 2);
    try {
        run(net, {{"t", sigma1()}, {"t", sigma1()}, {"t", sigma1()}, {"t", sigma1()}});
        FAIL("expected RunError");
    } catch (const RunError& e) {
        CHECK(e.index() == 1); // only one B: c token
    }
    CHECK_THROWS_AS(run(net, {{"nope", sigma1()}}), RunError);
}
