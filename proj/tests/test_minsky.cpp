#include "helpers.hpp"

#include "apnv/minsky.hpp"
#include "apnv/oracle.hpp"

#include <doctest.h>

#include <random>

using namespace apnv;
using namespace th;

namespace {

MinskyMachine random_machine(std::mt19937& rng, std::size_t regs, std::size_t n) {
    MinskyMachine m;
    m.registers = regs;
    auto reg = [&] { return 1 + rng() % regs; };
    auto to = [&] { return 1 + rng() % n; };
    for (std::size_t i = 1; i < n; ++i) {
        if (rng() % 2)
            m.instructions.push_back(Inc{reg(), to()});
        else
            m.instructions.push_back(Jz{reg(), to(), to()});
    }
    m.instructions.push_back(Halt{});
    return m;
}

} // namespace

TEST_CASE("machine steps") {
    MinskyMachine m;
    m.registers = 1;
    m.instructions = {Jz{1, 2, 3}, Inc{1, 1}, Halt{}};
    MachineState s{{1}, 1};
    auto s1 = machine_step(s, m);
    REQUIRE(s1);
    CHECK(*s1 == MachineState{{0}, 2});
    CHECK(*machine_step(MachineState{{0}, 1}, m) == MachineState{{0}, 3});
    CHECK_FALSE(machine_step(MachineState{{0}, 3}, m));
    CHECK_THROWS_AS(machine_step(MachineState{{0, 0}, 1}, m), UsageError);
}

TEST_CASE("validation and lint") {
    MinskyMachine m;
    m.instructions = {Inc{1, 2}};
    CHECK_THROWS_AS(m.validate(), UsageError); // no halt at the end
    m.instructions = {Inc{2, 2}, Halt{}};
    CHECK_THROWS_AS(m.validate(), UsageError); // register out of range
    m.instructions = {Inc{1, 5}, Halt{}};
    CHECK_THROWS_AS(m.validate(), UsageError);
    m.instructions = {Halt{}, Halt{}};
    CHECK_THROWS_AS(m.validate(), UsageError);
    m.instructions = {Jz{1, 1, 2}, Halt{}};
    CHECK_NOTHROW(m.validate());
    CHECK(m.lint().size() == 1);
}

TEST_CASE("encoding shape") {
    MinskyMachine m;
    m.registers = 2;
    m.instructions = {Inc{1, 2}, Jz{2, 1, 3}, Halt{}};
    const Net n = encode(m);
    CHECK(*n.structure.places == PlaceList{"p1", "p2", "q1", "q2", "q3"});
    // |T| = #INC + 2 #JZ
    CHECK(n.structure.transitions.size() == 3);
    CHECK_NOTHROW(n.structure.transition("t2_zero"));
    CHECK(n.initial == state_marking(MachineState{{0, 0}, 1}, m, n.structure.places));
    CHECK(n.initial.at("p1") == Polynomial::monomial(CyclicGroup::integers(), c(), 1));
    const auto eq = halting_equation(m, n.structure.places);
    CHECK(satisfies(n.initial, eq));
    CHECK_FALSE(satisfies(state_marking(MachineState{{0, 0}, 3}, m, n.structure.places), eq));
}

TEST_CASE("property: the encoding is a step bisimulation") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t regs = 1 + rng() % 2, n = 2 + rng() % 5;
        const MinskyMachine m = random_machine(rng, regs, n);
        const Net net = encode(m);
        std::size_t incs = 0, jzs = 0;
        for (const auto& ins : m.instructions) {
            incs += std::holds_alternative<Inc>(ins);
            jzs += std::holds_alternative<Jz>(ins);
        }
        CHECK(net.structure.transitions.size() == incs + 2 * jzs);
        MachineState s{std::vector<std::int64_t>(regs, 0), 1};
        for (int k = 0; k < 25; ++k) {
            const PVector mk = state_marking(s, m, net.structure.places);
            // X always sits on a consume arc, so no ground terms need generating
            const auto steps = enumerate_steps(net.structure, mk, 0);
            const auto next = machine_step(s, m);
            if (!next) {
                CHECK(steps.empty());
                break;
            }
            REQUIRE(steps.size() == 1);
            CHECK(steps.front().successor == state_marking(*next, m, net.structure.places));
            s = *next;
        }
    }
}

TEST_CASE("fixture machines") {
    const Model mm = load_model_file(fixture("machines.apn"));
    CHECK(mm.machines.size() == 3);
    const auto& h = mm.machine("Halting");
    const Net n = encode(h);
    auto r = bounded_reachability(n, halting_equation(h, n.structure.places), Bounds{});
    CHECK(std::holds_alternative<ViolatedAt>(r));
    const auto& d = mm.machine("Diverging");
    const Net nd = encode(d);
    Bounds b;
    b.search_depth = 10;
    auto rd = bounded_reachability(nd, halting_equation(d, nd.structure.places), b);
    REQUIRE(std::holds_alternative<HoldsUpToBound>(rd));
    CHECK_FALSE(std::get<HoldsUpToBound>(rd).complete);
}
