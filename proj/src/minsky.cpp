#include "apnv/minsky.hpp"

namespace apnv {

void MinskyMachine::validate() const {
    if (registers < 1)
        throw UsageError("machine '" + name + "' needs at least one register");
    if (instructions.empty() || !std::holds_alternative<Halt>(instructions.back()))
        throw UsageError("machine '" + name + "': the last instruction must be halt");
    const std::size_t n = instructions.size();
    auto target = [&](std::size_t i, std::size_t z) {
        if (z < 1 || z > n)
            throw UsageError("machine '" + name + "': instruction " + std::to_string(i) + " jumps to " +
                             std::to_string(z) + ", outside 1.." + std::to_string(n));
    };
    auto reg = [&](std::size_t i, std::size_t r) {
        if (r < 1 || r > registers)
            throw UsageError("machine '" + name + "': instruction " + std::to_string(i) + " uses register " +
                             std::to_string(r));
    };
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& ins = instructions[i - 1];
        if (auto* inc = std::get_if<Inc>(&ins)) {
            reg(i, inc->reg);
            target(i, inc->next);
        } else if (auto* jz = std::get_if<Jz>(&ins)) {
            reg(i, jz->reg);
            target(i, jz->if_positive);
            target(i, jz->if_zero);
        } else if (i != n) {
            throw UsageError("machine '" + name + "': halt only allowed as the last instruction");
        }
    }
}

std::vector<std::string> MinskyMachine::lint() const {
    std::vector<std::string> out;
    const std::size_t n = instructions.size();
    for (std::size_t i = 1; i <= n; ++i)
        if (auto* jz = std::get_if<Jz>(&instructions[i - 1]))
            if (jz->if_positive == n || jz->if_zero == n)
                out.push_back("instruction " + std::to_string(i) + ": jz targets the halt instruction directly");
    return out;
}

std::optional<MachineState> machine_step(const MachineState& s, const MinskyMachine& m) {
    if (s.ell < 1 || s.ell > m.size())
        throw UsageError("instruction index " + std::to_string(s.ell) + " out of range");
    if (s.rho.size() != m.registers)
        throw UsageError("state has " + std::to_string(s.rho.size()) + " registers, machine has " +
                         std::to_string(m.registers));
    MachineState out = s;
    const auto& ins = m.instructions[s.ell - 1];
    if (auto* inc = std::get_if<Inc>(&ins)) {
        out.rho[inc->reg - 1] = checked::add(out.rho[inc->reg - 1], 1);
        out.ell = inc->next;
    } else if (auto* jz = std::get_if<Jz>(&ins)) {
        if (out.rho[jz->reg - 1] > 0) {
            --out.rho[jz->reg - 1];
            out.ell = jz->if_positive;
        } else {
            out.ell = jz->if_zero;
        }
    } else {
        return std::nullopt;
    }
    return out;
}

namespace {

const Term& dot_c() {
    static const Term c = Term::app("c");
    return c;
}

Term f(const Term& x) { return Term::app("f", {x}); }

std::string p_name(std::size_t r) { return "p" + std::to_string(r); }
std::string q_name(std::size_t i) { return "q" + std::to_string(i); }

std::size_t index_in(const Places& places, const std::string& name) {
    for (std::size_t i = 0; i < places->size(); ++i)
        if ((*places)[i] == name)
            return i;
    throw UsageError("place '" + name + "' missing from the encoding");
}

} // namespace

PVector state_marking(const MachineState& s, const MinskyMachine& m, const Places& places) {
    PVector out(places, CyclicGroup::integers());
    for (std::size_t r = 1; r <= m.registers; ++r) {
        if (s.rho.at(r - 1) < 0)
            throw UsageError("register values must be nonnegative");
        Term theta = dot_c();
        for (std::int64_t k = 0; k < s.rho[r - 1]; ++k)
            theta = f(theta);
        out.add_term(index_in(places, p_name(r)), theta, 1);
    }
    out.add_term(index_in(places, q_name(s.ell)), dot_c(), 1);
    return out;
}

Net encode(const MinskyMachine& m) {
    m.validate();
    PlaceList names;
    for (std::size_t r = 1; r <= m.registers; ++r)
        names.push_back(p_name(r));
    for (std::size_t i = 1; i <= m.size(); ++i)
        names.push_back(q_name(i));
    const Places places = make_places(names);
    const auto Z = CyclicGroup::integers();
    const Term X = Term::var("X");

    NetStructure s{Signature({{"f", 1}, {"c", 0}}), places, {}};
    auto transition = [&](const std::string& name, std::size_t i, std::size_t r, const Term& take, const Term& give,
                          std::size_t to) {
        PVector in(places, Z), out(places, Z);
        in.add_term(index_in(places, q_name(i)), dot_c(), 1);
        in.add_term(index_in(places, p_name(r)), take, 1);
        out.add_term(index_in(places, p_name(r)), give, 1);
        out.add_term(index_in(places, q_name(to)), dot_c(), 1);
        s.transitions.emplace_back(name, std::move(in), std::move(out));
    };
    for (std::size_t i = 1; i <= m.size(); ++i) {
        const auto& ins = m.instructions[i - 1];
        if (auto* inc = std::get_if<Inc>(&ins)) {
            transition("t" + std::to_string(i), i, inc->reg, X, f(X), inc->next);
        } else if (auto* jz = std::get_if<Jz>(&ins)) {
            transition("t" + std::to_string(i), i, jz->reg, f(X), X, jz->if_positive);
            transition("t" + std::to_string(i) + "_zero", i, jz->reg, dot_c(), dot_c(), jz->if_zero);
        }
    }
    s.validate();
    MachineState init{std::vector<std::int64_t>(m.registers, 0), 1};
    PVector m0 = state_marking(init, m, places);
    return Net{std::move(s), std::move(m0)};
}

HomogeneousEquation halting_equation(const MinskyMachine& m, const Places& places) {
    PVector k(places, CyclicGroup::integers());
    k.add_term(index_in(places, q_name(m.size())), Term::var("X"), 1);
    return HomogeneousEquation("halt", std::move(k));
}

} // namespace apnv
