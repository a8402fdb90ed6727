#pragma once

// Minsky machines and their encoding as algebraic Petri nets.

#include "apnv/equation.hpp"
#include "apnv/net.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace apnv {

struct Inc {
    std::size_t reg;
    std::size_t next;
};
struct Jz {
    std::size_t reg;
    std::size_t if_positive; ///< decrement and go here
    std::size_t if_zero;
};
struct Halt {};
using Instruction = std::variant<Inc, Jz, Halt>;

/// Registers and instructions are 1-based in all external views.
struct MinskyMachine {
    std::string name = "M";
    std::size_t registers = 1;
    std::vector<Instruction> instructions;

    std::size_t size() const noexcept { return instructions.size(); }
    /// Structural checks; throws UsageError.
    void validate() const;
    /// Legal but suspicious constructs (a JZ jumping straight to HALT).
    std::vector<std::string> lint() const;
};

struct MachineState {
    std::vector<std::int64_t> rho; ///< rho[r-1]
    std::size_t ell = 1;

    friend bool operator==(const MachineState&, const MachineState&) = default;
};

/// nullopt when ell = n (halted).
std::optional<MachineState> machine_step(const MachineState& s, const MinskyMachine& m);

/// Place names: p1..pR then q1..qn. Transitions: `t<i>` for INC and the
/// positive JZ branch, `t<i>_zero` for the zero branch.
Net encode(const MinskyMachine& m);
PVector state_marking(const MachineState& s, const MinskyMachine& m, const Places& places);
/// q_n = 0 as the homogeneous equation k(q_n) = 1 * X over Z.
HomogeneousEquation halting_equation(const MinskyMachine& m, const Places& places);

} // namespace apnv
