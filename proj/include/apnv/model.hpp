#pragma once

// Model files: one signature, any number of nets (with named markings),
// homogeneous equations and Minsky machines.
//
//   signature: f/1, g/1, c/0;
//   net example1 {
//     places: A, B, C, D, E;
//     transition t { in: A -> 1 * g(W), D -> 2 * Z; out: E -> 1 * f(W); }
//     marking m0 { B: 1 * c, D: 3 * g(c) }
//   }
//   equation E1 group Z { A: 4 * f(x), D: -1 * x }
//   equation E2 group Z mod 7 { A: 3 * c, D: 2 * D }
//   minsky M { registers: 1; 1: inc 1 -> 2; 2: halt; }
//
// In nets, bare uppercase-initial identifiers are variables. In equations any
// bare identifier that is not a constant is a variable.

#include "apnv/equation.hpp"
#include "apnv/minsky.hpp"
#include "apnv/net.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apnv {

struct NamedMarking {
    std::string name;
    PVector marking;
};

struct NetDecl {
    std::string name;
    NetStructure structure;
    std::vector<NamedMarking> markings;

    /// Net with the named marking as initial marking; the first declared one
    /// (or the empty marking) when no name is given.
    Net with_marking(const std::optional<std::string>& marking = std::nullopt) const;
    const PVector& marking(const std::string& name) const;
};

struct Model {
    Signature signature;
    std::vector<NetDecl> nets;
    std::vector<HomogeneousEquation> equations;
    std::vector<MinskyMachine> machines;

    /// The named net, or the only one when `name` is empty.
    const NetDecl& net(const std::optional<std::string>& name = std::nullopt) const;
    const HomogeneousEquation& equation(const std::string& name) const;
    const MinskyMachine& machine(const std::optional<std::string>& name = std::nullopt) const;
};

/// Throws ParseError with the location of the first problem.
Model parse_model(std::string_view text);
Model load_model_file(const std::string& path);

/// Canonical text form; parse_model(print_model(m)) reproduces m.
std::string print_model(const Model& m);

/// A term against `sig`; uppercase-initial bare identifiers are variables.
Term parse_term(std::string_view text, const Signature& sig);
/// `W = c, Y = f(c)`; every image must be ground.
Assignment parse_assignment(std::string_view text, const Signature& sig);
/// `t: W = c, Y = c` (the assignment part may be empty).
ScriptStep parse_step(std::string_view text, const Signature& sig);
/// `{ A: 5 * g(c), C: 4 * c }` over `places`, ground integer entries.
PVector parse_marking(std::string_view text, const Signature& sig, const Places& places);

} // namespace apnv
