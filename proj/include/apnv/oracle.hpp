#pragma once

// Brute-force reference procedures at desk scale. Nothing here uses the
// stability engine; they work from the definitions directly.

#include "apnv/equation.hpp"
#include "apnv/net.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace apnv {

struct Bounds {
    std::size_t term_depth = 2;
    std::int64_t tokens_per_place = 6; ///< per (place, token) multiplicity
    std::size_t search_depth = 6;
    std::uint64_t candidate_cap = 5'000'000;
};

struct Exhausted {
    std::uint64_t examined = 0;
};

/// All ground terms of depth <= depth: level by level, symbols in declaration
/// order, arguments from earlier levels in generation order.
std::vector<Term> enumerate_ground_terms(const Signature& sig, std::size_t depth);

/// Every nu with sum(nu) <= sum_bound (zero on unconstrained places) that is a
/// zero of eq, by plain enumeration. Exhausted when the cap is hit.
std::variant<std::vector<std::vector<std::int64_t>>, Exhausted> brute_zeros(const HomogeneousEquation& eq,
                                                                              std::int64_t sum_bound,
                                                                              std::uint64_t cap = 50'000'000);

struct NoCounterexampleWithinBounds {
    std::uint64_t examined = 0;
};

struct Counterexample {
    PVector marking;
    Assignment sigma;
    PVector successor;
};

using BruteStability = std::variant<NoCounterexampleWithinBounds, Counterexample, Exhausted>;

/// Searches for a step m -(t, sigma)-> m' with m satisfying eq and m' not.
/// sigma ranges over ground terms of depth <= term_depth; markings have at
/// most tokens_per_place copies of each token on each place.
BruteStability brute_stability(const HomogeneousEquation& eq, const Transition& t, const Signature& sig,
                               const Bounds& b);

struct Step {
    std::string transition;
    Assignment sigma;
    PVector successor;
};

/// Every step enabled at `m`. Variables on consume arcs are bound by matching
/// against the marking; variables only on produce arcs range over ground
/// terms of depth <= term_depth.
std::vector<Step> enumerate_steps(const NetStructure& net, const PVector& m, std::size_t term_depth);

struct HoldsUpToBound {
    std::size_t depth = 0;   ///< deepest BFS level explored
    std::size_t states = 0;  ///< distinct markings visited
    bool complete = false;   ///< the whole reachable set was explored
};

struct ViolatedAt {
    std::vector<ScriptStep> run;
    PVector marking;
};

using Reachability = std::variant<HoldsUpToBound, ViolatedAt, Exhausted>;

Reachability bounded_reachability(const Net& net, const HomogeneousEquation& eq, const Bounds& b);

} // namespace apnv
