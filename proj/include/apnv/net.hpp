#pragma once

// Algebraic Petri net structures, markings, enabling, steps and runs under
// explicit firing modes.

#include "apnv/error.hpp"
#include "apnv/poly.hpp"
#include "apnv/term.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace apnv {

class Transition {
public:
    /// Both sides must be simple, semi-positive integer P-vectors over the
    /// same place list.
    Transition(std::string name, PVector consume, PVector produce);

    const std::string& name() const noexcept { return name_; }
    const PVector& consume() const noexcept { return consume_; }
    const PVector& produce() const noexcept { return produce_; }
    /// -consume + produce.
    const PVector& effect() const noexcept { return effect_; }
    const std::set<std::string>& variables() const noexcept { return variables_; }
    const Places& places() const noexcept { return consume_.places(); }

private:
    std::string name_;
    PVector consume_;
    PVector produce_;
    PVector effect_;
    std::set<std::string> variables_;
};

/// Places p with a nonempty consume entry.
std::set<std::string> preset(const Transition& t);
std::vector<std::size_t> preset_indices(const Transition& t);

struct NetStructure {
    Signature signature;
    Places places;
    std::vector<Transition> transitions;

    const Transition& transition(const std::string& name) const;
    /// Arity, signature and place-list checks; throws UsageError.
    void validate() const;
};

struct Net {
    NetStructure structure;
    PVector initial;
};

class NotEnabled : public Error {
public:
    NotEnabled(std::string place, Term token, std::int64_t needed, std::int64_t available);

    const std::string& place() const noexcept { return place_; }
    const Term& token() const noexcept { return token_; }

private:
    std::string place_;
    Term token_;
};

/// `sigma[v]` for an assignment that must bind every variable of `v` to a
/// ground term; throws UsageError otherwise.
PVector instantiate(const PVector& v, const Assignment& sigma);

/// m >= sigma[[t-]] componentwise.
bool enabled(const PVector& m, const Transition& t, const Assignment& sigma);
/// m + sigma[[t_delta]]; throws NotEnabled carrying the first deficient
/// (place, token).
PVector fire(const PVector& m, const Transition& t, const Assignment& sigma);

/// true iff a >= b coefficient-wise on every place and term.
bool covers(const PVector& a, const PVector& b);

using ScriptStep = std::pair<std::string, Assignment>;

class RunError : public Error {
public:
    RunError(std::size_t index, const std::string& what) : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Marking trajectory of a script starting at the initial marking. The first
/// failing step is reported as RunError with its zero-based index.
std::vector<PVector> run(const Net& net, const std::vector<ScriptStep>& script);

} // namespace apnv
