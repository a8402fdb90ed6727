#pragma once

// Homogeneous linear P-equations: satisfaction, the place-invariant test and
// validity through stability.

#include "apnv/net.hpp"
#include "apnv/poly.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace apnv {

/// sum_p gamma_p kappa_p = 0, given by a simple P-vector k.
class HomogeneousEquation {
public:
    struct Entry {
        Term kappa;
        std::int64_t gamma; ///< canonical, never zero
    };

    HomogeneousEquation(std::string name, PVector k);

    const std::string& name() const noexcept { return name_; }
    const PVector& k() const noexcept { return k_; }
    const CyclicGroup& group() const noexcept { return k_.group(); }
    const Places& places() const noexcept { return k_.places(); }

    /// Monomial at place i, or nullopt when k(p) is empty.
    std::optional<Entry> entry(std::size_t i) const;
    bool constrained(std::size_t i) const { return !k_[i].empty(); }

    /// The same equation re-indexed by `places`; every place carrying a
    /// monomial must appear there.
    HomogeneousEquation bound_to(const Places& places) const;

private:
    std::string name_;
    PVector k_;
};

/// k (.) m is the empty polynomial.
bool satisfies(const PVector& m, const HomogeneousEquation& eq);

/// k (.) t_delta computed symbolically.
Polynomial invariant_residual(const HomogeneousEquation& eq, const Transition& t);
/// k (.) t_delta = 0, the place-invariant criterion for t-stability.
bool invariant_check(const HomogeneousEquation& eq, const Transition& t);

struct Valid {};
struct Unknown {
    std::string reason;
    std::optional<std::string> transition; ///< first unstable transition, if that is the cause
};
using ValidityOutcome = std::variant<Valid, Unknown>;

/// Valid when every transition is stable and the initial marking satisfies
/// the equation. Anything else is Unknown, never Invalid.
ValidityOutcome validity_by_stability(const Net& net, const HomogeneousEquation& eq,
                                      const std::vector<std::pair<std::string, bool>>& stable_by_transition);

} // namespace apnv
