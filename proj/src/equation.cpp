#include "apnv/equation.hpp"

#include <algorithm>

namespace apnv {

HomogeneousEquation::HomogeneousEquation(std::string name, PVector k) : name_(std::move(name)), k_(std::move(k)) {
    if (!k_.is_simple())
        throw UsageError("equation '" + name_ + "': each place needs a single term (monomial) or nothing");
}

std::optional<HomogeneousEquation::Entry> HomogeneousEquation::entry(std::size_t i) const {
    const Polynomial& p = k_[i];
    if (p.empty())
        return std::nullopt;
    const auto& [kappa, gamma] = *p.entries().begin();
    return Entry{kappa, gamma};
}

HomogeneousEquation HomogeneousEquation::bound_to(const Places& places) const {
    if (same_places(places, k_.places()))
        return *this;
    PVector out(places, k_.group());
    for (std::size_t i = 0; i < k_.size(); ++i) {
        if (k_[i].empty())
            continue;
        const std::string& place = (*k_.places())[i];
        auto j = out.index_of(place);
        if (!j)
            throw UsageError("equation '" + name_ + "' mentions place '" + place + "' which the net lacks");
        out.set(*j, k_[i]);
    }
    return HomogeneousEquation(name_, std::move(out));
}

bool satisfies(const PVector& m, const HomogeneousEquation& eq) { return pvec_dot(eq.k(), m).empty(); }

Polynomial invariant_residual(const HomogeneousEquation& eq, const Transition& t) {
    return pvec_dot(eq.k(), t.effect());
}

bool invariant_check(const HomogeneousEquation& eq, const Transition& t) {
    return invariant_residual(eq, t).empty();
}

ValidityOutcome validity_by_stability(const Net& net, const HomogeneousEquation& eq,
                                      const std::vector<std::pair<std::string, bool>>& stable_by_transition) {
    for (const auto& t : net.structure.transitions) {
        auto it = std::find_if(stable_by_transition.begin(), stable_by_transition.end(),
                               [&](const auto& kv) { return kv.first == t.name(); });
        if (it == stable_by_transition.end())
            throw UsageError("no stability verdict for transition '" + t.name() + "'");
        if (!it->second)
            return Unknown{"equation is not stable under transition " + t.name(), t.name()};
    }
    if (!satisfies(net.initial, eq))
        return Unknown{"initial marking violates the equation", std::nullopt};
    return Valid{};
}

} // namespace apnv
