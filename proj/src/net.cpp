#include "apnv/net.hpp"

namespace apnv {

Transition::Transition(std::string name, PVector consume, PVector produce)
    : name_(std::move(name)), consume_(std::move(consume)), produce_(std::move(produce)),
      effect_(consume_.places(), CyclicGroup::integers()) {
    if (!same_places(consume_.places(), produce_.places()))
        throw UsageError("transition '" + name_ + "': consume and produce use different place sets");
    for (const PVector* side : {&consume_, &produce_}) {
        if (!(side->group() == CyclicGroup::integers()))
            throw UsageError("transition '" + name_ + "': arc weights must be integers");
        if (!side->is_simple())
            throw UsageError("transition '" + name_ + "': each arc must carry a single term");
        if (!side->is_semi_positive())
            throw UsageError("transition '" + name_ + "': arc multiplicities must be positive");
    }
    effect_ = pvec_add(pvec_scalar(-1, consume_), produce_);
    variables_ = consume_.variables();
    variables_.merge(produce_.variables());
}

std::set<std::string> preset(const Transition& t) {
    std::set<std::string> out;
    for (std::size_t i : preset_indices(t))
        out.insert((*t.places())[i]);
    return out;
}

std::vector<std::size_t> preset_indices(const Transition& t) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t.consume().size(); ++i)
        if (!t.consume()[i].empty())
            out.push_back(i);
    return out;
}

const Transition& NetStructure::transition(const std::string& name) const {
    for (const auto& t : transitions)
        if (t.name() == name)
            return t;
    throw UsageError("unknown transition '" + name + "'");
}

void NetStructure::validate() const {
    if (!places || places->empty())
        throw UsageError("net needs at least one place");
    std::set<std::string> names;
    for (const auto& t : transitions) {
        if (!names.insert(t.name()).second)
            throw UsageError("duplicate transition '" + t.name() + "'");
        if (!same_places(t.places(), places))
            throw UsageError("transition '" + t.name() + "' is not indexed by the net's places");
        for (const auto& term : t.consume().support())
            check_well_formed(term, signature);
        for (const auto& term : t.produce().support())
            check_well_formed(term, signature);
    }
}

NotEnabled::NotEnabled(std::string place, Term token, std::int64_t needed, std::int64_t available)
    : Error("not enabled: place " + place + " needs " + std::to_string(needed) + " * " + token.str() +
            ", has " + std::to_string(available)),
      place_(std::move(place)), token_(std::move(token)) {}

PVector instantiate(const PVector& v, const Assignment& sigma) {
    for (const auto& var : v.variables()) {
        const Term* img = sigma.lookup(var);
        if (!img)
            throw UsageError("firing mode does not bind variable '" + var + "'");
        if (!img->is_ground())
            throw UsageError("firing mode binds '" + var + "' to non-ground term " + img->str());
    }
    return pvec_substitute(v, sigma);
}

bool covers(const PVector& a, const PVector& b) {
    if (!same_places(a.places(), b.places()))
        throw UsageError("P-vectors are indexed by different place sets");
    for (std::size_t i = 0; i < b.size(); ++i)
        for (const auto& [t, c] : b[i].entries())
            if (a[i].coeff(t) < c)
                return false;
    return true;
}

namespace {

void require_marking(const PVector& m) {
    if (!m.is_marking())
        throw UsageError("not a marking (needs ground terms with positive multiplicities)");
}

} // namespace

bool enabled(const PVector& m, const Transition& t, const Assignment& sigma) {
    require_marking(m);
    instantiate(t.produce(), sigma);
    return covers(m, instantiate(t.consume(), sigma));
}

PVector fire(const PVector& m, const Transition& t, const Assignment& sigma) {
    require_marking(m);
    instantiate(t.produce(), sigma);
    const PVector need = instantiate(t.consume(), sigma);
    if (!same_places(m.places(), need.places()))
        throw UsageError("marking and transition use different place sets");
    for (std::size_t i = 0; i < need.size(); ++i)
        for (const auto& [term, c] : need[i].entries())
            if (m[i].coeff(term) < c)
                throw NotEnabled((*m.places())[i], term, c, m[i].coeff(term));
    return pvec_add(m, instantiate(t.effect(), sigma));
}

std::vector<PVector> run(const Net& net, const std::vector<ScriptStep>& script) {
    std::vector<PVector> trajectory{net.initial};
    for (std::size_t i = 0; i < script.size(); ++i) {
        const auto& [name, sigma] = script[i];
        try {
            trajectory.push_back(fire(trajectory.back(), net.structure.transition(name), sigma));
        } catch (const Error& e) {
            throw RunError(i, "step " + std::to_string(i) + " (" + name + "): " + e.what());
        }
    }
    return trajectory;
}

} // namespace apnv
