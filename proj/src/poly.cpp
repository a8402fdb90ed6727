#include "apnv/poly.hpp"

#include "apnv/error.hpp"

#include <algorithm>

namespace apnv {

namespace {

void require_same_group(const CyclicGroup& a, const CyclicGroup& b) {
    if (!(a == b))
        throw UsageError("group mismatch: " + a.str() + " vs " + b.str());
}

void require_integers(const CyclicGroup& g, const char* what) {
    if (!(g == CyclicGroup::integers()))
        throw UsageError(std::string(what) + " must be an integer polynomial");
}

} // namespace

Polynomial Polynomial::monomial(CyclicGroup group, const Term& t, std::int64_t coeff) {
    Polynomial p(group);
    p.add_term(t, coeff);
    return p;
}

std::int64_t Polynomial::coeff(const Term& t) const {
    auto it = entries_.find(t);
    return it == entries_.end() ? 0 : it->second;
}

void Polynomial::add_term(const Term& t, std::int64_t coeff) {
    coeff = group_.canonical(coeff);
    if (coeff == 0)
        return;
    auto [it, inserted] = entries_.try_emplace(t, coeff);
    if (inserted)
        return;
    it->second = group_.add(it->second, coeff);
    if (it->second == 0)
        entries_.erase(it);
}

bool Polynomial::is_ground() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.first.is_ground(); });
}

bool Polynomial::is_semi_positive() const {
    return group_ == CyclicGroup::integers() &&
           std::all_of(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.second > 0; });
}

std::int64_t Polynomial::total() const {
    std::int64_t sum = 0;
    for (const auto& [t, c] : entries_)
        sum = group_.add(sum, c);
    return sum;
}

std::string Polynomial::str() const {
    if (entries_.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [t, raw] : entries_) {
        const std::int64_t c = group_.signed_repr(raw);
        if (first)
            out += (c < 0 ? "-" : "");
        else
            out += (c < 0 ? " - " : " + ");
        out += std::to_string(c < 0 ? -c : c) + " * " + t.str();
        first = false;
    }
    return out;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
    require_same_group(a.group(), b.group());
    Polynomial out = a;
    for (const auto& [t, c] : b.entries())
        out.add_term(t, c);
    return out;
}

Polynomial poly_scalar(std::int64_t z, const Polynomial& p) {
    Polynomial out(p.group());
    for (const auto& [t, c] : p.entries())
        out.add_term(t, p.group().scale(z, c));
    return out;
}

Polynomial cauchy_product(const Polynomial& p1, const Polynomial& p2) {
    require_integers(p2.group(), "right factor of the Cauchy product");
    Polynomial out(p1.group());
    for (const auto& [m1, a] : p1.entries())
        for (const auto& [m2, z] : p2.entries())
            out.add_term(term_product(m1, m2), p1.group().scale(z, a));
    return out;
}

Polynomial poly_substitute(const Polynomial& p, const Substitution& sigma) {
    Polynomial out(p.group());
    for (const auto& [t, c] : p.entries())
        out.add_term(sigma.apply(t), c);
    return out;
}

// ------------------------------------------------------------------ PVector

Places make_places(PlaceList names) {
    if (names.empty())
        throw UsageError("place set must be nonempty");
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second)
            throw UsageError("duplicate place '" + n + "'");
    return std::make_shared<const PlaceList>(std::move(names));
}

bool same_places(const Places& a, const Places& b) { return a == b || (a && b && *a == *b); }

PVector::PVector(Places places, CyclicGroup group)
    : places_(std::move(places)), group_(group), entries_(places_->size(), Polynomial(group)) {}

const Polynomial& PVector::at(const std::string& place) const {
    auto i = index_of(place);
    if (!i)
        throw UsageError("unknown place '" + place + "'");
    return entries_[*i];
}

std::optional<std::size_t> PVector::index_of(const std::string& place) const {
    auto it = std::find(places_->begin(), places_->end(), place);
    if (it == places_->end())
        return std::nullopt;
    return static_cast<std::size_t>(it - places_->begin());
}

void PVector::set(std::size_t i, Polynomial p) {
    require_same_group(group_, p.group());
    entries_.at(i) = std::move(p);
}

void PVector::add_term(std::size_t i, const Term& t, std::int64_t coeff) { entries_.at(i).add_term(t, coeff); }

bool PVector::is_empty() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Polynomial& p) { return p.empty(); });
}

bool PVector::is_simple() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Polynomial& p) { return p.size() <= 1; });
}

bool PVector::is_semi_positive() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Polynomial& p) { return p.is_semi_positive(); });
}

bool PVector::is_marking() const {
    return is_semi_positive() &&
           std::all_of(entries_.begin(), entries_.end(), [](const Polynomial& p) { return p.is_ground(); });
}

std::set<Term> PVector::support() const {
    std::set<Term> out;
    for (const auto& p : entries_)
        for (const auto& [t, c] : p.entries())
            out.insert(t);
    return out;
}

std::set<std::string> PVector::variables() const {
    std::set<std::string> out;
    for (const auto& t : support())
        out.merge(apnv::variables(t));
    return out;
}

std::string PVector::str() const {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].empty())
            continue;
        out += first ? " " : ", ";
        first = false;
        out += (*places_)[i] + ": " + entries_[i].str();
    }
    return out + (first ? "}" : " }");
}

bool operator==(const PVector& a, const PVector& b) {
    return same_places(a.places_, b.places_) && a.group_ == b.group_ && a.entries_ == b.entries_;
}

namespace {

void require_same_places(const PVector& a, const PVector& b) {
    if (!same_places(a.places(), b.places()))
        throw UsageError("P-vectors are indexed by different place sets");
}

} // namespace

PVector pvec_add(const PVector& a, const PVector& b) {
    require_same_places(a, b);
    require_same_group(a.group(), b.group());
    PVector out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.set(i, poly_add(a[i], b[i]));
    return out;
}

PVector pvec_scalar(std::int64_t z, const PVector& v) {
    PVector out(v.places(), v.group());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.set(i, poly_scalar(z, v[i]));
    return out;
}

PVector pvec_substitute(const PVector& v, const Substitution& sigma) {
    PVector out(v.places(), v.group());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.set(i, poly_substitute(v[i], sigma));
    return out;
}

Polynomial pvec_dot(const PVector& k, const PVector& v) {
    require_same_places(k, v);
    require_integers(v.group(), "right operand of the P-vector product");
    Polynomial out(k.group());
    for (std::size_t i = 0; i < k.size(); ++i)
        out = poly_add(out, cauchy_product(k[i], v[i]));
    return out;
}

} // namespace apnv
