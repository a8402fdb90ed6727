#pragma once

// Finitely supported polynomials over terms with cyclic-group coefficients,
// and P-vectors (place-indexed polynomials).

#include "apnv/group.hpp"
#include "apnv/term.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace apnv {

/// Map term -> nonzero coefficient, kept in canonical term order. Coefficients
/// are stored as canonical group values (residues for Z/oZ).
class Polynomial {
public:
    explicit Polynomial(CyclicGroup group = CyclicGroup::integers()) : group_(group) {}

    static Polynomial monomial(CyclicGroup group, const Term& t, std::int64_t coeff);

    const CyclicGroup& group() const noexcept { return group_; }
    const std::map<Term, std::int64_t>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::int64_t coeff(const Term& t) const;

    /// Accumulates `coeff` onto `t`; entries reaching zero are dropped.
    void add_term(const Term& t, std::int64_t coeff);

    bool is_monomial() const noexcept { return entries_.size() == 1; }
    bool is_ground() const;
    /// Integer polynomial with every coefficient > 0.
    bool is_semi_positive() const;
    /// Sum of coefficients (token count for markings).
    std::int64_t total() const;

    /// `3 * g(c) + 1 * c`; the empty polynomial prints as `0`.
    std::string str() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    CyclicGroup group_;
    std::map<Term, std::int64_t> entries_;
};

Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_scalar(std::int64_t z, const Polynomial& p);
/// (p1 (.) p2)(m) = sum over m = m1 (.) m2 of p2(m2) * p1(m1); `p2` must be
/// an integer polynomial.
Polynomial cauchy_product(const Polynomial& p1, const Polynomial& p2);
/// Substitutes every support term and merges coefficients of collapsing terms.
Polynomial poly_substitute(const Polynomial& p, const Substitution& sigma);

using PlaceList = std::vector<std::string>;
using Places = std::shared_ptr<const PlaceList>;

Places make_places(PlaceList names);
bool same_places(const Places& a, const Places& b);

class PVector {
public:
    PVector(Places places, CyclicGroup group);

    const Places& places() const noexcept { return places_; }
    const CyclicGroup& group() const noexcept { return group_; }
    std::size_t size() const noexcept { return entries_.size(); }

    const Polynomial& operator[](std::size_t i) const { return entries_.at(i); }
    const Polynomial& at(const std::string& place) const;
    std::optional<std::size_t> index_of(const std::string& place) const;
    void set(std::size_t i, Polynomial p);
    void add_term(std::size_t i, const Term& t, std::int64_t coeff);

    bool is_empty() const;
    /// Every entry is a monomial or empty.
    bool is_simple() const;
    bool is_semi_positive() const;
    /// Semi-positive integer vector with ground support.
    bool is_marking() const;
    std::set<Term> support() const;
    std::set<std::string> variables() const;

    /// `{ A: 5 * g(c), C: 4 * c }`, empty places omitted.
    std::string str() const;

    friend bool operator==(const PVector& a, const PVector& b);

private:
    Places places_;
    CyclicGroup group_;
    std::vector<Polynomial> entries_;
};

PVector pvec_add(const PVector& a, const PVector& b);
PVector pvec_scalar(std::int64_t z, const PVector& v);
PVector pvec_substitute(const PVector& v, const Substitution& sigma);
/// sum over places of k(p) (.) v(p); `v` must be an integer P-vector over the
/// same place list as `k`.
Polynomial pvec_dot(const PVector& k, const PVector& v);

} // namespace apnv
