#pragma once

// Decision procedure for t-stability of homogeneous P-equations over cyclic
// groups: zeros and their unification results, finite spanning sets of zeros,
// substitutions derivable from them, realizations, and counterexample
// construction for unstable equations.

#include "apnv/equation.hpp"
#include "apnv/net.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace apnv {

/// A count vector nu over the equation's places with sum nu(p) gamma_p = 0
/// whose unification problem {kappa_p = kappa_p' | nu(p), nu(p') > 0} is
/// solvable. `nu` is zero on unconstrained places.
struct Zero {
    std::vector<std::int64_t> nu;
    Substitution mgu;
    /// Common instance of the participating kappa_p; absent for the trivial zero.
    std::optional<Term> result;

    std::int64_t sum() const;
    bool is_trivial() const { return !result.has_value(); }
};

enum class NotAZeroReason { SumNonzero, UnificationFailed };

struct NotAZero {
    NotAZeroReason reason;
};

/// `nu` is indexed by the equation's places and must be nonnegative.
std::variant<Zero, NotAZero> check_zero(std::span<const std::int64_t> nu, const HomogeneousEquation& eq);

struct SpanningSet {
    /// Ordered by (sum of nu, nu lexicographically); always contains the
    /// trivial zero first.
    std::vector<Zero> zeros;
    /// 2|P| * gamma_max * gamma_min_abs over Z (0 when all coefficients share
    /// a sign), the order o over Z/oZ.
    std::int64_t bound = 0;
    CyclicGroup group = CyclicGroup::integers();
    std::int64_t gamma_max = 0;     ///< largest positive coefficient (Z only)
    std::int64_t gamma_min_abs = 0; ///< largest |coefficient| among negative ones (Z only)
    std::uint64_t candidates_examined = 0;

    const Zero* find(std::span<const std::int64_t> nu) const;
};

/// All zeros within the indecomposability bound (Z) or with nu(p) <= o per
/// place (Z/oZ).
SpanningSet spanning_set(const HomogeneousEquation& eq);

/// Drops every member that is the sum of two other nonzero members.
SpanningSet minimize_spanning(const SpanningSet& s);

struct DerivedSubstitution {
    /// Most general unifier of { rho(nu_q) renamed apart = kappa_q (.) theta_q }.
    Substitution delta;
    /// Pre-place -> zero chosen for it (constrained pre-places only).
    std::map<std::string, Zero> chosen;
    /// Pre-place -> fresh variable X_q standing for the place's token.
    std::map<std::string, std::string> fresh;
    /// delta restricted to the transition's variables, free variables renamed
    /// canonically; equal keys mean equal up to renaming.
    Substitution canonical;
    std::string key;
};

/// One substitution per choice function q -> nu_q (nu_q(q) >= 1) whose
/// unification problem is solvable, deduplicated up to renaming, in
/// enumeration order.
std::vector<DerivedSubstitution> derive_substitutions(const SpanningSet& s, const Transition& t,
                                                      const HomogeneousEquation& eq);

/// sigma(X) = sigma_prime[[delta(X)]] for every X in `vars`.
Assignment realization_from(const Substitution& delta, const std::set<std::string>& vars,
                            const Assignment& sigma_prime);

/// A realization of `delta` over `vars` whose inner assignment keeps the
/// images of `keep_distinct` pairwise distinct. Tries "every free variable to
/// the first constant" first, then depth-separated towers. nullopt when the
/// signature has no symbol of arity >= 1 and the first attempt fails.
std::optional<Assignment> realize(const Substitution& delta, const std::set<std::string>& vars,
                                  const std::vector<Term>& keep_distinct, const Signature& sig);

/// A marking that satisfies `eq` and enables (t, sigma), assembled from scaled
/// implementations of the zeros chosen by `derived`.
PVector counterexample_marking(const DerivedSubstitution& derived, const Assignment& sigma, const Transition& t,
                               const HomogeneousEquation& eq, const Signature& sig);

struct Stable {};

struct Unstable {
    DerivedSubstitution witness;
    Polynomial residual; ///< k (.) delta[t_delta], nonempty
    Assignment realization;
    PVector marking;   ///< satisfies eq and enables (t, realization)
    PVector successor; ///< fire(marking, t, realization), violates eq
};

struct StabilityVerdict {
    std::variant<Stable, Unstable> outcome;
    std::size_t spanning_set_size = 0;
    std::int64_t bound = 0;
    std::size_t derived_count = 0;
    std::uint64_t candidates_examined = 0;

    bool stable() const { return std::holds_alternative<Stable>(outcome); }
    const Unstable* unstable() const { return std::get_if<Unstable>(&outcome); }
};

/// Decides t-stability. `spanning` may carry a precomputed (minimized)
/// spanning set of `eq`; otherwise one is computed.
StabilityVerdict decide_stability(const HomogeneousEquation& eq, const Transition& t, const Signature& sig,
                                  const SpanningSet* spanning = nullptr);

/// Every constrained place with nu(p) > 0 carries a positive multiple j * nu(p)
/// of tokens (same j everywhere), and one assignment maps rho(nu) onto the
/// single support term of k(p) (.) m(p) on all of them.
bool check_implements(const PVector& m, const Zero& zero, const HomogeneousEquation& eq);

struct DecompositionPart {
    Zero zero;
    PVector marking;
};

/// Splits a satisfying marking into implementations grouped by product term,
/// followed by the remainder on unconstrained places (paired with the
/// trivial zero). nullopt when `m` does not satisfy `eq`.
std::optional<std::vector<DecompositionPart>> decompose_marking(const PVector& m, const HomogeneousEquation& eq);

} // namespace apnv
