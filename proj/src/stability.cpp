#include "apnv/stability.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace apnv {

namespace {

// The equation with each constrained kappa_p rewritten so that all of its
// variables are one per-place "hole" variable: kappa_p (.) x replaces every
// variable by the token x, so distinct variables inside one kappa_p never
// carry distinct values. A kappa_p whose single variable is private to it
// keeps the user's name.
struct EquationView {
    std::size_t n = 0;
    std::vector<std::size_t> constrained;
    std::vector<std::int64_t> gamma; ///< canonical, 0 on unconstrained places
    std::vector<std::optional<Term>> kappa;
    std::vector<std::optional<Term>> kappa_hat;
    std::vector<std::optional<std::string>> hole;
    std::size_t next_fresh = 0;
};

EquationView make_view(const HomogeneousEquation& eq) {
    EquationView v;
    v.n = eq.places()->size();
    v.gamma.assign(v.n, 0);
    v.kappa.assign(v.n, std::nullopt);
    v.kappa_hat.assign(v.n, std::nullopt);
    v.hole.assign(v.n, std::nullopt);

    std::map<std::string, int> uses;
    for (std::size_t i = 0; i < v.n; ++i) {
        if (auto e = eq.entry(i)) {
            v.constrained.push_back(i);
            v.gamma[i] = e->gamma;
            v.kappa[i] = e->kappa;
            for (const auto& var : variables(e->kappa))
                ++uses[var];
        }
    }
    FreshSupply fresh;
    for (std::size_t i : v.constrained) {
        const Term& k = *v.kappa[i];
        const auto vars = variables(k);
        if (vars.empty()) {
            v.kappa_hat[i] = k;
        } else if (vars.size() == 1 && uses[*vars.begin()] == 1 && !is_reserved_variable(*vars.begin())) {
            v.kappa_hat[i] = k;
            v.hole[i] = *vars.begin();
        } else {
            const std::string h = fresh.next_name();
            ++v.next_fresh;
            v.kappa_hat[i] = term_product(k, Term::var(h));
            v.hole[i] = h;
        }
    }
    return v;
}

struct SupportUnifier {
    bool ok = false;
    Substitution mgu;
    std::optional<Term> result;
};

// Unifies the normalized kappa of a set of active places. Results depend only
// on the active set, so they are cached by bitmask when it fits in 64 bits.
class SupportCache {
public:
    explicit SupportCache(const EquationView& view) : view_(view) {}

    const SupportUnifier& get(const std::vector<std::size_t>& active_places) {
        std::uint64_t mask = 0;
        const bool cacheable = view_.n <= 64;
        if (cacheable) {
            for (std::size_t p : active_places)
                mask |= std::uint64_t{1} << p;
            if (auto it = cache_.find(mask); it != cache_.end())
                return it->second;
        }
        SupportUnifier r = compute(active_places);
        if (!cacheable) {
            scratch_ = std::move(r);
            return scratch_;
        }
        return cache_.emplace(mask, std::move(r)).first->second;
    }

    const SupportUnifier& get_mask(std::uint64_t mask) {
        if (auto it = cache_.find(mask); it != cache_.end())
            return it->second;
        std::vector<std::size_t> active;
        for (std::size_t p = 0; p < view_.n; ++p)
            if (mask & (std::uint64_t{1} << p))
                active.push_back(p);
        return cache_.emplace(mask, compute(active)).first->second;
    }

private:
    SupportUnifier compute(const std::vector<std::size_t>& active) const {
        SupportUnifier r;
        if (active.empty()) {
            r.ok = true;
            return r;
        }
        std::vector<Equation> problem;
        const Term& first = *view_.kappa_hat[active.front()];
        for (std::size_t i = 1; i < active.size(); ++i)
            problem.emplace_back(first, *view_.kappa_hat[active[i]]);
        auto mgu = unify(problem);
        if (!mgu)
            return r;
        r.ok = true;
        r.result = mgu->apply(first);
        r.mgu = std::move(*mgu);
        return r;
    }

    const EquationView& view_;
    std::unordered_map<std::uint64_t, SupportUnifier> cache_;
    SupportUnifier scratch_;
};

std::vector<std::size_t> active_places(const EquationView& view, std::span<const std::int64_t> nu) {
    std::vector<std::size_t> out;
    for (std::size_t p : view.constrained)
        if (nu[p] != 0)
            out.push_back(p);
    return out;
}

Zero make_zero(std::vector<std::int64_t> nu, const SupportUnifier& u) {
    return Zero{std::move(nu), u.mgu, u.result};
}

bool zero_order(const Zero& a, const Zero& b) {
    const auto sa = a.sum(), sb = b.sum();
    if (sa != sb)
        return sa < sb;
    return a.nu < b.nu;
}

const Term& single_term(const Polynomial& p) { return p.entries().begin()->first; }

void require_same_places(const HomogeneousEquation& eq, const Transition& t) {
    if (!same_places(eq.places(), t.places()))
        throw UsageError("equation '" + eq.name() + "' and transition '" + t.name() +
                         "' are indexed by different place sets");
}

Term fill_ground(const Term& t, const Term& filler) {
    Substitution s;
    for (const auto& v : variables(t))
        s.bind(v, filler);
    return s.apply(t);
}

} // namespace

// --------------------------------------------------------------------- zeros

std::int64_t Zero::sum() const {
    std::int64_t s = 0;
    for (auto v : nu)
        s = checked::add(s, v);
    return s;
}

std::variant<Zero, NotAZero> check_zero(std::span<const std::int64_t> nu, const HomogeneousEquation& eq) {
    const EquationView view = make_view(eq);
    if (nu.size() != view.n)
        throw UsageError("count vector has " + std::to_string(nu.size()) + " entries, equation has " +
                         std::to_string(view.n) + " places");
    if (std::any_of(nu.begin(), nu.end(), [](std::int64_t x) { return x < 0; }))
        throw UsageError("count vector must be nonnegative");

    std::vector<GroupElement> gamma;
    for (std::size_t i = 0; i < view.n; ++i)
        gamma.emplace_back(eq.group(), view.gamma[i]);
    if (!weighted_coeff_sum(nu, gamma, eq.group()).is_zero())
        return NotAZero{NotAZeroReason::SumNonzero};

    std::vector<std::int64_t> canonical(view.n, 0);
    for (std::size_t p : view.constrained)
        canonical[p] = nu[p];
    SupportCache cache(view);
    const SupportUnifier& u = cache.get(active_places(view, canonical));
    if (!u.ok)
        return NotAZero{NotAZeroReason::UnificationFailed};
    return make_zero(std::move(canonical), u);
}

const Zero* SpanningSet::find(std::span<const std::int64_t> nu) const {
    for (const auto& z : zeros)
        if (std::equal(z.nu.begin(), z.nu.end(), nu.begin(), nu.end()))
            return &z;
    return nullptr;
}

SpanningSet spanning_set(const HomogeneousEquation& eq) {
    const EquationView view = make_view(eq);
    SupportCache cache(view);
    SpanningSet out;
    out.group = eq.group();

    const std::size_t k = view.constrained.size();
    std::vector<std::int64_t> nu(view.n, 0);
    auto emit = [&](std::uint64_t mask) {
        const SupportUnifier& u = cache.get_mask(mask);
        out.zeros.push_back(make_zero(nu, u));
    };
    auto bit = [&](std::size_t j) { return std::uint64_t{1} << view.constrained[j]; };
    if (view.n > 64)
        throw UsageError("spanning-set enumeration supports at most 64 places");

    if (!eq.group().is_finite()) {
        std::int64_t gmax = 0, gmin_abs = 0;
        for (std::size_t p : view.constrained) {
            gmax = std::max(gmax, view.gamma[p]);
            if (view.gamma[p] < 0)
                gmin_abs = std::max(gmin_abs, -view.gamma[p]);
        }
        out.gamma_max = gmax;
        out.gamma_min_abs = gmin_abs;
        out.bound = checked::mul(checked::mul(2, static_cast<std::int64_t>(view.n)), checked::mul(gmax, gmin_abs));
        if (gmax == 0 || gmin_abs == 0) {
            // All coefficients share a sign: only the trivial zero exists.
            emit(0);
            out.candidates_examined = 1;
            return out;
        }

        // Largest positive / |negative| coefficient among positions >= j.
        std::vector<std::int64_t> suffix_pos(k + 1, 0), suffix_neg(k + 1, 0);
        for (std::size_t j = k; j-- > 0;) {
            const std::int64_t g = view.gamma[view.constrained[j]];
            suffix_pos[j] = std::max(suffix_pos[j + 1], g > 0 ? g : 0);
            suffix_neg[j] = std::max(suffix_neg[j + 1], g < 0 ? -g : 0);
        }

        std::function<void(std::size_t, std::int64_t, std::int64_t, std::uint64_t)> rec =
            [&](std::size_t j, std::int64_t cap, std::int64_t partial, std::uint64_t mask) {
                const std::size_t p = view.constrained[j];
                const std::int64_t g = view.gamma[p];
                if (j + 1 == k) {
                    ++out.candidates_examined;
                    if (partial % g != 0)
                        return;
                    const std::int64_t v = -partial / g;
                    if (v < 0 || v > cap)
                        return;
                    const std::uint64_t m = v > 0 ? mask | bit(j) : mask;
                    if (!cache.get_mask(m).ok)
                        return;
                    nu[p] = v;
                    emit(m);
                    nu[p] = 0;
                    return;
                }
                for (std::int64_t v = 0; v <= cap; ++v) {
                    const std::int64_t next = checked::add(partial, checked::mul(g, v));
                    const std::int64_t rest = cap - v;
                    const bool feasible = next > 0   ? checked::mul(suffix_neg[j + 1], rest) >= next
                                          : next < 0 ? checked::mul(suffix_pos[j + 1], rest) >= -next
                                                     : true;
                    if (!feasible) {
                        if ((g > 0 && next > 0) || (g < 0 && next < 0))
                            break;
                        continue;
                    }
                    const std::uint64_t m = v > 0 ? mask | bit(j) : mask;
                    if (v > 0 && !cache.get_mask(m).ok)
                        break;
                    nu[p] = v;
                    rec(j + 1, rest, next, m);
                    nu[p] = 0;
                }
            };
        if (k > 0)
            rec(0, out.bound, 0, 0);
    } else {
        const auto o = static_cast<std::int64_t>(eq.group().order());
        out.bound = o;
        if (k == 0) {
            emit(0);
            out.candidates_examined = 1;
        } else {
            std::function<void(std::size_t, std::int64_t, std::uint64_t)> rec =
                [&](std::size_t j, std::int64_t partial, std::uint64_t mask) {
                    const std::size_t p = view.constrained[j];
                    for (std::int64_t v = 0; v <= o; ++v) {
                        const std::int64_t next = eq.group().add(partial, eq.group().scale(v, view.gamma[p]));
                        const std::uint64_t m = v > 0 ? mask | bit(j) : mask;
                        if (v > 0 && !cache.get_mask(m).ok)
                            break;
                        nu[p] = v;
                        if (j + 1 == k) {
                            ++out.candidates_examined;
                            if (next == 0)
                                emit(m);
                        } else {
                            rec(j + 1, next, m);
                        }
                        nu[p] = 0;
                    }
                };
            rec(0, 0, 0);
        }
    }
    std::sort(out.zeros.begin(), out.zeros.end(), zero_order);
    return out;
}

SpanningSet minimize_spanning(const SpanningSet& s) {
    std::set<std::vector<std::int64_t>> members;
    for (const auto& z : s.zeros)
        members.insert(z.nu);

    SpanningSet out = s;
    out.zeros.clear();
    for (const auto& z : s.zeros) {
        bool decomposable = false;
        if (!z.is_trivial()) {
            std::vector<std::int64_t> rest(z.nu.size());
            for (const auto& part : s.zeros) {
                if (part.is_trivial() || part.nu == z.nu)
                    continue;
                bool below = true;
                for (std::size_t i = 0; i < z.nu.size() && below; ++i) {
                    below = part.nu[i] <= z.nu[i];
                    rest[i] = z.nu[i] - part.nu[i];
                }
                if (below && members.contains(rest)) {
                    decomposable = true;
                    break;
                }
            }
        }
        if (!decomposable)
            out.zeros.push_back(z);
    }
    return out;
}

// ------------------------------------------------------------- derivation

std::vector<DerivedSubstitution> derive_substitutions(const SpanningSet& s, const Transition& t,
                                                      const HomogeneousEquation& eq) {
    require_same_places(eq, t);
    const EquationView view = make_view(eq);
    const PlaceList& names = *eq.places();

    struct Slot {
        std::size_t place;
        Term target;
        std::string fresh;
        std::vector<const Zero*> candidates;
        std::vector<Term> lhs; ///< candidate results renamed apart
    };
    std::vector<Slot> slots;
    std::size_t next_fresh = view.next_fresh;
    for (std::size_t q : preset_indices(t)) {
        if (!view.kappa[q])
            continue;
        Slot slot{q, term_product(*view.kappa[q], single_term(t.consume()[q])), {}, {}, {}};
        std::set<Term> seen;
        std::size_t max_vars = 1;
        for (const auto& z : s.zeros) {
            if (z.nu[q] < 1 || !z.result)
                continue;
            const Term shape = rename_canonical(std::span<const Term>(&*z.result, 1)).front();
            if (!seen.insert(shape).second)
                continue;
            slot.candidates.push_back(&z);
            max_vars = std::max(max_vars, variables(*z.result).size());
        }
        if (slot.candidates.empty())
            return {};
        const std::size_t base = next_fresh;
        next_fresh += max_vars;
        slot.fresh = "#" + std::to_string(base);
        for (const Zero* z : slot.candidates) {
            Substitution apart;
            const auto vars = variables_in_order(*z->result);
            for (std::size_t i = 0; i < vars.size(); ++i)
                apart.bind(vars[i], Term::var("#" + std::to_string(base + i)));
            slot.lhs.push_back(apart.apply(*z->result));
        }
        slots.push_back(std::move(slot));
    }

    std::vector<DerivedSubstitution> out;
    std::set<std::string> keys;
    const auto& tvars = t.variables();

    auto emit = [&](const Substitution& delta, const std::vector<std::size_t>& choice) {
        std::vector<Term> images;
        for (const auto& v : tvars)
            images.push_back(delta.apply(Term::var(v)));
        const auto renamed = rename_canonical(images);
        DerivedSubstitution d;
        std::size_t i = 0;
        for (const auto& v : tvars) {
            d.canonical.bind(v, renamed[i]);
            d.key += (i ? ";" : "") + v + "=" + renamed[i].str();
            ++i;
        }
        if (!keys.insert(d.key).second)
            return;
        d.delta = delta;
        for (std::size_t j = 0; j < slots.size(); ++j) {
            d.chosen.emplace(names[slots[j].place], *slots[j].candidates[choice[j]]);
            d.fresh.emplace(names[slots[j].place], slots[j].fresh);
        }
        out.push_back(std::move(d));
    };

    std::vector<Equation> problem;
    std::vector<std::size_t> choice(slots.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == slots.size()) {
            auto mgu = unify(problem);
            emit(mgu ? *mgu : Substitution{}, choice);
            return;
        }
        for (std::size_t c = 0; c < slots[j].candidates.size(); ++c) {
            problem.emplace_back(slots[j].lhs[c], slots[j].target);
            if (unify(problem)) {
                choice[j] = c;
                rec(j + 1);
            }
            problem.pop_back();
        }
    };
    rec(0);
    return out;
}

// ------------------------------------------------------------ realization

Assignment realization_from(const Substitution& delta, const std::set<std::string>& vars,
                            const Assignment& sigma_prime) {
    Assignment out;
    for (const auto& v : vars) {
        const Term image = sigma_prime.apply(delta.apply(Term::var(v)));
        if (!image.is_ground())
            throw UsageError("inner assignment leaves " + image.str() + " non-ground");
        out.bind(v, image);
    }
    return out;
}

namespace {

bool pairwise_distinct(const std::vector<Term>& terms, const Assignment& inner) {
    std::set<Term> images;
    for (const auto& t : terms)
        if (!images.insert(inner.apply(t)).second)
            return false;
    return true;
}

std::vector<std::string> free_variables(const Substitution& delta, const std::set<std::string>& vars,
                                        const std::vector<Term>& extra) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto add = [&](const Term& t) {
        for (const auto& v : variables_in_order(t))
            if (seen.insert(v).second)
                order.push_back(v);
    };
    for (const auto& v : vars)
        add(delta.apply(Term::var(v)));
    for (const auto& t : extra)
        add(t);
    return order;
}

} // namespace

std::optional<Assignment> realize(const Substitution& delta, const std::set<std::string>& vars,
                                  const std::vector<Term>& keep_distinct, const Signature& sig) {
    const Symbol* constant = sig.first_constant();
    if (!constant)
        throw UsageError("signature has no constant; ground terms do not exist");
    const Term c = Term::app(constant->name);
    const auto free = free_variables(delta, vars, keep_distinct);

    Assignment inner;
    for (const auto& v : free)
        inner.bind(v, c);
    if (pairwise_distinct(keep_distinct, inner))
        return realization_from(delta, vars, inner);

    const Symbol* head = sig.first_non_constant();
    if (!head)
        return std::nullopt;
    std::size_t spacing = 1;
    for (const auto& t : keep_distinct)
        spacing = std::max(spacing, t.depth() + 1);
    inner = Assignment{};
    for (std::size_t i = 0; i < free.size(); ++i)
        inner.bind(free[i], tower(*head, c, c, (i + 1) * spacing));
    if (!pairwise_distinct(keep_distinct, inner))
        throw std::logic_error("depth-separated realization failed to keep terms distinct");
    return realization_from(delta, vars, inner);
}

PVector counterexample_marking(const DerivedSubstitution& derived, const Assignment& sigma, const Transition& t,
                               const HomogeneousEquation& eq, const Signature& sig) {
    require_same_places(eq, t);
    const EquationView view = make_view(eq);
    const PlaceList& names = *eq.places();
    const Symbol* constant = sig.first_constant();
    if (!constant)
        throw UsageError("signature has no constant; ground terms do not exist");
    const Term c = Term::app(constant->name);

    PVector m(eq.places(), CyclicGroup::integers());
    for (std::size_t q : preset_indices(t)) {
        const auto& [theta, mult] = *t.consume()[q].entries().begin();
        const Term token_q = sigma.apply(theta);
        if (!token_q.is_ground())
            throw UsageError("firing mode does not ground " + theta.str());
        if (!view.kappa[q]) {
            m.add_term(q, token_q, mult);
            continue;
        }
        auto it = derived.chosen.find(names[q]);
        if (it == derived.chosen.end() || !it->second.result)
            throw UsageError("derived substitution has no zero for pre-place " + names[q]);
        const Zero& zero = it->second;
        const Term omega = term_product(*view.kappa[q], token_q);
        auto tau = match(*zero.result, omega);
        if (!tau)
            throw UsageError("firing mode is not a realization of the derived substitution");
        // One implementation of the chosen zero whose common product term is
        // omega, scaled by the arc multiplicity.
        for (std::size_t p : view.constrained) {
            if (zero.nu[p] == 0)
                continue;
            Term token = c;
            if (p == q)
                token = token_q;
            else if (view.hole[p])
                token = fill_ground(tau->apply(zero.mgu.apply(Term::var(*view.hole[p]))), c);
            m.add_term(p, token, checked::mul(mult, zero.nu[p]));
        }
    }
    return m;
}

// ---------------------------------------------------------------- verdict

namespace {

std::optional<Assignment> exhaustive_violation(const Substitution& delta, const Transition& t,
                                               const HomogeneousEquation& eq, const Signature& sig) {
    std::vector<Term> constants;
    for (const auto& s : sig.symbols())
        if (s.arity == 0)
            constants.push_back(Term::app(s.name));
    const auto free = free_variables(delta, t.variables(), {});
    std::vector<std::size_t> idx(free.size(), 0);
    while (true) {
        Assignment inner;
        for (std::size_t i = 0; i < free.size(); ++i)
            inner.bind(free[i], constants[idx[i]]);
        Assignment sigma = realization_from(delta, t.variables(), inner);
        if (!pvec_dot(eq.k(), instantiate(t.effect(), sigma)).empty())
            return sigma;
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == constants.size())
            idx[i++] = 0;
        if (i == idx.size())
            return std::nullopt;
    }
}

} // namespace

StabilityVerdict decide_stability(const HomogeneousEquation& eq, const Transition& t, const Signature& sig,
                                  const SpanningSet* spanning) {
    require_same_places(eq, t);
    SpanningSet computed;
    if (!spanning) {
        computed = minimize_spanning(spanning_set(eq));
        spanning = &computed;
    }
    StabilityVerdict verdict;
    verdict.outcome = Stable{};
    verdict.spanning_set_size = spanning->zeros.size();
    verdict.bound = spanning->bound;
    verdict.candidates_examined = spanning->candidates_examined;

    const Polynomial symbolic = invariant_residual(eq, t);
    const auto derived = derive_substitutions(*spanning, t, eq);
    verdict.derived_count = derived.size();

    for (const auto& d : derived) {
        Polynomial residual = poly_substitute(symbolic, d.canonical);
        if (residual.empty())
            continue;
        std::vector<Term> support;
        for (const auto& [term, coeff] : residual.entries())
            support.push_back(term);
        auto sigma = realize(d.canonical, t.variables(), support, sig);
        if (!sigma)
            sigma = exhaustive_violation(d.canonical, t, eq, sig);
        if (!sigma)
            continue;

        PVector m = counterexample_marking(d, *sigma, t, eq, sig);
        PVector next = fire(m, t, *sigma);
        if (!satisfies(m, eq) || satisfies(next, eq))
            throw std::logic_error("counterexample construction broke its contract for transition " + t.name());
        verdict.outcome = Unstable{d, std::move(residual), std::move(*sigma), std::move(m), std::move(next)};
        return verdict;
    }
    return verdict;
}

// ---------------------------------------------------------- implementation

bool check_implements(const PVector& m, const Zero& zero, const HomogeneousEquation& eq) {
    if (!same_places(m.places(), eq.places()))
        throw UsageError("marking and equation are indexed by different place sets");
    if (zero.nu.size() != m.size())
        throw UsageError("zero and marking have different place counts");
    std::optional<std::int64_t> multiple;
    std::optional<Term> omega;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (zero.nu[p] == 0 || !eq.constrained(p))
            continue;
        const std::int64_t count = m[p].total();
        if (count == 0 || count % zero.nu[p] != 0)
            return false;
        if (multiple && *multiple != count / zero.nu[p])
            return false;
        multiple = count / zero.nu[p];
        const Polynomial product = cauchy_product(eq.k()[p], m[p]);
        if (product.size() != 1)
            return false;
        const Term& w = product.entries().begin()->first;
        if (omega && !(*omega == w))
            return false;
        omega = w;
    }
    if (!omega)
        return true;
    return zero.result && match(*zero.result, *omega).has_value();
}

std::optional<std::vector<DecompositionPart>> decompose_marking(const PVector& m, const HomogeneousEquation& eq) {
    if (!satisfies(m, eq))
        return std::nullopt;
    const EquationView view = make_view(eq);

    struct Group {
        std::vector<std::int64_t> nu;
        PVector part;
    };
    std::map<Term, Group> groups;
    PVector rest(m.places(), CyclicGroup::integers());
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (!view.kappa[p]) {
            rest.set(p, m[p]);
            continue;
        }
        for (const auto& [token, count] : m[p].entries()) {
            const Term omega = term_product(*view.kappa[p], token);
            auto it = groups.find(omega);
            if (it == groups.end())
                it = groups.emplace(omega, Group{std::vector<std::int64_t>(m.size(), 0),
                                                 PVector(m.places(), CyclicGroup::integers())})
                         .first;
            it->second.nu[p] = checked::add(it->second.nu[p], count);
            it->second.part.add_term(p, token, count);
        }
    }

    std::vector<DecompositionPart> out;
    for (auto& [omega, g] : groups) {
        auto z = check_zero(g.nu, eq);
        if (!std::holds_alternative<Zero>(z))
            throw std::logic_error("tokens sharing product term " + omega.str() + " do not form a zero");
        out.push_back({std::get<Zero>(std::move(z)), std::move(g.part)});
    }
    const std::vector<std::int64_t> none(m.size(), 0);
    out.push_back({std::get<Zero>(check_zero(none, eq)), std::move(rest)});
    return out;
}

} // namespace apnv
