#include "apnv/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_set>

namespace apnv {

std::vector<Term> enumerate_ground_terms(const Signature& sig, std::size_t depth) {
    if (!sig.first_constant())
        throw UsageError("signature has no constant; ground terms do not exist");
    std::vector<Term> out;
    std::vector<std::size_t> level_of;
    for (const auto& s : sig.symbols())
        if (s.arity == 0) {
            out.push_back(Term::app(s.name));
            level_of.push_back(0);
        }
    for (std::size_t d = 1; d <= depth; ++d) {
        const std::size_t known = out.size();
        for (const auto& s : sig.symbols()) {
            if (s.arity == 0)
                continue;
            // every tuple over the terms so far with at least one argument at depth d-1
            std::vector<std::size_t> idx(s.arity, 0);
            while (true) {
                bool fresh = false;
                for (auto i : idx)
                    fresh = fresh || level_of[i] == d - 1;
                if (fresh) {
                    std::vector<Term> args;
                    for (auto i : idx)
                        args.push_back(out[i]);
                    out.push_back(Term::app(s.name, std::move(args)));
                    level_of.push_back(d);
                }
                std::size_t k = s.arity;
                while (k > 0 && ++idx[k - 1] == known)
                    idx[--k] = 0;
                if (k == 0)
                    break;
            }
        }
    }
    return out;
}

namespace {

// kappa_p with every variable replaced by a per-place hole, so the unification
// problem of a count vector can be posed directly.
std::vector<std::optional<Term>> holed_kappas(const HomogeneousEquation& eq) {
    std::vector<std::optional<Term>> out(eq.places()->size());
    for (std::size_t p = 0; p < out.size(); ++p)
        if (auto e = eq.entry(p))
            out[p] = term_product(e->kappa, Term::var("$" + std::to_string(p)));
    return out;
}

bool oracle_is_zero(const std::vector<std::int64_t>& nu, const HomogeneousEquation& eq,
                    const std::vector<std::optional<Term>>& holed) {
    std::int64_t sum = 0;
    std::vector<Equation> problem;
    std::optional<Term> first;
    for (std::size_t p = 0; p < nu.size(); ++p) {
        if (nu[p] == 0 || !holed[p])
            continue;
        sum = eq.group().add(sum, eq.group().scale(nu[p], eq.entry(p)->gamma));
        if (first)
            problem.emplace_back(*first, *holed[p]);
        else
            first = holed[p];
    }
    return sum == 0 && unify(problem).has_value();
}

} // namespace

std::variant<std::vector<std::vector<std::int64_t>>, Exhausted> brute_zeros(const HomogeneousEquation& eq,
                                                                              std::int64_t sum_bound,
                                                                              std::uint64_t cap) {
    const auto holed = holed_kappas(eq);
    std::vector<std::size_t> cons;
    for (std::size_t p = 0; p < holed.size(); ++p)
        if (holed[p])
            cons.push_back(p);

    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> nu(holed.size(), 0);
    std::uint64_t examined = 0;
    bool exhausted = false;
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t j, std::int64_t left) {
        if (exhausted)
            return;
        if (j == cons.size()) {
            if (++examined > cap) {
                exhausted = true;
                return;
            }
            if (oracle_is_zero(nu, eq, holed))
                out.push_back(nu);
            return;
        }
        for (std::int64_t v = 0; v <= left; ++v) {
            nu[cons[j]] = v;
            rec(j + 1, left - v);
        }
        nu[cons[j]] = 0;
    };
    rec(0, sum_bound);
    if (exhausted)
        return Exhausted{examined};
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct TokenOption {
    std::size_t place;
    Term token;
    std::int64_t gamma;
    std::int64_t max_extra;
};

// Picks counts n_i in [0, max_extra_i] with sum gamma_i n_i = target in the
// group. Returns the counts or nullopt.
std::optional<std::vector<std::int64_t>> solve_counts(const std::vector<TokenOption>& options, std::int64_t target,
                                                      const CyclicGroup& g, std::uint64_t& examined,
                                                      std::uint64_t cap) {
    std::vector<std::int64_t> counts(options.size(), 0);
    std::set<std::pair<std::size_t, std::int64_t>> dead;
    std::function<bool(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t s) -> bool {
        if (s == target)
            return true;
        if (i == options.size() || dead.contains({i, s}) || examined > cap)
            return false;
        ++examined;
        for (std::int64_t n = 0; n <= options[i].max_extra; ++n) {
            counts[i] = n;
            if (rec(i + 1, g.add(s, g.scale(n, options[i].gamma))))
                return true;
        }
        counts[i] = 0;
        dead.insert({i, s});
        return false;
    };
    if (!rec(0, 0))
        return std::nullopt;
    return counts;
}

} // namespace

// With sigma fixed, k (.) m' = k (.) m + k (.) sigma[[t_delta]], so a violating
// step exists for sigma iff k (.) sigma[[t_delta]] != 0 and some satisfying m
// covers b = sigma[[t-]]. Extra tokens only matter through the product terms
// they create; tokens whose product term is outside supp(k (.) b) form groups
// that must cancel on their own and can be dropped. So it suffices to solve,
// per product term w of k (.) b, for counts of tokens x on places p with
// kappa_p (.) x = w. For non-ground kappa_p that x is determined by w; for
// ground kappa_p every pool term qualifies. This is exhaustive at the bounds.
BruteStability brute_stability(const HomogeneousEquation& eq_in, const Transition& t, const Signature& sig,
                               const Bounds& b) {
    const HomogeneousEquation eq = eq_in.bound_to(t.places());
    const auto pool = enumerate_ground_terms(sig, b.term_depth);
    const std::vector<std::string> vars(t.variables().begin(), t.variables().end());
    const Term hole = Term::var("$x");
    const CyclicGroup& g = eq.group();

    std::uint64_t examined = 0;
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        if (++examined > b.candidate_cap)
            return Exhausted{examined};
        Assignment sigma;
        for (std::size_t i = 0; i < vars.size(); ++i)
            sigma.bind(vars[i], pool[idx[i]]);

        const PVector need = instantiate(t.consume(), sigma);
        bool fits = true;
        for (std::size_t p = 0; p < need.size(); ++p)
            for (const auto& [x, c] : need[p].entries())
                fits = fits && c <= b.tokens_per_place;
        if (fits && !pvec_dot(eq.k(), instantiate(t.effect(), sigma)).empty()) {
            PVector m = need;
            bool solved = true;
            const Polynomial kb = pvec_dot(eq.k(), need);
            for (const auto& [w, c] : kb.entries()) {
                std::vector<TokenOption> options;
                for (std::size_t p = 0; p < need.size(); ++p) {
                    auto e = eq.entry(p);
                    if (!e)
                        continue;
                    auto add = [&](const Term& x) {
                        const std::int64_t room = b.tokens_per_place - need[p].coeff(x);
                        if (room > 0)
                            options.push_back({p, x, e->gamma, room});
                    };
                    if (e->kappa.is_ground()) {
                        if (e->kappa == w)
                            for (const auto& x : pool)
                                add(x);
                    } else if (auto mt = match(term_product(e->kappa, hole), w)) {
                        add(*mt->lookup("$x"));
                    }
                }
                auto counts = solve_counts(options, g.neg(c), g, examined, b.candidate_cap);
                if (examined > b.candidate_cap)
                    return Exhausted{examined};
                if (!counts) {
                    solved = false;
                    break;
                }
                for (std::size_t i = 0; i < options.size(); ++i)
                    if ((*counts)[i] > 0)
                        m.add_term(options[i].place, options[i].token, (*counts)[i]);
            }
            if (solved) {
                PVector next = fire(m, t, sigma);
                if (!satisfies(m, eq) || satisfies(next, eq))
                    throw std::logic_error("oracle produced an inconsistent counterexample");
                return Counterexample{std::move(m), std::move(sigma), std::move(next)};
            }
        }

        std::size_t k = idx.size();
        while (k > 0 && ++idx[k - 1] == pool.size())
            idx[--k] = 0;
        if (k == 0)
            break;
    }
    return NoCounterexampleWithinBounds{examined};
}

std::vector<Step> enumerate_steps(const NetStructure& net, const PVector& m, std::size_t term_depth) {
    std::vector<Step> out;
    std::optional<std::vector<Term>> pool;
    for (const auto& t : net.transitions) {
        const auto pre = preset_indices(t);
        std::set<std::string> bound_by_consume = t.consume().variables();
        std::vector<std::string> free_vars;
        for (const auto& v : t.variables())
            if (!bound_by_consume.contains(v))
                free_vars.push_back(v);

        std::function<void(std::size_t, const Assignment&)> rec = [&](std::size_t i, const Assignment& sigma) {
            if (i == pre.size()) {
                if (free_vars.empty()) {
                    out.push_back({t.name(), sigma, fire(m, t, sigma)});
                    return;
                }
                if (!pool)
                    pool = enumerate_ground_terms(net.signature, term_depth);
                std::vector<std::size_t> idx(free_vars.size(), 0);
                while (true) {
                    Assignment full = sigma;
                    for (std::size_t j = 0; j < free_vars.size(); ++j)
                        full.bind(free_vars[j], (*pool)[idx[j]]);
                    out.push_back({t.name(), full, fire(m, t, full)});
                    std::size_t k = idx.size();
                    while (k > 0 && ++idx[k - 1] == pool->size())
                        idx[--k] = 0;
                    if (k == 0)
                        break;
                }
                return;
            }
            const std::size_t q = pre[i];
            const auto& [theta, mult] = *t.consume()[q].entries().begin();
            const Term pattern = sigma.apply(theta);
            for (const auto& [x, c] : m[q].entries()) {
                if (c < mult)
                    continue;
                auto tau = match(pattern, x);
                if (!tau)
                    continue;
                Assignment next = sigma;
                for (const auto& [v, img] : tau->bindings())
                    next.bind(v, img);
                rec(i + 1, next);
            }
        };
        rec(0, Assignment{});
    }
    return out;
}

Reachability bounded_reachability(const Net& net, const HomogeneousEquation& eq_in, const Bounds& b) {
    const HomogeneousEquation eq = eq_in.bound_to(net.structure.places);
    struct Node {
        PVector marking;
        std::size_t parent;
        ScriptStep step;
    };
    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;

    auto run_to = [&](std::size_t i) {
        std::vector<ScriptStep> run;
        for (; i != 0; i = nodes[i].parent)
            run.push_back(nodes[i].step);
        std::reverse(run.begin(), run.end());
        return run;
    };

    nodes.push_back({net.initial, 0, {}});
    seen.insert(net.initial.str());
    if (!satisfies(net.initial, eq))
        return ViolatedAt{{}, net.initial};

    std::vector<std::size_t> frontier{0};
    std::size_t depth = 0;
    std::uint64_t examined = 0;
    while (!frontier.empty() && depth < b.search_depth) {
        ++depth;
        std::vector<std::size_t> next;
        for (std::size_t i : frontier) {
            for (auto& s : enumerate_steps(net.structure, nodes[i].marking, b.term_depth)) {
                if (++examined > b.candidate_cap)
                    return Exhausted{examined};
                if (!seen.insert(s.successor.str()).second)
                    continue;
                nodes.push_back({s.successor, i, {s.transition, s.sigma}});
                if (!satisfies(s.successor, eq))
                    return ViolatedAt{run_to(nodes.size() - 1), std::move(s.successor)};
                next.push_back(nodes.size() - 1);
            }
        }
        frontier = std::move(next);
    }
    return HoldsUpToBound{depth, nodes.size(), frontier.empty()};
}

} // namespace apnv
