#include "apnv/term.hpp"

#include "apnv/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

namespace apnv {

// ---------------------------------------------------------------- Signature

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty())
        throw UsageError("signature must contain at least one symbol");
    std::set<std::string> seen;
    bool has_constant = false;
    for (const auto& s : symbols_) {
        if (s.name.empty())
            throw UsageError("signature symbol with empty name");
        if (!seen.insert(s.name).second)
            throw UsageError("duplicate signature symbol '" + s.name + "'");
        has_constant = has_constant || s.arity == 0;
    }
    if (!has_constant)
        throw UsageError("signature needs a symbol of arity 0, otherwise no ground terms exist");
}

const Symbol* Signature::find(std::string_view name) const {
    auto it = std::find_if(symbols_.begin(), symbols_.end(),
                           [&](const Symbol& s) { return s.name == name; });
    return it == symbols_.end() ? nullptr : &*it;
}

const Symbol* Signature::first_constant() const {
    for (const auto& s : symbols_)
        if (s.arity == 0)
            return &s;
    return nullptr;
}

const Symbol* Signature::first_non_constant() const {
    for (const auto& s : symbols_)
        if (s.arity > 0)
            return &s;
    return nullptr;
}

std::string Signature::str() const {
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i)
            out += ", ";
        out += symbols_[i].name + "/" + std::to_string(symbols_[i].arity);
    }
    return out;
}

// --------------------------------------------------------------------- Term

struct Term::Node {
    bool is_var = false;
    std::string name;
    std::vector<Term> args;
    bool ground = true;
    std::size_t depth = 0;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

Term Term::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->ground = false;
    n->hash = mix(0x51ed27u, std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    std::size_t h = mix(0xa99u, std::hash<std::string>{}(symbol));
    h = mix(h, args.size());
    for (const auto& a : args) {
        n->ground = n->ground && a.is_ground();
        n->depth = std::max(n->depth, a.depth() + 1);
        h = mix(h, a.hash());
    }
    n->hash = h;
    n->name = std::move(symbol);
    n->args = std::move(args);
    return Term(std::move(n));
}

bool Term::is_var() const noexcept { return node_->is_var; }
const std::string& Term::name() const noexcept { return node_->name; }
std::span<const Term> Term::args() const noexcept { return node_->args; }
bool Term::is_ground() const noexcept { return node_->ground; }
std::size_t Term::depth() const noexcept { return node_->depth; }
std::size_t Term::hash() const noexcept { return node_->hash; }

std::string Term::str() const {
    if (is_var() || args().empty())
        return name();
    std::string out = name() + "(";
    for (std::size_t i = 0; i < args().size(); ++i) {
        if (i)
            out += ", ";
        out += args()[i].str();
    }
    return out + ")";
}

bool operator==(const Term& a, const Term& b) noexcept {
    if (a.node_ == b.node_)
        return true;
    if (a.hash() != b.hash() || a.is_var() != b.is_var() || a.name() != b.name() ||
        a.arity() != b.arity())
        return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!(a.args()[i] == b.args()[i]))
            return false;
    return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    if (a.node_ == b.node_)
        return std::strong_ordering::equal;
    if (a.is_var() != b.is_var())
        return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.name() <=> b.name(); c != 0)
        return c;
    if (auto c = a.arity() <=> b.arity(); c != 0)
        return c;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (auto c = a.args()[i] <=> b.args()[i]; c != 0)
            return c;
    return std::strong_ordering::equal;
}

// ------------------------------------------------------------- Substitution

void Substitution::bind(const std::string& var, Term image) {
    map_.insert_or_assign(var, std::move(image));
}

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    if (map_.empty() || t.is_ground())
        return t;
    if (t.is_var()) {
        const Term* img = lookup(t.name());
        return img ? *img : t;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply(a));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::app(t.name(), std::move(args)) : t;
}

bool Substitution::is_assignment() const {
    return std::all_of(map_.begin(), map_.end(), [](const auto& kv) { return kv.second.is_ground(); });
}

Substitution Substitution::restricted_to(const std::set<std::string>& vars) const {
    Substitution out;
    for (const auto& [v, t] : map_)
        if (vars.contains(v))
            out.bind(v, t);
    return out;
}

std::string Substitution::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : map_) {
        if (!first)
            out += ", ";
        first = false;
        out += v + " -> " + t.str();
    }
    return out + "}";
}

Term substitute(const Term& t, const Substitution& sigma) { return sigma.apply(t); }

Term term_product(const Term& rho, const Term& theta) {
    if (rho.is_ground())
        return rho;
    if (rho.is_var())
        return theta;
    std::vector<Term> args;
    args.reserve(rho.arity());
    for (const auto& a : rho.args())
        args.push_back(term_product(a, theta));
    return Term::app(rho.name(), std::move(args));
}

namespace {

void collect_vars(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (t.is_ground())
        return;
    if (t.is_var()) {
        if (seen.insert(t.name()).second)
            out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args())
        collect_vars(a, out, seen);
}

} // namespace

std::set<std::string> variables(const Term& t) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_vars(t, order, seen);
    return seen;
}

std::vector<std::string> variables_in_order(const Term& t) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_vars(t, order, seen);
    return order;
}

bool occurs(const std::string& var, const Term& t) {
    if (t.is_ground())
        return false;
    if (t.is_var())
        return t.name() == var;
    return std::any_of(t.args().begin(), t.args().end(),
                       [&](const Term& a) { return occurs(var, a); });
}

// -------------------------------------------------------------- Unification

std::optional<Substitution> unify(std::span<const Equation> problem) {
    Substitution solved;
    std::deque<Equation> work(problem.begin(), problem.end());

    auto eliminate = [&](const std::string& x, const Term& u) {
        Substitution single{{x, u}};
        std::map<std::string, Term> updated;
        for (const auto& [v, img] : solved.bindings())
            updated.emplace(v, single.apply(img));
        solved = Substitution();
        for (auto& [v, img] : updated)
            solved.bind(v, std::move(img));
        solved.bind(x, u);
    };

    while (!work.empty()) {
        Term s = solved.apply(work.front().first);
        Term t = solved.apply(work.front().second);
        work.pop_front();

        if (s == t)
            continue;
        if (s.is_var() && t.is_var()) {
            // Deterministic orientation: the greater name is eliminated.
            if (s.name() < t.name())
                eliminate(t.name(), s);
            else
                eliminate(s.name(), t);
        } else if (s.is_var()) {
            if (occurs(s.name(), t))
                return std::nullopt;
            eliminate(s.name(), t);
        } else if (t.is_var()) {
            if (occurs(t.name(), s))
                return std::nullopt;
            eliminate(t.name(), s);
        } else {
            if (s.name() != t.name() || s.arity() != t.arity())
                return std::nullopt;
            for (std::size_t i = 0; i < s.arity(); ++i)
                work.emplace_back(s.args()[i], t.args()[i]);
        }
    }
    return solved;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
    const Equation eq{a, b};
    return unify(std::span<const Equation>(&eq, 1));
}

namespace {

bool match_into(const Term& pattern, const Term& target, Substitution& out) {
    if (pattern.is_var()) {
        if (const Term* prev = out.lookup(pattern.name()))
            return *prev == target;
        out.bind(pattern.name(), target);
        return true;
    }
    if (target.is_var() || pattern.name() != target.name() || pattern.arity() != target.arity())
        return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match_into(pattern.args()[i], target.args()[i], out))
            return false;
    return true;
}

} // namespace

std::optional<Substitution> match(const Term& pattern, const Term& target) {
    Substitution out;
    if (!match_into(pattern, target, out))
        return std::nullopt;
    return out;
}

std::string FreshSupply::next_name() { return "#" + std::to_string(next_++); }

bool is_reserved_variable(std::string_view name) { return !name.empty() && name.front() == '#'; }

std::vector<Term> rename_canonical(std::span<const Term> terms) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& t : terms)
        collect_vars(t, order, seen);
    Substitution ren;
    for (std::size_t i = 0; i < order.size(); ++i)
        ren.bind(order[i], Term::var("#" + std::to_string(i)));
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& t : terms)
        out.push_back(ren.apply(t));
    return out;
}

void check_well_formed(const Term& t, const Signature& sig) {
    if (t.is_var())
        return;
    const Symbol* s = sig.find(t.name());
    if (!s)
        throw UsageError("unknown symbol '" + t.name() + "'");
    if (s->arity != t.arity())
        throw UsageError("symbol '" + t.name() + "' expects " + std::to_string(s->arity) +
                         " argument(s), got " + std::to_string(t.arity()));
    for (const auto& a : t.args())
        check_well_formed(a, sig);
}

Term tower(const Symbol& head, const Term& base, const Term& filler, std::size_t depth) {
    Term cur = base;
    for (std::size_t i = 0; i < depth; ++i) {
        std::vector<Term> args;
        args.push_back(cur);
        for (std::size_t a = 1; a < head.arity; ++a)
            args.push_back(filler);
        cur = Term::app(head.name, std::move(args));
    }
    return cur;
}

} // namespace apnv
