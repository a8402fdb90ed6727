#pragma once

// First-order terms over a fixed signature, substitutions, the term product,
// syntactic unification and one-way matching.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace apnv {

struct Symbol {
    std::string name;
    std::size_t arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// A finite list of function symbols with pairwise distinct names.
/// At least one constant (arity 0) is required so that ground terms exist.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    bool empty() const noexcept { return symbols_.empty(); }
    const Symbol* find(std::string_view name) const;
    const Symbol* first_constant() const;
    /// First symbol (declaration order) with arity >= 1, if any.
    const Symbol* first_non_constant() const;

    std::string str() const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<Symbol> symbols_;
};

class Term {
public:
    static Term var(std::string name);
    static Term app(std::string symbol, std::vector<Term> args = {});

    bool is_var() const noexcept;
    bool is_app() const noexcept { return !is_var(); }
    /// Variable name or function symbol.
    const std::string& name() const noexcept;
    std::span<const Term> args() const noexcept;
    std::size_t arity() const noexcept { return args().size(); }
    bool is_ground() const noexcept;
    /// Variables and constants have depth 0.
    std::size_t depth() const noexcept;
    std::size_t hash() const noexcept;

    std::string str() const;

    friend bool operator==(const Term& a, const Term& b) noexcept;
    /// Variables before applications; variables by name; applications by
    /// symbol name, then arity, then arguments lexicographically.
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept;

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// Finite map from variables to terms; unmapped variables map to themselves.
class Substitution {
public:
    Substitution() = default;
    Substitution(std::initializer_list<std::pair<const std::string, Term>> init) : map_(init) {}

    void bind(const std::string& var, Term image);
    const Term* lookup(const std::string& var) const;
    bool binds(const std::string& var) const { return map_.contains(var); }
    bool empty() const noexcept { return map_.empty(); }
    std::size_t size() const noexcept { return map_.size(); }
    const std::map<std::string, Term>& bindings() const noexcept { return map_; }

    /// Simultaneous application: images are not substituted again.
    Term apply(const Term& t) const;

    /// True iff every image is ground.
    bool is_assignment() const;
    /// Keep only bindings for the given variables.
    Substitution restricted_to(const std::set<std::string>& vars) const;

    std::string str() const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::map<std::string, Term> map_;
};

using Assignment = Substitution;

Term substitute(const Term& t, const Substitution& sigma);

/// Every variable occurrence in `rho` replaced by `theta`.
Term term_product(const Term& rho, const Term& theta);

std::set<std::string> variables(const Term& t);
/// Variables in left-to-right order of first occurrence.
std::vector<std::string> variables_in_order(const Term& t);
bool occurs(const std::string& var, const Term& t);

using Equation = std::pair<Term, Term>;

/// Martelli-Montanari unification with occurs check. Returns an idempotent
/// most general unifier; variable-variable equations bind the
/// lexicographically greater name to the smaller one. `nullopt` signals a
/// symbol clash or an occurs-check failure.
std::optional<Substitution> unify(std::span<const Equation> problem);
std::optional<Substitution> unify(const Term& a, const Term& b);

/// One-way matching: a substitution `s` over the variables of `pattern` with
/// `s(pattern) == target`. Variables of `target` are treated as constants.
std::optional<Substitution> match(const Term& pattern, const Term& target);

/// Fresh variables `#0`, `#1`, ... from a reserved namespace that the model
/// parser never produces.
class FreshSupply {
public:
    explicit FreshSupply(std::size_t start = 0) : next_(start) {}
    std::string next_name();
    Term next() { return Term::var(next_name()); }

private:
    std::size_t next_;
};

bool is_reserved_variable(std::string_view name);

/// Renames variables to `#0, #1, ...` in order of first occurrence across `terms`.
std::vector<Term> rename_canonical(std::span<const Term> terms);

/// Arity and symbol checks against a signature; throws UsageError.
void check_well_formed(const Term& t, const Signature& sig);

/// The `depth`-fold tower `head(head(...(base, c, ...)))` with remaining
/// arguments filled by `filler`.
Term tower(const Symbol& head, const Term& base, const Term& filler, std::size_t depth);

} // namespace apnv
