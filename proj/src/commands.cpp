#include "apnv/commands.hpp"

#include "apnv/oracle.hpp"
#include "apnv/stability.hpp"

#include <chrono>
#include <functional>
#include <map>

namespace apnv {

using ojson = nlohmann::ordered_json;

namespace {

struct Options {
    std::optional<std::string> net, equation, transition, marking, machine;
    std::vector<std::string> steps;
    Bounds bounds;
    bool timing = false;
};

template <class T>
std::optional<T> opt(const nlohmann::json& o, const char* key) {
    if (!o.contains(key) || o[key].is_null())
        return std::nullopt;
    try {
        return o[key].get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string("option '") + key + "' has the wrong type");
    }
}

Options read_options(const nlohmann::json& o) {
    if (!o.is_object() && !o.is_null())
        throw UsageError("options must be a JSON object");
    Options out;
    if (o.is_null())
        return out;
    out.net = opt<std::string>(o, "net");
    out.equation = opt<std::string>(o, "equation");
    out.transition = opt<std::string>(o, "transition");
    out.marking = opt<std::string>(o, "marking");
    out.machine = opt<std::string>(o, "machine");
    out.steps = opt<std::vector<std::string>>(o, "steps").value_or(std::vector<std::string>{});
    out.timing = opt<bool>(o, "timing").value_or(false);
    auto nat = [&](const char* key, auto& field) {
        if (auto v = opt<std::int64_t>(o, key)) {
            if (*v < 0)
                throw UsageError(std::string("option '") + key + "' must be nonnegative");
            field = static_cast<std::remove_reference_t<decltype(field)>>(*v);
        }
    };
    nat("term_depth", out.bounds.term_depth);
    nat("max_tokens", out.bounds.tokens_per_place);
    nat("search_depth", out.bounds.search_depth);
    nat("cap", out.bounds.candidate_cap);
    return out;
}

// ---- JSON views

ojson poly_json(const Polynomial& p) {
    ojson out = ojson::array();
    for (const auto& [t, c] : p.entries())
        out.push_back({{"coeff", p.group().signed_repr(c)}, {"term", t.str()}});
    return out;
}

ojson subst_json(const Substitution& s) {
    ojson out = ojson::object();
    for (const auto& [v, t] : s.bindings())
        out[v] = t.str();
    return out;
}

ojson pvec_json(const PVector& v) {
    ojson out = ojson::object();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].empty())
            out[(*v.places())[i]] = v[i].str();
    return out;
}

ojson nu_json(const std::vector<std::int64_t>& nu, const Places& places) {
    ojson out = ojson::object();
    for (std::size_t i = 0; i < nu.size(); ++i)
        out[(*places)[i]] = nu[i];
    return out;
}

ojson zero_json(const Zero& z, const Places& places) {
    return {{"nu", nu_json(z.nu, places)}, {"result", z.result ? ojson(z.result->str()) : ojson(nullptr)}};
}

ojson bounds_json(const Bounds& b) {
    return {{"term_depth", b.term_depth},
            {"max_tokens", b.tokens_per_place},
            {"search_depth", b.search_depth},
            {"cap", b.candidate_cap}};
}

ojson run_json(const std::vector<ScriptStep>& run) {
    ojson out = ojson::array();
    for (const auto& [t, s] : run)
        out.push_back({{"transition", t}, {"sigma", subst_json(s)}});
    return out;
}

// ---- context

struct Context {
    const Model& model;
    Options opts;
    ojson report;
    ojson stats = ojson::object();

    const NetDecl& net() const { return model.net(opts.net); }

    HomogeneousEquation equation_for(const NetDecl& n) const {
        if (!opts.equation)
            throw UsageError("this command needs an equation (--equation)");
        return model.equation(*opts.equation).bound_to(n.structure.places);
    }

    std::vector<const Transition*> transitions(const NetDecl& n) const {
        std::vector<const Transition*> out;
        if (opts.transition)
            out.push_back(&n.structure.transition(*opts.transition));
        else
            for (const auto& t : n.structure.transitions)
                out.push_back(&t);
        return out;
    }

    PVector marking(const NetDecl& n) const { return n.with_marking(opts.marking).initial; }
};

SpanningSet minimal_spanning(Context& cx, const HomogeneousEquation& eq) {
    SpanningSet full = spanning_set(eq);
    cx.stats["candidates_examined"] = full.candidates_examined;
    cx.stats["spanning_set_size"] = full.zeros.size();
    SpanningSet min = minimize_spanning(full);
    cx.stats["minimal_spanning_set_size"] = min.zeros.size();
    return min;
}

ojson verdict_json(const HomogeneousEquation& eq, const Transition& t, const StabilityVerdict& v) {
    ojson out;
    out["equation"] = eq.name();
    out["transition"] = t.name();
    out["verdict"] = v.stable() ? "stable" : "unstable";
    out["spanning_set_size"] = v.spanning_set_size;
    out["bound"] = v.bound;
    out["derived_count"] = v.derived_count;
    out["invariant"] = invariant_check(eq, t);
    if (const Unstable* u = v.unstable()) {
        out["witness"] = {{"delta", subst_json(u->witness.canonical)},
                          {"residual", poly_json(u->residual)},
                          {"realization", subst_json(u->realization)},
                          {"marking", pvec_json(u->marking)},
                          {"successor", pvec_json(u->successor)}};
    }
    return out;
}

// ---- commands

int cmd_check_stability(Context& cx) {
    const NetDecl& n = cx.net();
    const HomogeneousEquation eq = cx.equation_for(n);
    const SpanningSet s = minimal_spanning(cx, eq);
    cx.report["net"] = n.name;
    cx.report["equation"] = eq.name();
    cx.report["group"] = eq.group().str();
    ojson results = ojson::array();
    bool all_stable = true;
    for (const Transition* t : cx.transitions(n)) {
        const auto v = decide_stability(eq, *t, n.structure.signature, &s);
        all_stable = all_stable && v.stable();
        results.push_back(verdict_json(eq, *t, v));
    }
    cx.report["verdict"] = all_stable ? "stable" : "unstable";
    cx.report["results"] = std::move(results);
    return all_stable ? kOk : kNegative;
}

int cmd_check_invariant(Context& cx) {
    const NetDecl& n = cx.net();
    const HomogeneousEquation eq = cx.equation_for(n);
    cx.report["net"] = n.name;
    cx.report["equation"] = eq.name();
    ojson results = ojson::array();
    bool all = true;
    for (const Transition* t : cx.transitions(n)) {
        const Polynomial r = invariant_residual(eq, *t);
        all = all && r.empty();
        results.push_back({{"transition", t->name()}, {"invariant", r.empty()}, {"residual", poly_json(r)}});
    }
    cx.report["verdict"] = all ? "invariant" : "not-invariant";
    cx.report["results"] = std::move(results);
    return all ? kOk : kNegative;
}

int cmd_satisfies(Context& cx) {
    const NetDecl& n = cx.net();
    const HomogeneousEquation eq = cx.equation_for(n);
    const PVector m = cx.marking(n);
    const Polynomial value = pvec_dot(eq.k(), m);
    cx.report["net"] = n.name;
    cx.report["equation"] = eq.name();
    cx.report["marking"] = pvec_json(m);
    cx.report["value"] = poly_json(value);
    cx.report["verdict"] = value.empty() ? "satisfied" : "violated";
    return value.empty() ? kOk : kNegative;
}

int cmd_simulate(Context& cx) {
    const NetDecl& n = cx.net();
    const Net net = n.with_marking(cx.opts.marking);
    std::vector<ScriptStep> script;
    for (const auto& s : cx.opts.steps)
        script.push_back(parse_step(s, n.structure.signature));
    cx.report["net"] = n.name;
    cx.report["steps"] = run_json(script);
    try {
        const auto traj = run(net, script);
        ojson out = ojson::array();
        for (const auto& m : traj)
            out.push_back(pvec_json(m));
        cx.report["verdict"] = "completed";
        cx.report["trajectory"] = std::move(out);
        return kOk;
    } catch (const RunError& e) {
        cx.report["verdict"] = "blocked";
        cx.report["failed_step"] = e.index();
        cx.report["reason"] = e.what();
        return kNegative;
    }
}

int cmd_zeros(Context& cx) {
    const NetDecl* n = cx.model.nets.empty() ? nullptr : &cx.net();
    if (!cx.opts.equation)
        throw UsageError("this command needs an equation (--equation)");
    const HomogeneousEquation eq =
        n ? cx.model.equation(*cx.opts.equation).bound_to(n->structure.places) : cx.model.equation(*cx.opts.equation);
    const SpanningSet full = spanning_set(eq);
    const SpanningSet min = minimize_spanning(full);
    cx.stats["candidates_examined"] = full.candidates_examined;
    cx.report["equation"] = eq.name();
    cx.report["group"] = eq.group().str();
    cx.report["bound"] = full.bound;
    if (!eq.group().is_finite()) {
        cx.report["gamma_max"] = full.gamma_max;
        cx.report["gamma_min_abs"] = full.gamma_min_abs;
    }
    ojson members = ojson::array(), minimal = ojson::array();
    for (const auto& z : full.zeros)
        members.push_back(zero_json(z, eq.places()));
    for (const auto& z : min.zeros)
        minimal.push_back(zero_json(z, eq.places()));
    cx.report["size"] = full.zeros.size();
    cx.report["minimal_size"] = min.zeros.size();
    cx.report["minimal"] = std::move(minimal);
    cx.report["members"] = std::move(members);
    return kOk;
}

int cmd_derive(Context& cx) {
    const NetDecl& n = cx.net();
    const HomogeneousEquation eq = cx.equation_for(n);
    const SpanningSet s = minimal_spanning(cx, eq);
    cx.report["net"] = n.name;
    cx.report["equation"] = eq.name();
    ojson results = ojson::array();
    for (const Transition* t : cx.transitions(n)) {
        const Polynomial symbolic = invariant_residual(eq, *t);
        ojson derived = ojson::array();
        for (const auto& d : derive_substitutions(s, *t, eq)) {
            ojson chosen = ojson::object();
            for (const auto& [q, z] : d.chosen)
                chosen[q] = zero_json(z, eq.places());
            const Polynomial r = poly_substitute(symbolic, d.canonical);
            derived.push_back({{"key", d.key},
                               {"delta", subst_json(d.canonical)},
                               {"chosen", std::move(chosen)},
                               {"residual", poly_json(r)},
                               {"violates", !r.empty()}});
        }
        results.push_back({{"transition", t->name()}, {"derived", std::move(derived)}});
    }
    cx.report["results"] = std::move(results);
    return kOk;
}

int validity_of(Context& cx, const Net& net, const HomogeneousEquation& eq) {
    std::vector<std::pair<std::string, bool>> stable;
    ojson per = ojson::array();
    std::optional<SpanningSet> s;
    for (const auto& t : net.structure.transitions) {
        if (!s)
            s = minimal_spanning(cx, eq);
        const auto v = decide_stability(eq, t, net.structure.signature, &*s);
        stable.emplace_back(t.name(), v.stable());
        per.push_back({{"transition", t.name()}, {"verdict", v.stable() ? "stable" : "unstable"}});
    }
    cx.report["stability"] = std::move(per);
    const ValidityOutcome by_stability = validity_by_stability(net, eq, stable);
    if (std::holds_alternative<Valid>(by_stability)) {
        cx.report["verdict"] = "valid";
        cx.report["basis"] = "stability";
        return kOk;
    }
    cx.report["stability_note"] = std::get<Unknown>(by_stability).reason;

    const Reachability r = bounded_reachability(net, eq, cx.opts.bounds);
    cx.report["bounds"] = bounds_json(cx.opts.bounds);
    if (auto* v = std::get_if<ViolatedAt>(&r)) {
        cx.report["verdict"] = "violated";
        cx.report["basis"] = "reachability";
        cx.report["run"] = run_json(v->run);
        cx.report["marking"] = pvec_json(v->marking);
        return kNegative;
    }
    if (auto* h = std::get_if<HoldsUpToBound>(&r)) {
        cx.stats["states"] = h->states;
        cx.stats["depth"] = h->depth;
        if (h->complete) {
            cx.report["verdict"] = "valid";
            cx.report["basis"] = "exhaustive-reachability";
            return kOk;
        }
        cx.report["verdict"] = "unknown";
        cx.report["basis"] = "holds-up-to-bound";
        return kUnknown;
    }
    cx.stats["examined"] = std::get<Exhausted>(r).examined;
    cx.report["verdict"] = "unknown";
    cx.report["basis"] = "cap-exhausted";
    return kUnknown;
}

int cmd_validity(Context& cx) {
    if (cx.opts.machine || (cx.model.nets.empty() && !cx.model.machines.empty())) {
        const MinskyMachine& m = cx.model.machine(cx.opts.machine);
        const Net net = encode(m);
        const HomogeneousEquation eq = halting_equation(m, net.structure.places);
        cx.report["machine"] = m.name;
        cx.report["equation"] = "q" + std::to_string(m.size()) + " = 0";
        return validity_of(cx, net, eq);
    }
    const NetDecl& n = cx.net();
    const HomogeneousEquation eq = cx.equation_for(n);
    cx.report["net"] = n.name;
    cx.report["equation"] = eq.name();
    return validity_of(cx, n.with_marking(cx.opts.marking), eq);
}

int cmd_encode_minsky(Context& cx) {
    const MinskyMachine& m = cx.model.machine(cx.opts.machine);
    const Net net = encode(m);
    Model out;
    out.signature = net.structure.signature;
    out.nets.push_back({"M_" + m.name, net.structure, {{"m0", net.initial}}});
    out.equations.push_back(halting_equation(m, net.structure.places));
    cx.report["machine"] = m.name;
    cx.report["places"] = *net.structure.places;
    cx.report["transitions"] = net.structure.transitions.size();
    cx.report["warnings"] = m.lint();
    cx.report["model"] = print_model(out);
    return kOk;
}

const std::map<std::string, std::function<int(Context&)>>& table() {
    static const std::map<std::string, std::function<int(Context&)>> t = {
        {"check-stability", cmd_check_stability}, {"check-invariant", cmd_check_invariant},
        {"satisfies", cmd_satisfies},             {"simulate", cmd_simulate},
        {"zeros", cmd_zeros},                     {"derive", cmd_derive},
        {"validity", cmd_validity},               {"encode-minsky", cmd_encode_minsky},
    };
    return t;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : table())
            out.push_back(k);
        return out;
    }();
    return names;
}

CommandResult run_command(const Model& model, const std::string& command, const nlohmann::json& options) {
    CommandResult out;
    ojson& rep = out.report;
    rep["schema"] = kReportSchema;
    rep["tool"] = "apnv";
    rep["version"] = kVersion;
    rep["command"] = command;
    const auto start = std::chrono::steady_clock::now();
    try {
        auto it = table().find(command);
        if (it == table().end())
            throw UsageError("unknown command '" + command + "'");
        Context cx{model, read_options(options), {}, ojson::object()};
        out.exit_code = it->second(cx);
        for (auto& [k, v] : cx.report.items())
            rep[k] = v;
        if (cx.opts.timing)
            cx.stats["wall_ms"] =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rep["statistics"] = std::move(cx.stats);
    } catch (const OverflowError& e) {
        out.exit_code = kUnknown;
        rep["verdict"] = "error";
        rep["error"] = std::string("arithmetic overflow: ") + e.what();
    } catch (const Error& e) {
        out.exit_code = kUsage;
        rep["verdict"] = "error";
        rep["error"] = e.what();
    }
    return out;
}

} // namespace apnv
