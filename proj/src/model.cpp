#include "apnv/model.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace apnv {

namespace {

struct Loc {
    int line = 1;
    int col = 1;
};

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    Loc loc;
};

[[noreturn]] void fail(const Loc& at, const std::string& msg) { throw ParseError(at.line, at.col, msg); }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '#' || (ch == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        const Loc at{line, col};
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), at});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), at});
            advance(j - i);
            continue;
        }
        if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Punct, "->", at});
            advance(2);
            continue;
        }
        if (std::string_view("{}(),;:*+-/?=").find(ch) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, ch), at});
            advance(1);
            continue;
        }
        fail(at, std::string("unexpected character '") + ch + "'");
    }
    out.push_back({Tok::End, "", Loc{line, col}});
    return out;
}

// ---- raw syntax tree, resolved against the signature after parsing

struct RawTerm {
    std::string name;
    bool call = false;
    std::vector<RawTerm> args;
    Loc loc;
};

struct RawMono {
    std::int64_t coeff;
    RawTerm term;
};

struct RawPoly {
    std::vector<RawMono> monos;
    Loc loc;
};

struct RawEntry {
    std::string place;
    Loc loc;
    RawPoly poly;
};

struct RawTransition {
    std::string name;
    Loc loc;
    std::vector<RawEntry> in, out;
};

struct RawMarking {
    std::string name;
    Loc loc;
    std::vector<RawEntry> entries;
};

struct RawNet {
    std::string name;
    Loc loc;
    std::optional<std::vector<std::pair<std::string, Loc>>> places;
    std::vector<RawTransition> transitions;
    std::vector<RawMarking> markings;
};

struct RawEquation {
    std::string name;
    Loc loc;
    CyclicGroup group = CyclicGroup::integers();
    std::vector<RawEntry> entries;
};

struct RawSignature {
    std::vector<Symbol> symbols;
    Loc loc;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::End; }

    bool is(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
    bool is_word(const char* word) const { return peek().kind == Tok::Ident && peek().text == word; }

    bool accept(const char* punct) {
        if (!is(punct))
            return false;
        ++pos_;
        return true;
    }

    Token expect(const char* punct) {
        if (!is(punct))
            fail(peek().loc, std::string("expected '") + punct + "'" + found());
        return toks_[pos_++];
    }

    Token expect_word(const char* word) {
        if (!is_word(word))
            fail(peek().loc, std::string("expected '") + word + "'" + found());
        return toks_[pos_++];
    }

    Token ident(const char* what) {
        if (peek().kind != Tok::Ident)
            fail(peek().loc, std::string("expected ") + what + found());
        return toks_[pos_++];
    }

    std::int64_t integer(const char* what) {
        if (peek().kind != Tok::Int)
            fail(peek().loc, std::string("expected ") + what + found());
        const Token& t = toks_[pos_++];
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc())
            fail(t.loc, "integer out of range: " + t.text);
        return v;
    }

    std::string found() const {
        if (peek().kind == Tok::End)
            return ", found end of input";
        return ", found '" + peek().text + "'";
    }

    RawTerm term() {
        const Token name = ident("a term");
        RawTerm t{name.text, false, {}, name.loc};
        if (accept("(")) {
            t.call = true;
            t.args.push_back(term());
            while (accept(","))
                t.args.push_back(term());
            expect(")");
        }
        return t;
    }

    // [sign] (INT '*' term | term | 0) (('+'|'-') ...)*
    RawPoly poly() {
        RawPoly p;
        p.loc = peek().loc;
        bool first = true;
        while (true) {
            std::int64_t sign = 1;
            if (accept("-"))
                sign = -1;
            else if (!accept("+") && !first)
                break;
            first = false;
            if (peek().kind == Tok::Int) {
                const Loc at = peek().loc;
                const std::int64_t c = integer("a coefficient");
                if (!accept("*")) {
                    if (c != 0)
                        fail(at, "a coefficient needs '* term'");
                    continue;
                }
                p.monos.push_back({checked::mul(sign, c), term()});
            } else {
                p.monos.push_back({sign, term()});
            }
            if (!is("+") && !is("-"))
                break;
        }
        return p;
    }

    std::vector<RawEntry> entries(const char* sep) {
        std::vector<RawEntry> out;
        if (is("}") || is(";"))
            return out;
        do {
            const Token place = ident("a place name");
            expect(sep);
            out.push_back({place.text, place.loc, poly()});
        } while (accept(","));
        return out;
    }

    RawSignature signature() {
        RawSignature s;
        s.loc = expect_word("signature").loc;
        expect(":");
        do {
            const Token name = ident("a function symbol");
            expect("/");
            const std::int64_t arity = integer("an arity");
            s.symbols.push_back({name.text, static_cast<std::size_t>(arity)});
        } while (accept(","));
        expect(";");
        return s;
    }

    RawNet net(std::optional<RawSignature>& sig) {
        RawNet n;
        n.loc = expect_word("net").loc;
        n.name = ident("a net name").text;
        expect("{");
        while (!accept("}")) {
            if (is_word("signature")) {
                const Loc at = peek().loc;
                auto s = signature();
                if (sig)
                    fail(at, "only one signature per file");
                sig = std::move(s);
            } else if (is_word("places")) {
                const Loc at = peek().loc;
                ++pos_;
                if (n.places)
                    fail(at, "places declared twice in net '" + n.name + "'");
                expect(":");
                n.places.emplace();
                do {
                    const Token p = ident("a place name");
                    n.places->push_back({p.text, p.loc});
                } while (accept(","));
                expect(";");
            } else if (is_word("transition")) {
                RawTransition t;
                t.loc = peek().loc;
                ++pos_;
                t.name = ident("a transition name").text;
                expect("{");
                while (!accept("}")) {
                    if (is_word("in") || is_word("out")) {
                        const bool in = peek().text == "in";
                        ++pos_;
                        expect(":");
                        auto arcs = entries("->");
                        auto& dst = in ? t.in : t.out;
                        dst.insert(dst.end(), arcs.begin(), arcs.end());
                        expect(";");
                    } else {
                        fail(peek().loc, "expected 'in', 'out' or '}'" + found());
                    }
                }
                n.transitions.push_back(std::move(t));
            } else if (is_word("marking")) {
                RawMarking m;
                m.loc = peek().loc;
                ++pos_;
                m.name = ident("a marking name").text;
                expect("{");
                m.entries = entries(":");
                expect("}");
                n.markings.push_back(std::move(m));
            } else {
                fail(peek().loc, "expected 'signature', 'places', 'transition', 'marking' or '}'" + found());
            }
        }
        return n;
    }

    RawEquation equation() {
        RawEquation e;
        e.loc = expect_word("equation").loc;
        e.name = ident("an equation name").text;
        expect_word("group");
        const Token g = ident("a group");
        if (g.text != "Z") {
            if (g.text == "Q" || g.text == "R" || g.text == "C")
                fail(g.loc, "group " + g.text + " is not cyclic; stability is only decidable over Z and Z mod n");
            fail(g.loc, "unknown group '" + g.text + "' (expected Z or Z mod n)");
        }
        if (is_word("mod")) {
            ++pos_;
            const Loc at = peek().loc;
            const std::int64_t o = integer("a group order");
            if (o < 1)
                fail(at, "group order must be at least 1");
            e.group = CyclicGroup::modulo(static_cast<std::uint64_t>(o));
        }
        expect("{");
        e.entries = entries(":");
        expect("}");
        if (is("="))
            fail(peek().loc, "inhomogeneous equations are not supported; the right-hand side must be 0");
        return e;
    }

    MinskyMachine minsky() {
        MinskyMachine m;
        expect_word("minsky");
        m.name = ident("a machine name").text;
        expect("{");
        expect_word("registers");
        expect(":");
        const Loc rat = peek().loc;
        const std::int64_t regs = integer("a register count");
        if (regs < 1)
            fail(rat, "a machine needs at least one register");
        m.registers = static_cast<std::size_t>(regs);
        expect(";");
        while (!accept("}")) {
            const Loc at = peek().loc;
            const std::int64_t label = integer("an instruction number");
            if (label != static_cast<std::int64_t>(m.instructions.size()) + 1)
                fail(at, "instructions must be numbered 1, 2, ... in order");
            expect(":");
            const Token op = ident("'inc', 'jz' or 'halt'");
            auto nat = [&](const char* what) {
                const Loc l = peek().loc;
                const std::int64_t v = integer(what);
                if (v < 1)
                    fail(l, std::string(what) + " must be positive");
                return static_cast<std::size_t>(v);
            };
            if (op.text == "inc") {
                const auto r = nat("a register");
                expect("->");
                m.instructions.push_back(Inc{r, nat("a target")});
            } else if (op.text == "jz") {
                const auto r = nat("a register");
                expect("?");
                const auto z1 = nat("a target");
                expect(":");
                m.instructions.push_back(Jz{r, z1, nat("a target")});
            } else if (op.text == "halt") {
                m.instructions.push_back(Halt{});
            } else {
                fail(op.loc, "unknown instruction '" + op.text + "'");
            }
            expect(";");
        }
        return m;
    }

    std::size_t pos_ = 0;

private:
    std::vector<Token> toks_;
};

// ---- resolution

enum class Mode { Net, Equation, Ground };

Term resolve(const RawTerm& raw, const Signature& sig, Mode mode) {
    const Symbol* s = sig.find(raw.name);
    if (raw.call) {
        if (!s)
            fail(raw.loc, "unknown symbol '" + raw.name + "'");
        if (s->arity != raw.args.size())
            fail(raw.loc, "symbol '" + raw.name + "' expects " + std::to_string(s->arity) + " argument(s), got " +
                              std::to_string(raw.args.size()));
        std::vector<Term> args;
        for (const auto& a : raw.args)
            args.push_back(resolve(a, sig, mode));
        return Term::app(raw.name, std::move(args));
    }
    if (s) {
        if (s->arity != 0)
            fail(raw.loc, "symbol '" + raw.name + "' expects " + std::to_string(s->arity) + " argument(s), got 0");
        return Term::app(raw.name);
    }
    const bool upper = std::isupper(static_cast<unsigned char>(raw.name[0]));
    switch (mode) {
    case Mode::Ground:
        if (upper)
            fail(raw.loc, "tokens must be ground; '" + raw.name + "' is a variable");
        break;
    case Mode::Net:
        if (upper)
            return Term::var(raw.name);
        break;
    case Mode::Equation:
        return Term::var(raw.name);
    }
    fail(raw.loc, "unknown symbol '" + raw.name + "'");
}

std::optional<std::size_t> place_index(const Places& places, const std::string& name) {
    for (std::size_t i = 0; i < places->size(); ++i)
        if ((*places)[i] == name)
            return i;
    return std::nullopt;
}

PVector resolve_entries(const std::vector<RawEntry>& entries, const Places& places, const CyclicGroup& group,
                        const Signature& sig, Mode mode, bool positive) {
    PVector out(places, group);
    std::set<std::string> seen;
    for (const auto& e : entries) {
        auto i = place_index(places, e.place);
        if (!i)
            fail(e.loc, "unknown place '" + e.place + "'");
        if (!seen.insert(e.place).second)
            fail(e.loc, "place '" + e.place + "' listed twice");
        for (const auto& m : e.poly.monos) {
            if (positive && m.coeff <= 0)
                fail(m.term.loc, "multiplicities must be positive");
            out.add_term(*i, resolve(m.term, sig, mode), m.coeff);
        }
    }
    return out;
}

Signature build_signature(const std::optional<RawSignature>& raw) {
    if (!raw)
        return Signature{};
    try {
        return Signature(raw->symbols);
    } catch (const UsageError& e) {
        fail(raw->loc, e.what());
    }
}

NetDecl build_net(const RawNet& raw, const Signature& sig) {
    if (!raw.places || raw.places->empty())
        fail(raw.loc, "net '" + raw.name + "' declares no places");
    PlaceList names;
    std::set<std::string> seen;
    for (const auto& [p, at] : *raw.places) {
        if (!seen.insert(p).second)
            fail(at, "place '" + p + "' declared twice");
        names.push_back(p);
    }
    const Places places = make_places(names);
    const auto Z = CyclicGroup::integers();

    NetDecl out{raw.name, NetStructure{sig, places, {}}, {}};
    std::set<std::string> tnames;
    for (const auto& t : raw.transitions) {
        if (!tnames.insert(t.name).second)
            fail(t.loc, "transition '" + t.name + "' declared twice");
        PVector in = resolve_entries(t.in, places, Z, sig, Mode::Net, true);
        PVector out_v = resolve_entries(t.out, places, Z, sig, Mode::Net, true);
        try {
            out.structure.transitions.emplace_back(t.name, std::move(in), std::move(out_v));
        } catch (const UsageError& e) {
            fail(t.loc, e.what());
        }
    }
    std::set<std::string> mnames;
    for (const auto& m : raw.markings) {
        if (!mnames.insert(m.name).second)
            fail(m.loc, "marking '" + m.name + "' declared twice");
        out.markings.push_back({m.name, resolve_entries(m.entries, places, Z, sig, Mode::Ground, true)});
    }
    return out;
}

HomogeneousEquation build_equation(const RawEquation& raw, const Signature& sig, const std::vector<NetDecl>& nets) {
    std::set<std::string> mentioned;
    PlaceList own;
    for (const auto& e : raw.entries)
        if (mentioned.insert(e.place).second)
            own.push_back(e.place);

    Places places;
    if (nets.empty()) {
        if (own.empty())
            fail(raw.loc, "equation '" + raw.name + "' mentions no places");
        places = make_places(own);
    } else {
        for (const auto& n : nets) {
            bool all = true;
            for (const auto& p : own)
                all = all && place_index(n.structure.places, p).has_value();
            if (all) {
                places = n.structure.places;
                break;
            }
        }
        if (!places)
            for (const auto& e : raw.entries) {
                bool known = false;
                for (const auto& n : nets)
                    known = known || place_index(n.structure.places, e.place).has_value();
                if (!known)
                    fail(e.loc, "unknown place '" + e.place + "'");
            }
        if (!places)
            fail(raw.loc, "equation '" + raw.name + "' mixes places of different nets");
    }
    PVector k = resolve_entries(raw.entries, places, raw.group, sig, Mode::Equation, false);
    try {
        return HomogeneousEquation(raw.name, std::move(k));
    } catch (const UsageError& e) {
        fail(raw.loc, e.what());
    }
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? sep : "") + xs[i];
    return out;
}

std::string entries_str(const PVector& v, const char* sep) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].empty())
            parts.push_back((*v.places())[i] + sep + v[i].str());
    return join(parts, ", ");
}

} // namespace

Net NetDecl::with_marking(const std::optional<std::string>& name) const {
    if (name)
        return Net{structure, marking(*name)};
    if (!markings.empty())
        return Net{structure, markings.front().marking};
    return Net{structure, PVector(structure.places, CyclicGroup::integers())};
}

const PVector& NetDecl::marking(const std::string& name) const {
    for (const auto& m : markings)
        if (m.name == name)
            return m.marking;
    throw UsageError("net '" + this->name + "' has no marking '" + name + "'");
}

const NetDecl& Model::net(const std::optional<std::string>& name) const {
    if (!name) {
        if (nets.size() != 1)
            throw UsageError(nets.empty() ? "model declares no net" : "model declares several nets; pick one");
        return nets.front();
    }
    for (const auto& n : nets)
        if (n.name == *name)
            return n;
    throw UsageError("unknown net '" + *name + "'");
}

const HomogeneousEquation& Model::equation(const std::string& name) const {
    for (const auto& e : equations)
        if (e.name() == name)
            return e;
    throw UsageError("unknown equation '" + name + "'");
}

const MinskyMachine& Model::machine(const std::optional<std::string>& name) const {
    if (!name) {
        if (machines.size() != 1)
            throw UsageError(machines.empty() ? "model declares no machine" : "model declares several machines; pick one");
        return machines.front();
    }
    for (const auto& m : machines)
        if (m.name == *name)
            return m;
    throw UsageError("unknown machine '" + *name + "'");
}

Model parse_model(std::string_view text) {
    Parser p(text);
    std::optional<RawSignature> raw_sig;
    std::vector<RawNet> raw_nets;
    std::vector<RawEquation> raw_eqs;
    Model model;
    std::set<std::string> net_names, eq_names, machine_names;

    while (!p.at_end()) {
        const Token& head = p.peek();
        if (p.is_word("signature")) {
            auto s = p.signature();
            if (raw_sig)
                fail(head.loc, "only one signature per file");
            raw_sig = std::move(s);
        } else if (p.is_word("net")) {
            const Loc at = head.loc;
            raw_nets.push_back(p.net(raw_sig));
            if (!net_names.insert(raw_nets.back().name).second)
                fail(at, "net '" + raw_nets.back().name + "' declared twice");
        } else if (p.is_word("equation")) {
            const Loc at = head.loc;
            raw_eqs.push_back(p.equation());
            if (!eq_names.insert(raw_eqs.back().name).second)
                fail(at, "equation '" + raw_eqs.back().name + "' declared twice");
        } else if (p.is_word("minsky")) {
            const Loc at = head.loc;
            model.machines.push_back(p.minsky());
            if (!machine_names.insert(model.machines.back().name).second)
                fail(at, "machine '" + model.machines.back().name + "' declared twice");
            try {
                model.machines.back().validate();
            } catch (const UsageError& e) {
                fail(at, e.what());
            }
        } else {
            fail(head.loc, "expected 'signature', 'net', 'equation' or 'minsky'" + p.found());
        }
    }

    if (!raw_sig && (!raw_nets.empty() || !raw_eqs.empty()))
        fail(!raw_nets.empty() ? raw_nets.front().loc : raw_eqs.front().loc, "missing signature declaration");
    model.signature = build_signature(raw_sig);
    for (const auto& n : raw_nets)
        model.nets.push_back(build_net(n, model.signature));
    for (const auto& e : raw_eqs)
        model.equations.push_back(build_equation(e, model.signature, model.nets));
    return model;
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read model file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string print_model(const Model& m) {
    std::ostringstream out;
    if (!m.signature.empty()) {
        std::vector<std::string> syms;
        for (const auto& s : m.signature.symbols())
            syms.push_back(s.name + "/" + std::to_string(s.arity));
        out << "signature: " << join(syms, ", ") << ";\n";
    }
    for (const auto& n : m.nets) {
        out << "\nnet " << n.name << " {\n";
        out << "  places: " << join(*n.structure.places, ", ") << ";\n";
        for (const auto& t : n.structure.transitions) {
            out << "  transition " << t.name() << " {";
            if (!t.consume().is_empty())
                out << " in: " << entries_str(t.consume(), " -> ") << ";";
            if (!t.produce().is_empty())
                out << " out: " << entries_str(t.produce(), " -> ") << ";";
            out << " }\n";
        }
        for (const auto& mk : n.markings)
            out << "  marking " << mk.name << " { " << entries_str(mk.marking, ": ") << " }\n";
        out << "}\n";
    }
    if (!m.equations.empty())
        out << "\n";
    for (const auto& e : m.equations) {
        out << "equation " << e.name() << " group Z";
        if (e.group().is_finite())
            out << " mod " << e.group().order();
        out << " { " << entries_str(e.k(), ": ") << " }\n";
    }
    for (const auto& mm : m.machines) {
        out << "\nminsky " << mm.name << " {\n  registers: " << mm.registers << ";\n";
        for (std::size_t i = 0; i < mm.instructions.size(); ++i) {
            out << "  " << i + 1 << ": ";
            const auto& ins = mm.instructions[i];
            if (auto* inc = std::get_if<Inc>(&ins))
                out << "inc " << inc->reg << " -> " << inc->next;
            else if (auto* jz = std::get_if<Jz>(&ins))
                out << "jz " << jz->reg << " ? " << jz->if_positive << " : " << jz->if_zero;
            else
                out << "halt";
            out << ";\n";
        }
        out << "}\n";
    }
    return out.str();
}

Term parse_term(std::string_view text, const Signature& sig) {
    Parser p(text);
    RawTerm raw = p.term();
    if (!p.at_end())
        fail(p.peek().loc, "trailing input after term");
    return resolve(raw, sig, Mode::Net);
}

namespace {

Assignment parse_bindings(Parser& p, const Signature& sig) {
    Assignment out;
    if (p.at_end())
        return out;
    do {
        const Token v = p.ident("a variable");
        if (!std::isupper(static_cast<unsigned char>(v.text[0])) || sig.find(v.text))
            fail(v.loc, "'" + v.text + "' is not a variable");
        if (out.binds(v.text))
            fail(v.loc, "variable '" + v.text + "' bound twice");
        p.expect("=");
        out.bind(v.text, resolve(p.term(), sig, Mode::Ground));
    } while (p.accept(","));
    if (!p.at_end())
        fail(p.peek().loc, "expected ',' or end of input" + p.found());
    return out;
}

} // namespace

Assignment parse_assignment(std::string_view text, const Signature& sig) {
    Parser p(text);
    return parse_bindings(p, sig);
}

ScriptStep parse_step(std::string_view text, const Signature& sig) {
    Parser p(text);
    const std::string name = p.ident("a transition name").text;
    if (p.at_end())
        return {name, Assignment{}};
    p.expect(":");
    return {name, parse_bindings(p, sig)};
}

PVector parse_marking(std::string_view text, const Signature& sig, const Places& places) {
    Parser p(text);
    p.expect("{");
    auto entries = p.entries(":");
    p.expect("}");
    if (!p.at_end())
        fail(p.peek().loc, "trailing input after marking");
    return resolve_entries(entries, places, CyclicGroup::integers(), sig, Mode::Ground, true);
}

} // namespace apnv
