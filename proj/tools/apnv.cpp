// Command-line front end. Talks to the toolkit only through the C API and
// renders the JSON reports as text unless --json is given.

#include "apnv/apnv.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <memory>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

struct CString {
    char* p = nullptr;
    ~CString() { apnv_string_free(p); }
};

std::string nu_str(const json& nu) {
    std::string out = "(";
    bool first = true;
    for (auto& [k, v] : nu.items()) {
        out += (first ? "" : ", ") + k + "=" + std::to_string(v.get<long long>());
        first = false;
    }
    return out + ")";
}

std::string poly_str(const json& terms) {
    if (terms.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms) {
        long long c = t["coeff"].get<long long>();
        out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        out += std::to_string(c < 0 ? -c : c) + " * " + t["term"].get<std::string>();
        first = false;
    }
    return out;
}

std::string map_str(const json& m, const char* sep) {
    std::string out = "{ ";
    bool first = true;
    for (auto& [k, v] : m.items()) {
        out += (first ? "" : ", ") + k + sep + v.get<std::string>();
        first = false;
    }
    return out + (first ? "}" : " }");
}

void render(const json& r, std::ostream& os) {
    const std::string cmd = r.value("command", "");
    if (r.value("verdict", "") == "error") {
        os << "error: " << r.value("error", "unknown error") << "\n";
        return;
    }
    if (cmd == "check-stability") {
        os << "equation " << r["equation"].get<std::string>() << " over " << r["group"].get<std::string>() << "\n";
        for (const auto& t : r["results"]) {
            os << "  " << t["transition"].get<std::string>() << ": " << t["verdict"].get<std::string>()
               << "  (spanning set " << t["spanning_set_size"] << ", bound " << t["bound"] << ", derived "
               << t["derived_count"] << ")\n";
            if (t.contains("witness")) {
                const auto& w = t["witness"];
                os << "    delta       " << map_str(w["delta"], " -> ") << "\n";
                os << "    residual    " << poly_str(w["residual"]) << "\n";
                os << "    firing mode " << map_str(w["realization"], " -> ") << "\n";
                os << "    marking     " << map_str(w["marking"], ": ") << "\n";
                os << "    successor   " << map_str(w["successor"], ": ") << "\n";
            }
        }
    } else if (cmd == "check-invariant") {
        for (const auto& t : r["results"])
            os << t["transition"].get<std::string>() << ": k . t_delta = " << poly_str(t["residual"]) << "\n";
    } else if (cmd == "satisfies") {
        os << "k . m = " << poly_str(r["value"]) << "  (" << r["verdict"].get<std::string>() << ")\n";
    } else if (cmd == "simulate") {
        if (r.contains("trajectory")) {
            std::size_t i = 0;
            for (const auto& m : r["trajectory"])
                os << "m" << i++ << " = " << map_str(m, ": ") << "\n";
        } else {
            os << "blocked at step " << r["failed_step"] << ": " << r["reason"].get<std::string>() << "\n";
        }
    } else if (cmd == "zeros") {
        os << "equation " << r["equation"].get<std::string>() << " over " << r["group"].get<std::string>()
           << ", bound " << r["bound"] << ", " << r["size"] << " zeros, " << r["minimal_size"] << " minimal\n";
        for (const auto& z : r["minimal"])
            os << "  " << nu_str(z["nu"]) << "  rho = " << (z["result"].is_null() ? "-" : z["result"].get<std::string>())
               << "\n";
    } else if (cmd == "derive") {
        for (const auto& t : r["results"]) {
            os << t["transition"].get<std::string>() << ":\n";
            for (const auto& d : t["derived"])
                os << "  " << map_str(d["delta"], " -> ") << "   residual " << poly_str(d["residual"]) << "\n";
        }
    } else if (cmd == "validity") {
        os << r["verdict"].get<std::string>() << " (" << r.value("basis", "") << ")\n";
        if (r.contains("stability_note"))
            os << "  " << r["stability_note"].get<std::string>() << "\n";
        if (r.contains("run")) {
            for (const auto& s : r["run"])
                os << "  fire " << s["transition"].get<std::string>() << " " << map_str(s["sigma"], " -> ") << "\n";
            os << "  reaches " << map_str(r["marking"], ": ") << "\n";
        }
    } else if (cmd == "encode-minsky") {
        for (const auto& w : r["warnings"])
            os << "warning: " << w.get<std::string>() << "\n";
        os << r["model"].get<std::string>();
        return;
    }
    if (r.contains("statistics") && r["statistics"].contains("wall_ms"))
        os << "time: " << r["statistics"]["wall_ms"].get<double>() << " ms\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability and validity checks for homogeneous equations of algebraic Petri nets"};
    app.set_version_flag("--version", std::string(apnv_version()));

    std::string command, model_path, net, equation, transition, marking, machine;
    std::vector<std::string> steps;
    bool as_json = false, timing = false;
    long long term_depth = -1, max_tokens = -1, search_depth = -1, cap = -1;

    app.add_option("command", command, "check-stability | check-invariant | satisfies | simulate | zeros | derive | "
                                       "validity | encode-minsky")
        ->required();
    app.add_option("--model,-m", model_path, "model file")->required()->check(CLI::ExistingFile);
    app.add_option("--net", net, "net name (default: the only net)");
    app.add_option("--equation,-e", equation, "equation name");
    app.add_option("--transition,-t", transition, "restrict to one transition");
    app.add_option("--marking", marking, "named marking (default: the first one)");
    app.add_option("--machine", machine, "Minsky machine name");
    app.add_option("--step", steps, "simulation step, e.g. \"t: W = c, Y = c\" (repeatable)");
    app.add_option("--term-depth", term_depth, "ground-term depth for oracle searches");
    app.add_option("--max-tokens", max_tokens, "copies of one token per place in oracle searches");
    app.add_option("--search-depth", search_depth, "reachability depth");
    app.add_option("--cap", cap, "candidate cap before reporting exhaustion");
    app.add_flag("--json", as_json, "print the JSON report");
    app.add_flag("--timing", timing, "include wall time in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return e.get_exit_code() == 0 ? 0 : (rc == 0 ? 0 : 2);
    }

    apnv_model* raw = nullptr;
    CString err;
    if (apnv_model_load_file(model_path.c_str(), &raw, &err.p) != APNV_OK) {
        std::cerr << model_path << ":" << (err.p ? err.p : "cannot load model") << "\n";
        return 2;
    }
    std::unique_ptr<apnv_model, void (*)(apnv_model*)> model(raw, apnv_model_free);

    json opts = json::object();
    auto put = [&](const char* k, const std::string& v) {
        if (!v.empty())
            opts[k] = v;
    };
    put("net", net);
    put("equation", equation);
    put("transition", transition);
    put("marking", marking);
    put("machine", machine);
    if (!steps.empty())
        opts["steps"] = steps;
    auto num = [&](const char* k, long long v) {
        if (v >= 0)
            opts[k] = v;
    };
    num("term_depth", term_depth);
    num("max_tokens", max_tokens);
    num("search_depth", search_depth);
    num("cap", cap);
    if (timing)
        opts["timing"] = true;

    CString report;
    const int rc = apnv_run_command(model.get(), command.c_str(), opts.dump().c_str(), &report.p);
    if (!report.p) {
        std::cerr << "error: command failed\n";
        return 2;
    }
    if (as_json) {
        std::cout << report.p << "\n";
    } else {
        const json r = json::parse(report.p);
        render(r, r.value("verdict", "") == "error" ? std::cerr : std::cout);
    }
    return rc < 0 ? 2 : rc;
}
