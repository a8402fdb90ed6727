#include "apnv/apnv.h"

#include "apnv/commands.hpp"
#include "apnv/model.hpp"

#include <cstdlib>
#include <cstring>

struct apnv_model {
    apnv::Model model;
};

namespace {

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set(char** slot, const std::string& s) {
    if (slot)
        *slot = dup(s);
}

template <class F>
apnv_status load(F&& make, apnv_model** out, char** error) {
    if (error)
        *error = nullptr;
    if (!out)
        return APNV_ERR_ARGUMENT;
    *out = nullptr;
    try {
        *out = new apnv_model{make()};
        return APNV_OK;
    } catch (const apnv::ParseError& e) {
        set(error, e.what());
        return APNV_ERR_PARSE;
    } catch (const apnv::UsageError& e) {
        set(error, e.what());
        return APNV_ERR_IO;
    } catch (const std::exception& e) {
        set(error, e.what());
        return APNV_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

apnv_status apnv_model_parse(const char* text, apnv_model** out, char** error) {
    if (!text)
        return APNV_ERR_ARGUMENT;
    return load([&] { return apnv::parse_model(text); }, out, error);
}

apnv_status apnv_model_load_file(const char* path, apnv_model** out, char** error) {
    if (!path)
        return APNV_ERR_ARGUMENT;
    return load([&] { return apnv::load_model_file(path); }, out, error);
}

void apnv_model_free(apnv_model* model) { delete model; }

apnv_status apnv_model_print(const apnv_model* model, char** text) {
    if (!model || !text)
        return APNV_ERR_ARGUMENT;
    try {
        *text = dup(apnv::print_model(model->model));
        return APNV_OK;
    } catch (const std::exception&) {
        return APNV_ERR_INTERNAL;
    }
}

int apnv_run_command(const apnv_model* model, const char* command, const char* options_json, char** report) {
    if (report)
        *report = nullptr;
    if (!model || !command || !report)
        return -1;
    try {
        nlohmann::json options = nlohmann::json::object();
        if (options_json && *options_json)
            options = nlohmann::json::parse(options_json);
        auto r = apnv::run_command(model->model, command, options);
        *report = dup(r.report.dump(2));
        return r.exit_code;
    } catch (const nlohmann::json::exception& e) {
        nlohmann::ordered_json err = {{"command", command}, {"verdict", "error"},
                                      {"error", std::string("invalid options JSON: ") + e.what()}};
        *report = dup(err.dump(2));
        return apnv::kUsage;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err = {{"command", command}, {"verdict", "error"}, {"error", e.what()}};
        *report = dup(err.dump(2));
        return apnv::kUsage;
    }
}

void apnv_string_free(char* s) { std::free(s); }

const char* apnv_version(void) { return apnv::kVersion; }

} // extern "C"
