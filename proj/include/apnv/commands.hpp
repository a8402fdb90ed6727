#pragma once

// Command dispatch behind the CLI and the C API. Every command returns an
// exit code and a JSON report with a fixed key order.
//
// Exit codes: 0 stable / valid / holds, 1 unstable / violated, 2 usage error,
// 3 bounds exhausted or unknown.

#include "apnv/model.hpp"

#include <json.hpp>

#include <string>

namespace apnv {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kReportSchema = "apnv-report/1";

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kUnknown = 3 };

struct CommandResult {
    int exit_code = kOk;
    nlohmann::ordered_json report;
};

/// `options` keys: net, equation, transition, marking, machine, steps (array
/// of "t: X = term, ..."), term_depth, max_tokens, search_depth, cap, timing.
/// Usage errors are reported with exit code 2 rather than thrown.
CommandResult run_command(const Model& model, const std::string& command, const nlohmann::json& options);

const std::vector<std::string>& command_names();

} // namespace apnv
