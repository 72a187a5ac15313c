#pragma once

// Task dispatch for a parsed RunConfig and rendering of its artifacts.

#include <string>

#include "omcool/config.hpp"

namespace omcool {

inline constexpr const char* kToolName = "omcool";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunArtifacts {
    std::string csv;           // header row plus data rows
    std::string summary_json;  // summary document, including the config echo
    std::string json;          // single document: summary plus the table
};

// Runs the configured task. Physics and numerical failures propagate as Error.
RunArtifacts run(const RunConfig& config);

// Machine-readable error document {"error": {"kind", "message", "exit_code"}}.
std::string error_json(const std::string& kind, const std::string& message, int exit_code);

}  // namespace omcool
