#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qmemcap/types.hpp"

namespace qmemcap {

inline constexpr const char* kSchemaVersion = "1";

// Writes to a sibling temporary file and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Two-space indented dump with a "schema" key added to objects that lack one.
std::string dump_report(nlohmann::json j);

nlohmann::json error_json(ErrorKind kind, const std::string& message);

// 2 for bad input, 3 for numerical failures
int exit_code_for(ErrorKind kind);

}  // namespace qmemcap
