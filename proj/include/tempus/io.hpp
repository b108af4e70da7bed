#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tempus::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);

// Writes via a temporary sibling file and rename, so readers never observe a
// partially written artifact.
void write_file_atomic(const fs::path& path, std::string_view content);

void write_json(const fs::path& path, const nlohmann::json& value);
nlohmann::json read_json(const fs::path& path);

std::vector<nlohmann::json> read_jsonl(const fs::path& path);
void write_jsonl(const fs::path& path, const std::vector<nlohmann::json>& records);

}  // namespace tempus::io
