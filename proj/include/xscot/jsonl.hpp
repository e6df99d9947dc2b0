#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace xscot {

/// Calls fn(line_number, parsed) for every non-blank line. Parse failures
/// and exceptions thrown by fn are reported as SchemaViolation with the
/// file name and 1-based line number prepended.
void for_each_jsonl_line(const std::filesystem::path& path,
                         const std::function<void(std::size_t, const nlohmann::json&)>& fn);

/// Writes one compact JSON object per line, LF-terminated.
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<nlohmann::ordered_json>& records);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace xscot
