#include "xscot/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "xscot/errors.hpp"

namespace xscot {

void for_each_jsonl_line(const std::filesystem::path& path,
                         const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = line.find_first_not_of(" \t") == std::string::npos;
    if (blank) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::SchemaViolation,
           path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      fn(line_no, parsed);
    } catch (const Error& e) {
      throw Error(e.code(), path.filename().string() + ":" + std::to_string(line_no) +
                                ": " + e.message());
    } catch (const std::exception& e) {
      fail(Errc::SchemaViolation,
           path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<nlohmann::ordered_json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::SinkUnavailable, "cannot write " + path.string());
  for (const auto& record : records) {
    out << record.dump() << '\n';
  }
  out.flush();
  if (!out) fail(Errc::SinkUnavailable, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::SinkUnavailable, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) fail(Errc::SinkUnavailable, "write failed for " + path.string());
}

}  // namespace xscot
