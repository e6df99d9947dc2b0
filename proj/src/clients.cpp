#ifdef XSCOT_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "xscot/clients.hpp"

#include <json.hpp>

#include "xscot/core.hpp"
#include "xscot/unicode.hpp"

namespace xscot {

std::string percent_encode(std::string_view text) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      int hi = nibble(text[i + 1]);
      int lo = nibble(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi << 4 | lo));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

std::string MockTranslator::translate(std::string_view text, std::string_view,
                                      std::string_view) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>('a' + (c - 'a' + 1) % 26);
    else if (c >= 'A' && c <= 'Z') c = static_cast<char>('A' + (c - 'A' + 1) % 26);
  }
  return out;
}

std::string MockSynthesizer::synthesize(std::string_view text, std::string_view lang,
                                        std::string_view voice) {
  std::string out = "mock://";
  out += lang;
  out += '/';
  out += voice;
  out += "?text=";
  out += percent_encode(text);
  return out;
}

namespace {

std::string decode_mock_audio(std::string_view audio_ref) {
  if (!audio_ref.starts_with("mock://")) {
    throw ClientError("not a mock audio reference: " + std::string(audio_ref), false);
  }
  auto query = audio_ref.find("?text=");
  if (query == std::string_view::npos) {
    throw ClientError("mock audio reference lacks text payload", false);
  }
  return percent_decode(audio_ref.substr(query + 6));
}

std::vector<std::string> wer_units(std::string_view text, bool character_mode) {
  std::vector<std::string> units;
  if (character_mode) {
    for (const Codepoint& cp : decode_utf8(text)) {
      if (!is_space_cp(cp.value)) units.push_back(encode_utf8(cp.value));
    }
    return units;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                               text[i] == '\r')) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\n' &&
           text[i] != '\r') {
      ++i;
    }
    if (i > start) units.push_back(std::string(text.substr(start, i - start)));
  }
  return units;
}

}  // namespace

std::string MockRecognizer::transcribe(std::string_view audio_ref, std::string_view) {
  return decode_mock_audio(audio_ref);
}

std::string ScriptedRecognizer::transcribe(std::string_view audio_ref,
                                           std::string_view lang) {
  std::string text = decode_mock_audio(audio_ref);
  auto it = wer_by_text_.find(text);
  if (it == wer_by_text_.end()) return text;

  const bool character_mode = is_cjk_language(lang);
  std::vector<std::string> units = wer_units(text, character_mode);
  if (units.empty()) return text;

  auto corrupt = static_cast<std::size_t>(it->second * static_cast<double>(units.size()));
  corrupt = std::min(corrupt, units.size());
  for (std::size_t i = 0; i < corrupt; ++i) {
    // Out-of-vocabulary stand-in, so the alignment cannot shift.
    units[i] = character_mode ? "◆" : "<unk>";
  }
  std::string out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i > 0 && !character_mode) out += ' ';
    out += units[i];
  }
  return out;
}

std::string ScriptedJudgeClient::judge(std::string_view sample_id, std::string_view,
                                       std::size_t attempt) {
  auto it = replies_.find(std::string(sample_id));
  if (it == replies_.end()) return "0";
  if (attempt >= 2 && !it->second.retry_reply.empty()) return it->second.retry_reply;
  return it->second.reply;
}

namespace {

nlohmann::json post_json(const RestEndpoint& endpoint, const std::string& path,
                         const nlohmann::json& body) {
  httplib::Client client(endpoint.base_url);
  client.set_connection_timeout(endpoint.timeout_seconds);
  client.set_read_timeout(endpoint.timeout_seconds);
  httplib::Headers headers;
  if (!endpoint.token.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.token);
  }

  httplib::Result res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw ClientError("request to " + endpoint.base_url + path +
                          " failed: " + httplib::to_string(res.error()),
                      true);
  }
  if (res->status == 429 || res->status >= 500) {
    throw ClientError(endpoint.base_url + path + " returned " + std::to_string(res->status),
                      true);
  }
  if (res->status < 200 || res->status >= 300) {
    throw ClientError(endpoint.base_url + path + " returned " + std::to_string(res->status) +
                          ": " + res->body,
                      false);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw ClientError("invalid JSON from " + endpoint.base_url + path + ": " + e.what(),
                      false);
  }
}

std::string require_string(const nlohmann::json& j, const char* key,
                           const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ClientError(where + " reply lacks string field '" + key + "'", false);
  }
  return j[key].get<std::string>();
}

}  // namespace

std::string RestTranslator::translate(std::string_view text, std::string_view source_lang,
                                      std::string_view target_lang) {
  nlohmann::json body = {{"text", text}, {"source_lang", source_lang},
                         {"target_lang", target_lang}};
  return require_string(post_json(endpoint_, "/v1/translate", body), "translation",
                        "translator");
}

std::string RestSynthesizer::synthesize(std::string_view text, std::string_view lang,
                                        std::string_view voice) {
  nlohmann::json body = {{"text", text}, {"lang", lang}, {"voice", voice}};
  return require_string(post_json(endpoint_, "/v1/synthesize", body), "audio_ref",
                        "synthesizer");
}

std::string RestRecognizer::transcribe(std::string_view audio_ref, std::string_view lang) {
  nlohmann::json body = {{"audio_ref", audio_ref}, {"lang", lang}};
  return require_string(post_json(endpoint_, "/v1/transcribe", body), "text", "recognizer");
}

std::string RestJudgeClient::judge(std::string_view, std::string_view prompt, std::size_t) {
  nlohmann::json body = {
      {"model", model_},
      {"temperature", 0},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  nlohmann::json reply = post_json(endpoint_, "/v1/chat/completions", body);
  if (!reply.contains("choices") || !reply["choices"].is_array() ||
      reply["choices"].empty()) {
    throw ClientError("judge reply has no choices", false);
  }
  const auto& message = reply["choices"][0];
  if (!message.contains("message") || !message["message"].contains("content")) {
    throw ClientError("judge reply has no message content", false);
  }
  return message["message"]["content"].get<std::string>();
}

}  // namespace xscot
