#include "xscot/core.hpp"

#include <algorithm>
#include <set>

#include "xscot/errors.hpp"
#include "xscot/jsonl.hpp"
#include "xscot/unicode.hpp"

namespace xscot {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::TargetInstruction: return "target_instruction";
    case Role::CoreInstruction: return "core_instruction";
    case Role::CoreResponse: return "core_response";
    case Role::TargetResponse: return "target_response";
  }
  return "";
}

std::optional<Role> role_from_name(std::string_view name) {
  for (Role role : kRoleOrder) {
    if (role_name(role) == name) return role;
  }
  return std::nullopt;
}

bool is_cjk_language(std::string_view lang) {
  auto dash = lang.find('-');
  std::string_view primary = dash == std::string_view::npos ? lang : lang.substr(0, dash);
  return primary == "ja" || primary == "zh" || primary == "ko";
}

std::string_view segment_language(Role role, const LanguagePair& pair) {
  switch (role) {
    case Role::TargetInstruction:
    case Role::TargetResponse:
      return pair.target;
    case Role::CoreInstruction:
    case Role::CoreResponse:
      return pair.core;
  }
  return pair.core;
}

void validate_language_pair(const LanguagePair& pair) {
  auto check = [](std::string_view code) {
    if (code.empty()) fail(Errc::InvalidLanguagePair, "empty language code");
    auto dash = code.find('-');
    std::string_view primary = dash == std::string_view::npos ? code : code.substr(0, dash);
    if (primary.empty()) fail(Errc::InvalidLanguagePair, "empty primary subtag in '" + std::string(code) + "'");
    for (char c : primary) {
      if (c < 'a' || c > 'z') {
        fail(Errc::InvalidLanguagePair,
             "primary subtag must be lowercase letters: '" + std::string(code) + "'");
      }
    }
  };
  check(pair.core);
  check(pair.target);
  if (pair.core == pair.target) {
    fail(Errc::InvalidLanguagePair, "core and target language must differ: '" + pair.core + "'");
  }
}

std::string_view MarkerSet::marker_for(Role role) const {
  switch (role) {
    case Role::TargetInstruction: return target_instruction;
    case Role::CoreInstruction: return core_instruction;
    case Role::CoreResponse: return core_response;
    case Role::TargetResponse: return target_response;
  }
  return target_response;
}

void MarkerSet::validate() const {
  std::array<std::string_view, 4> all = {target_instruction, core_instruction, core_response,
                                         target_response};
  for (std::string_view m : all) {
    if (m.empty()) fail(Errc::InvalidMarkerSet, "markers must be non-empty");
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (i == j) continue;
      if (all[i] == all[j]) {
        fail(Errc::InvalidMarkerSet, "markers must be distinct: '" + std::string(all[i]) + "'");
      }
      if (all[j].find(all[i]) != std::string_view::npos) {
        fail(Errc::InvalidMarkerSet, "marker '" + std::string(all[i]) +
                                         "' is a substring of '" + std::string(all[j]) + "'");
      }
    }
  }
}

std::string_view transcript_mode_name(TranscriptMode mode) {
  switch (mode) {
    case TranscriptMode::XsCot: return "xs-cot";
    case TranscriptMode::DirectSft: return "direct-sft";
    case TranscriptMode::SemiImplicit: return "semi-implicit";
  }
  return "";
}

std::optional<TranscriptMode> transcript_mode_from_name(std::string_view name) {
  if (name == "xs-cot") return TranscriptMode::XsCot;
  if (name == "direct-sft") return TranscriptMode::DirectSft;
  if (name == "semi-implicit") return TranscriptMode::SemiImplicit;
  return std::nullopt;
}

namespace {

std::vector<Role> roles_for_mode(TranscriptMode mode) {
  if (mode == TranscriptMode::DirectSft) return {Role::TargetResponse};
  return {kRoleOrder.begin(), kRoleOrder.end()};
}

}  // namespace

std::string build_transcript(const XsCotSample& sample, TranscriptMode mode,
                             const MarkerSet& markers) {
  markers.validate();
  const std::vector<Role> roles = roles_for_mode(mode);

  std::vector<std::string_view> texts;
  texts.reserve(roles.size());
  for (Role role : roles) {
    std::string_view text = trim_ascii(sample.segment(role));
    if (text.empty()) {
      fail(Errc::MissingSegment, "sample '" + sample.id + "' needs a non-empty " +
                                     std::string(role_name(role)) + " in " +
                                     std::string(transcript_mode_name(mode)) + " mode");
    }
    for (Role other : kRoleOrder) {
      if (text.find(markers.marker_for(other)) != std::string_view::npos) {
        fail(Errc::MarkerCollision, "sample '" + sample.id + "' " +
                                        std::string(role_name(role)) + " contains marker '" +
                                        std::string(markers.marker_for(other)) + "'");
      }
    }
    texts.push_back(text);
  }

  std::string out;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    bool spaced = is_space_delimited(segment_language(roles[i], sample.languages));
    out += markers.marker_for(roles[i]);
    if (spaced) out += ' ';
    out += texts[i];
    if (i + 1 < roles.size() && spaced) out += ' ';
  }
  return out;
}

ParsedTranscript parse_transcript(std::string_view transcript, const MarkerSet& markers) {
  markers.validate();

  struct Hit {
    std::size_t pos;
    std::size_t len;
    Role role;
  };
  std::vector<Hit> hits;
  std::size_t i = 0;
  while (i < transcript.size()) {
    bool matched = false;
    for (Role role : kRoleOrder) {
      std::string_view marker = markers.marker_for(role);
      if (transcript.compare(i, marker.size(), marker) == 0) {
        hits.push_back({i, marker.size(), role});
        i += marker.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }

  if (hits.empty()) fail(Errc::NoMarkersFound, "no segment markers in transcript");

  ParsedTranscript parsed;
  for (std::size_t h = 0; h < hits.size(); ++h) {
    auto idx = static_cast<std::size_t>(hits[h].role);
    if (parsed.segments[idx].has_value()) {
      fail(Errc::DuplicateRole,
           "marker for " + std::string(role_name(hits[h].role)) + " appears twice");
    }
    std::size_t begin = hits[h].pos + hits[h].len;
    std::size_t end = h + 1 < hits.size() ? hits[h + 1].pos : transcript.size();
    parsed.segments[idx] = std::string(trim_ascii(transcript.substr(begin, end - begin)));
  }

  for (std::size_t h = 1; h < hits.size(); ++h) {
    if (static_cast<int>(hits[h].role) <= static_cast<int>(hits[h - 1].role)) {
      parsed.canonical_order = false;
      break;
    }
  }

  bool only_response = parsed.segment(Role::TargetResponse).has_value() &&
                       !parsed.segment(Role::TargetInstruction).has_value() &&
                       !parsed.segment(Role::CoreInstruction).has_value() &&
                       !parsed.segment(Role::CoreResponse).has_value();
  parsed.mode = only_response ? TranscriptMode::DirectSft : TranscriptMode::XsCot;
  return parsed;
}

XsCotSample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(Errc::SchemaViolation, "record is not a JSON object");

  static const std::set<std::string> known = {"id",        "core_lang", "target_lang",
                                              "audio_ref", "segments",  "meta"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) fail(Errc::SchemaViolation, "unknown field '" + key + "'");
  }
  for (const char* required : {"id", "core_lang", "target_lang", "segments"}) {
    if (!j.contains(required)) {
      fail(Errc::SchemaViolation, "missing field '" + std::string(required) + "'");
    }
  }
  if (!j["id"].is_string() || j["id"].get<std::string>().empty()) {
    fail(Errc::SchemaViolation, "'id' must be a non-empty string");
  }

  XsCotSample sample;
  sample.id = j["id"].get<std::string>();
  sample.languages.core = j["core_lang"].get<std::string>();
  sample.languages.target = j["target_lang"].get<std::string>();
  validate_language_pair(sample.languages);

  if (j.contains("audio_ref") && !j["audio_ref"].is_null()) {
    sample.audio_ref = j["audio_ref"].get<std::string>();
  }

  const auto& segments = j["segments"];
  if (!segments.is_object()) fail(Errc::SchemaViolation, "'segments' must be an object");
  for (const auto& [key, value] : segments.items()) {
    auto role = role_from_name(key);
    if (!role) fail(Errc::SchemaViolation, "unknown segment role '" + key + "'");
    if (!value.is_string()) {
      fail(Errc::SchemaViolation, "segment '" + key + "' must be a string");
    }
    sample.segment(*role) = value.get<std::string>();
  }

  if (j.contains("meta") && !j["meta"].is_null()) {
    if (!j["meta"].is_object()) fail(Errc::SchemaViolation, "'meta' must be an object");
    sample.meta = j["meta"];
  }
  return sample;
}

nlohmann::ordered_json sample_to_json(const XsCotSample& sample) {
  nlohmann::ordered_json j;
  j["id"] = sample.id;
  j["core_lang"] = sample.languages.core;
  j["target_lang"] = sample.languages.target;
  if (!sample.audio_ref.empty()) j["audio_ref"] = sample.audio_ref;
  nlohmann::ordered_json segments = nlohmann::ordered_json::object();
  for (Role role : kRoleOrder) {
    if (!sample.segment(role).empty()) {
      segments[std::string(role_name(role))] = sample.segment(role);
    }
  }
  j["segments"] = segments;
  if (!sample.meta.is_null() && !sample.meta.empty()) j["meta"] = sample.meta;
  return j;
}

std::vector<XsCotSample> load_corpus(const std::filesystem::path& path) {
  std::vector<XsCotSample> samples;
  std::set<std::string> seen;
  for_each_jsonl_line(path, [&](std::size_t, const nlohmann::json& j) {
    XsCotSample sample = sample_from_json(j);
    if (!seen.insert(sample.id).second) {
      fail(Errc::DuplicateId, "duplicate sample id '" + sample.id + "'");
    }
    samples.push_back(std::move(sample));
  });
  return samples;
}

void save_corpus(const std::filesystem::path& path, const std::vector<XsCotSample>& samples) {
  std::vector<nlohmann::ordered_json> records;
  records.reserve(samples.size());
  for (const auto& sample : samples) records.push_back(sample_to_json(sample));
  write_jsonl(path, records);
}

}  // namespace xscot
