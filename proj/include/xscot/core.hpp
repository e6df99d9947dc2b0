#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace xscot {

/// The four segments of a cross-lingual reasoning sample, in the order
/// they appear in a serialized transcript. The first three make up the
/// reasoning chain; the last is the answer shown to the user.
enum class Role {
  TargetInstruction,
  CoreInstruction,
  CoreResponse,
  TargetResponse,
};

inline constexpr std::array<Role, 4> kRoleOrder = {
    Role::TargetInstruction,
    Role::CoreInstruction,
    Role::CoreResponse,
    Role::TargetResponse,
};

std::string_view role_name(Role role);
std::optional<Role> role_from_name(std::string_view name);

/// True for the three segments that belong to the reasoning chain.
inline bool is_cot_role(Role role) { return role != Role::TargetResponse; }

struct LanguagePair {
  std::string core;    // reasoning language, e.g. "en"
  std::string target;  // user-facing language, e.g. "ja"
};

/// Both codes non-empty with a lowercase primary subtag, core != target.
void validate_language_pair(const LanguagePair& pair);

/// BCP-47-ish primary subtag check for languages written without spaces.
bool is_cjk_language(std::string_view lang);

/// Whether tokens of this language are separated by spaces.
inline bool is_space_delimited(std::string_view lang) { return !is_cjk_language(lang); }

/// The language a given segment is written in.
std::string_view segment_language(Role role, const LanguagePair& pair);

struct MarkerSet {
  std::string target_instruction = "[TGT-INSTR]";
  std::string core_instruction = "[CORE-INSTR]";
  std::string core_response = "[CORE-RESP]";
  std::string target_response = "[TGT-RESP]";

  std::string_view marker_for(Role role) const;

  /// Markers must be non-empty, pairwise distinct, and no marker may be a
  /// substring of another (otherwise parsing is ambiguous).
  void validate() const;
};

enum class TranscriptMode {
  XsCot,         // all four segments
  DirectSft,     // target response only
  SemiImplicit,  // all four segments, reasoning possibly compressed
};

std::string_view transcript_mode_name(TranscriptMode mode);
std::optional<TranscriptMode> transcript_mode_from_name(std::string_view name);

struct XsCotSample {
  std::string id;
  LanguagePair languages;
  std::string audio_ref;
  std::array<std::string, 4> segments;  // indexed by Role order
  nlohmann::ordered_json meta;          // opaque, carried through unchanged

  std::string& segment(Role role) { return segments[static_cast<std::size_t>(role)]; }
  const std::string& segment(Role role) const {
    return segments[static_cast<std::size_t>(role)];
  }
};

/// Serializes the sample's segments into one training string. Segments are
/// trimmed; required segments must be non-empty. Throws MarkerCollision if
/// any segment body contains one of the markers.
std::string build_transcript(const XsCotSample& sample, TranscriptMode mode,
                             const MarkerSet& markers = {});

struct ParsedTranscript {
  TranscriptMode mode = TranscriptMode::XsCot;
  std::array<std::optional<std::string>, 4> segments;
  bool canonical_order = true;

  const std::optional<std::string>& segment(Role role) const {
    return segments[static_cast<std::size_t>(role)];
  }
};

/// Inverse of build_transcript. Tolerates out-of-order segments (flagged
/// via canonical_order); throws NoMarkersFound / DuplicateRole otherwise.
ParsedTranscript parse_transcript(std::string_view transcript,
                                  const MarkerSet& markers = {});

/// JSONL corpus codec. Unknown top-level keys and roles are rejected so
/// typos surface as diagnostics instead of vanishing fields.
XsCotSample sample_from_json(const nlohmann::json& j);
nlohmann::ordered_json sample_to_json(const XsCotSample& sample);

std::vector<XsCotSample> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, const std::vector<XsCotSample>& samples);

}  // namespace xscot
