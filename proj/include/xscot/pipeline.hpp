#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xscot/clients.hpp"
#include "xscot/core.hpp"

namespace xscot {

struct TextPair {
  std::string id;
  std::string instruction;
  std::string response;
};

std::vector<TextPair> load_pairs(const std::filesystem::path& path);

struct FilterRules {
  std::size_t max_instruction_chars = 2000;
  std::size_t max_response_chars = 4000;
  /// Texts matching any of these are dropped as unspeakable markup.
  bool reject_code_fences = true;
  bool reject_urls = true;
  bool reject_html = true;
  bool reject_tables = true;
  /// Longest run of digits/symbols that still reads naturally aloud.
  std::size_t max_digit_symbol_run = 10;

  void validate() const;
};

/// First violated rule's identifier ("TooLong", "ForbiddenPattern",
/// "NotSpeakable"), or nullopt if the pair passes.
std::optional<std::string> filter_pair(const TextPair& pair, const FilterRules& rules);

enum class WerUnit { Word, Character };

/// Character units for languages written without spaces, word units
/// otherwise.
WerUnit wer_unit_for_language(std::string_view lang);

/// Levenshtein edit distance over units divided by the reference unit
/// count. Word mode splits on whitespace; Character mode takes every
/// non-whitespace codepoint.
double wer(std::string_view reference, std::string_view hypothesis, WerUnit unit);

enum class RecordStatus { Pending, FilteredOut, Translated, Synthesized, Accepted, RejectedWer };

std::string_view record_status_name(RecordStatus status);

struct PipelineRecord {
  std::string id;
  TextPair source;
  RecordStatus status = RecordStatus::Pending;
  std::string filter_reason;  // set iff status == FilteredOut
  std::optional<std::string> translated_instruction;
  std::optional<std::string> translated_response;
  std::optional<std::string> audio_ref;
  std::optional<std::string> asr_hypothesis;
  std::optional<double> wer;  // set iff status is Accepted or RejectedWer
  std::string error;          // non-empty when a client gave up on this record
};

struct PipelineConfig {
  LanguagePair languages;  // core: language of the input pairs; target: speech language
  double wer_threshold = 0.05;
  std::uint64_t seed = 0;
  /// Voice ids per target language; one is chosen per record by a
  /// deterministic rotation keyed by (seed, record id).
  std::map<std::string, std::vector<std::string>> voices;
  FilterRules filter;
  std::size_t max_attempts = 3;  // per client call, for retryable failures

  void validate() const;
};

struct PipelineResult {
  std::vector<PipelineRecord> records;
  std::vector<XsCotSample> accepted;
  nlohmann::ordered_json manifest;
};

/// Runs filter, translate, synthesize, recognize, and the error-rate gate
/// over every pair. Client failures mark individual records; the batch
/// always completes.
PipelineResult run_pipeline(const std::vector<TextPair>& pairs, const PipelineConfig& config,
                            const ExternalClients& clients);

struct SiTestSetResult {
  std::vector<nlohmann::ordered_json> records;
  std::size_t failures = 0;
  nlohmann::ordered_json manifest;
};

/// Builds an evaluation set: translates instruction and reference
/// response into the target language and synthesizes the instruction
/// audio. No recognition gate; failed records are excluded and counted.
SiTestSetResult build_si_testset(const std::vector<TextPair>& pairs,
                                 const PipelineConfig& config,
                                 const ExternalClients& clients);

}  // namespace xscot
