#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xscot/clients.hpp"
#include "xscot/core.hpp"
#include "xscot/token_counter.hpp"

namespace xscot {

/// Token accounting for one transcript. cot_tokens covers the three
/// reasoning segments and their markers; response_tokens the answer text;
/// marker_tokens the answer's marker. The three always sum to total.
struct DelayReport {
  std::size_t cot_tokens = 0;
  std::size_t response_tokens = 0;
  std::size_t marker_tokens = 0;
  std::size_t total_tokens = 0;
  TranscriptMode mode = TranscriptMode::XsCot;
};

DelayReport delay_report(std::string_view transcript, const LanguagePair& languages,
                         const TokenCounter& counter, const MarkerSet& markers = {});

/// Maps a raw 0-5 judge score onto the 0-100 scale.
int scale_judge_score(int raw);

/// Extracts the first run of digits from a judge reply; values above 5
/// or replies without digits are unparseable.
std::optional<int> parse_judge_score(std::string_view reply);

inline constexpr std::string_view kJudgePromptVersion = "v1";

/// The fixed rubric prompt sent for every (prediction, reference) pair.
std::string judge_prompt(std::string_view prediction, std::string_view reference);

struct ScoredSample {
  std::string id;
  int raw = 0;
  int scaled = 0;
};

struct JudgeOutcome {
  std::vector<ScoredSample> scores;  // ordered by id
  std::size_t excluded = 0;          // replies unparseable after one retry
  double mean_scaled = 0.0;
};

struct LabeledText {
  std::string id;
  std::string text;
};

/// Scores each prediction against the reference with the same id.
/// Every prediction id must have a reference.
JudgeOutcome judge_corpus(const std::vector<LabeledText>& predictions,
                          const std::vector<LabeledText>& references, JudgeClient& client);

struct CorpusStatsRow {
  std::string label;
  std::size_t samples = 0;
  double mean_cot_tokens = 0.0;
  double mean_response_tokens = 0.0;
  double mean_total_tokens = 0.0;
};

struct ReductionEntry {
  std::string from;  // label of the baseline corpus
  std::string to;    // label of the compared corpus
  double cot_reduction_pct = 0.0;
  double total_reduction_pct = 0.0;
};

struct StatsReport {
  std::vector<CorpusStatsRow> rows;
  std::vector<ReductionEntry> reductions;  // all ordered pairs, earlier → later

  std::string render_text() const;
  nlohmann::ordered_json to_json() const;
};

struct LabeledCorpus {
  std::string label;
  std::vector<std::string> transcripts;
  LanguagePair languages;
};

/// Per-corpus token means plus pairwise reduction percentages. Empty
/// corpora contribute no row.
StatsReport stats_report(const std::vector<LabeledCorpus>& corpora,
                         const TokenCounter& counter, const MarkerSet& markers = {});

}  // namespace xscot
