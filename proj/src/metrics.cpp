#include "xscot/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include "xscot/errors.hpp"

namespace xscot {

DelayReport delay_report(std::string_view transcript, const LanguagePair& languages,
                         const TokenCounter& counter, const MarkerSet& markers) {
  const ParsedTranscript parsed = parse_transcript(transcript, markers);

  DelayReport report;
  report.mode = parsed.mode;
  for (Role role : kRoleOrder) {
    const auto& segment = parsed.segment(role);
    if (!segment.has_value()) continue;
    std::string_view lang = segment_language(role, languages);
    std::size_t marker_tokens = counter.count(markers.marker_for(role), lang);
    std::size_t body_tokens = counter.count(*segment, lang);
    if (is_cot_role(role)) {
      report.cot_tokens += marker_tokens + body_tokens;
    } else {
      report.response_tokens = body_tokens;
      report.marker_tokens = marker_tokens;
    }
  }
  report.total_tokens = report.cot_tokens + report.response_tokens + report.marker_tokens;
  return report;
}

int scale_judge_score(int raw) {
  if (raw < 0 || raw > 5) {
    fail(Errc::OutOfRange, "judge score " + std::to_string(raw) + " outside 0..5");
  }
  return raw * 20;
}

std::optional<int> parse_judge_score(std::string_view reply) {
  std::size_t i = 0;
  while (i < reply.size() && (reply[i] < '0' || reply[i] > '9')) ++i;
  if (i == reply.size()) return std::nullopt;
  long value = 0;
  while (i < reply.size() && reply[i] >= '0' && reply[i] <= '9') {
    value = value * 10 + (reply[i] - '0');
    if (value > 5) return std::nullopt;
    ++i;
  }
  return static_cast<int>(value);
}

std::string judge_prompt(std::string_view prediction, std::string_view reference) {
  std::string prompt;
  prompt += "Rubric ";
  prompt += kJudgePromptVersion;
  prompt +=
      ".\n"
      "You are evaluating a model's answer against a ground-truth reference.\n"
      "Score the prediction from 0 to 5:\n"
      "  0: empty, irrelevant, or in the wrong language\n"
      "  1: mostly incorrect or incoherent\n"
      "  2: partially correct with major gaps\n"
      "  3: correct in substance with noticeable flaws\n"
      "  4: correct and fluent with minor flaws\n"
      "  5: fully correct, complete, and fluent\n"
      "Reply with the integer score only.\n"
      "\n"
      "Reference:\n";
  prompt += reference;
  prompt += "\n\nPrediction:\n";
  prompt += prediction;
  prompt += "\n";
  return prompt;
}

JudgeOutcome judge_corpus(const std::vector<LabeledText>& predictions,
                          const std::vector<LabeledText>& references, JudgeClient& client) {
  std::map<std::string, const std::string*> reference_by_id;
  for (const LabeledText& reference : references) {
    if (!reference_by_id.emplace(reference.id, &reference.text).second) {
      fail(Errc::AlignmentMismatch, "duplicate reference id '" + reference.id + "'");
    }
  }

  std::vector<const LabeledText*> ordered;
  ordered.reserve(predictions.size());
  for (const LabeledText& prediction : predictions) ordered.push_back(&prediction);
  std::sort(ordered.begin(), ordered.end(),
            [](const LabeledText* a, const LabeledText* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->id == ordered[i - 1]->id) {
      fail(Errc::AlignmentMismatch, "duplicate prediction id '" + ordered[i]->id + "'");
    }
  }

  JudgeOutcome outcome;
  double sum = 0.0;
  for (const LabeledText* prediction : ordered) {
    auto ref = reference_by_id.find(prediction->id);
    if (ref == reference_by_id.end()) {
      fail(Errc::AlignmentMismatch, "no reference for prediction id '" + prediction->id + "'");
    }
    const std::string prompt = judge_prompt(prediction->text, *ref->second);
    std::optional<int> raw = parse_judge_score(client.judge(prediction->id, prompt, 1));
    if (!raw) raw = parse_judge_score(client.judge(prediction->id, prompt, 2));
    if (!raw) {
      ++outcome.excluded;
      continue;
    }
    ScoredSample scored{prediction->id, *raw, scale_judge_score(*raw)};
    sum += scored.scaled;
    outcome.scores.push_back(std::move(scored));
  }
  if (!outcome.scores.empty()) {
    outcome.mean_scaled = sum / static_cast<double>(outcome.scores.size());
  }
  return outcome;
}

std::string StatsReport::render_text() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  std::size_t label_width = 6;
  for (const auto& row : rows) label_width = std::max(label_width, row.label.size());
  out << std::left << std::setw(static_cast<int>(label_width + 2)) << "corpus" << std::right
      << std::setw(8) << "samples" << std::setw(12) << "cot" << std::setw(12) << "response"
      << std::setw(12) << "total" << '\n';
  for (const auto& row : rows) {
    out << std::left << std::setw(static_cast<int>(label_width + 2)) << row.label
        << std::right << std::setw(8) << row.samples << std::setw(12) << row.mean_cot_tokens
        << std::setw(12) << row.mean_response_tokens << std::setw(12)
        << row.mean_total_tokens << '\n';
  }
  if (!reductions.empty()) {
    out << '\n';
    std::size_t pair_width = 9;
    for (const auto& r : reductions) {
      pair_width = std::max(pair_width, r.from.size() + r.to.size() + 4);
    }
    out << std::left << std::setw(static_cast<int>(pair_width + 2)) << "reduction"
        << std::right << std::setw(10) << "cot%" << std::setw(10) << "total%" << '\n';
    for (const auto& r : reductions) {
      out << std::left << std::setw(static_cast<int>(pair_width + 2)) << (r.from + " -> " + r.to)
          << std::right << std::setw(10) << r.cot_reduction_pct << std::setw(10)
          << r.total_reduction_pct << '\n';
    }
  }
  return out.str();
}

nlohmann::ordered_json StatsReport::to_json() const {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    j["rows"].push_back({{"label", row.label},
                         {"samples", row.samples},
                         {"mean_cot_tokens", row.mean_cot_tokens},
                         {"mean_response_tokens", row.mean_response_tokens},
                         {"mean_total_tokens", row.mean_total_tokens}});
  }
  j["reductions"] = nlohmann::ordered_json::array();
  for (const auto& r : reductions) {
    j["reductions"].push_back({{"from", r.from},
                               {"to", r.to},
                               {"cot_reduction_pct", r.cot_reduction_pct},
                               {"total_reduction_pct", r.total_reduction_pct}});
  }
  return j;
}

StatsReport stats_report(const std::vector<LabeledCorpus>& corpora,
                         const TokenCounter& counter, const MarkerSet& markers) {
  StatsReport report;
  for (const LabeledCorpus& corpus : corpora) {
    if (corpus.transcripts.empty()) continue;
    CorpusStatsRow row;
    row.label = corpus.label;
    row.samples = corpus.transcripts.size();
    double cot = 0.0;
    double response = 0.0;
    double total = 0.0;
    for (const std::string& transcript : corpus.transcripts) {
      DelayReport sample = delay_report(transcript, corpus.languages, counter, markers);
      cot += static_cast<double>(sample.cot_tokens);
      response += static_cast<double>(sample.response_tokens);
      total += static_cast<double>(sample.total_tokens);
    }
    auto n = static_cast<double>(row.samples);
    row.mean_cot_tokens = cot / n;
    row.mean_response_tokens = response / n;
    row.mean_total_tokens = total / n;
    report.rows.push_back(std::move(row));
  }

  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < report.rows.size(); ++j) {
      const CorpusStatsRow& from = report.rows[i];
      const CorpusStatsRow& to = report.rows[j];
      ReductionEntry entry;
      entry.from = from.label;
      entry.to = to.label;
      if (from.mean_cot_tokens > 0.0) {
        entry.cot_reduction_pct = 100.0 * (1.0 - to.mean_cot_tokens / from.mean_cot_tokens);
      }
      if (from.mean_total_tokens > 0.0) {
        entry.total_reduction_pct =
            100.0 * (1.0 - to.mean_total_tokens / from.mean_total_tokens);
      }
      report.reductions.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace xscot
