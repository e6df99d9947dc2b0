#include "xscot/pipeline.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "xscot/errors.hpp"
#include "xscot/hashing.hpp"
#include "xscot/jsonl.hpp"
#include "xscot/unicode.hpp"
#include "xscot/version.hpp"

namespace xscot {

std::vector<TextPair> load_pairs(const std::filesystem::path& path) {
  std::vector<TextPair> pairs;
  std::set<std::string> seen;
  for_each_jsonl_line(path, [&](std::size_t, const nlohmann::json& j) {
    for (const char* field : {"id", "instruction", "response"}) {
      if (!j.contains(field) || !j[field].is_string()) {
        fail(Errc::SchemaViolation, "missing string field '" + std::string(field) + "'");
      }
    }
    TextPair pair{j["id"].get<std::string>(), j["instruction"].get<std::string>(),
                  j["response"].get<std::string>()};
    if (pair.id.empty()) fail(Errc::SchemaViolation, "'id' must be non-empty");
    if (!seen.insert(pair.id).second) {
      fail(Errc::DuplicateId, "duplicate pair id '" + pair.id + "'");
    }
    pairs.push_back(std::move(pair));
  });
  return pairs;
}

void FilterRules::validate() const {
  if (max_instruction_chars == 0 || max_response_chars == 0 || max_digit_symbol_run == 0) {
    fail(Errc::InvalidConfig, "filter limits must be positive");
  }
}

namespace {

bool contains_html_tag(std::string_view text) {
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string_view::npos) {
    if (i + 1 < text.size()) {
      char c = text[i + 1];
      bool tag_start = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '/';
      if (tag_start) {
        std::size_t close = text.find('>', i + 1);
        std::size_t newline = text.find('\n', i + 1);
        if (close != std::string_view::npos &&
            (newline == std::string_view::npos || close < newline)) {
          return true;
        }
      }
    }
    ++i;
  }
  return false;
}

bool contains_table(std::string_view text) {
  if (text.find("|---") != std::string_view::npos) return true;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = trim_ascii(text.substr(line_start, line_end - line_start));
    if (line.size() >= 2 && line.front() == '|' && line.find('|', 1) != std::string_view::npos) {
      return true;
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return false;
}

bool forbidden_pattern(std::string_view text, const FilterRules& rules) {
  if (rules.reject_code_fences && text.find("```") != std::string_view::npos) return true;
  if (rules.reject_urls &&
      (text.find("http://") != std::string_view::npos ||
       text.find("https://") != std::string_view::npos ||
       text.find("www.") != std::string_view::npos)) {
    return true;
  }
  if (rules.reject_html && contains_html_tag(text)) return true;
  if (rules.reject_tables && contains_table(text)) return true;
  return false;
}

bool unspeakable_run(std::string_view text, std::size_t limit) {
  std::size_t run = 0;
  for (const Codepoint& cp : decode_utf8(text)) {
    ScriptClass cls = script_class(cp.value);
    if (cls == ScriptClass::Digit || cls == ScriptClass::Punct) {
      if (++run > limit) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

}  // namespace

std::optional<std::string> filter_pair(const TextPair& pair, const FilterRules& rules) {
  rules.validate();
  if (pair.instruction.empty() || pair.response.empty()) return "Empty";
  if (decode_utf8(pair.instruction).size() > rules.max_instruction_chars) return "TooLong";
  if (decode_utf8(pair.response).size() > rules.max_response_chars) return "TooLong";
  if (forbidden_pattern(pair.instruction, rules) || forbidden_pattern(pair.response, rules)) {
    return "ForbiddenPattern";
  }
  if (unspeakable_run(pair.instruction, rules.max_digit_symbol_run) ||
      unspeakable_run(pair.response, rules.max_digit_symbol_run)) {
    return "NotSpeakable";
  }
  return std::nullopt;
}

WerUnit wer_unit_for_language(std::string_view lang) {
  return is_cjk_language(lang) ? WerUnit::Character : WerUnit::Word;
}

namespace {

std::vector<std::string> units_of(std::string_view text, WerUnit unit) {
  std::vector<std::string> units;
  if (unit == WerUnit::Character) {
    for (const Codepoint& cp : decode_utf8(text)) {
      if (!is_space_cp(cp.value)) {
        units.push_back(std::string(text.substr(cp.offset, cp.size)));
      }
    }
    return units;
  }
  const std::vector<Codepoint> cps = decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space_cp(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t start = cps[i].offset;
    while (i < cps.size() && !is_space_cp(cps[i].value)) ++i;
    std::size_t end = i < cps.size() ? cps[i].offset : text.size();
    units.push_back(std::string(text.substr(start, end - start)));
  }
  return units;
}

}  // namespace

double wer(std::string_view reference, std::string_view hypothesis, WerUnit unit) {
  const std::vector<std::string> ref = units_of(reference, unit);
  const std::vector<std::string> hyp = units_of(hypothesis, unit);
  if (ref.empty()) fail(Errc::EmptyReference, "reference has no units");

  // Two-row Levenshtein over units, unit costs for I/D/S.
  std::vector<std::size_t> prev(hyp.size() + 1);
  std::vector<std::size_t> curr(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      std::size_t substitution = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, substitution});
    }
    std::swap(prev, curr);
  }
  return static_cast<double>(prev[hyp.size()]) / static_cast<double>(ref.size());
}

std::string_view record_status_name(RecordStatus status) {
  switch (status) {
    case RecordStatus::Pending: return "pending";
    case RecordStatus::FilteredOut: return "filtered_out";
    case RecordStatus::Translated: return "translated";
    case RecordStatus::Synthesized: return "synthesized";
    case RecordStatus::Accepted: return "accepted";
    case RecordStatus::RejectedWer: return "rejected_wer";
  }
  return "";
}

void PipelineConfig::validate() const {
  validate_language_pair(languages);
  if (wer_threshold <= 0.0 || wer_threshold > 1.0) {
    fail(Errc::InvalidConfig, "wer threshold must lie in (0, 1]");
  }
  if (max_attempts < 1) fail(Errc::InvalidConfig, "max_attempts must be at least 1");
  filter.validate();
  auto it = voices.find(languages.target);
  if (it == voices.end() || it->second.empty()) {
    fail(Errc::InvalidConfig, "no voices configured for target language '" +
                                  languages.target + "'");
  }
}

namespace {

const std::string& pick_voice(const PipelineConfig& config, const std::string& record_id) {
  const std::vector<std::string>& pool = config.voices.at(config.languages.target);
  std::uint64_t key = splitmix64(config.seed ^ fnv1a64(record_id));
  return pool[key % pool.size()];
}

template <typename Fn>
auto with_retries(std::size_t max_attempts, Fn&& fn) {
  for (std::size_t attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const ClientError& e) {
      if (!e.retryable() || attempt >= max_attempts) throw;
    }
  }
}

}  // namespace

PipelineResult run_pipeline(const std::vector<TextPair>& pairs, const PipelineConfig& config,
                            const ExternalClients& clients) {
  config.validate();

  PipelineResult result;
  result.records.reserve(pairs.size());
  std::map<std::string, std::size_t> filter_reasons;
  std::size_t reached_translate = 0;
  std::size_t reached_synthesize = 0;
  std::size_t reached_gate = 0;
  std::size_t failed = 0;
  std::array<std::size_t, 10> histogram{};
  std::size_t histogram_overflow = 0;

  for (const TextPair& pair : pairs) {
    PipelineRecord record;
    record.id = pair.id;
    record.source = pair;

    if (auto reason = filter_pair(pair, config.filter)) {
      record.status = RecordStatus::FilteredOut;
      record.filter_reason = *reason;
      ++filter_reasons[*reason];
      result.records.push_back(std::move(record));
      continue;
    }

    try {
      record.translated_instruction = with_retries(config.max_attempts, [&] {
        return clients.translator.translate(pair.instruction, config.languages.core,
                                            config.languages.target);
      });
      record.translated_response = with_retries(config.max_attempts, [&] {
        return clients.translator.translate(pair.response, config.languages.core,
                                            config.languages.target);
      });
      record.status = RecordStatus::Translated;
      ++reached_translate;

      const std::string& voice = pick_voice(config, pair.id);
      record.audio_ref = with_retries(config.max_attempts, [&] {
        return clients.synthesizer.synthesize(*record.translated_instruction,
                                              config.languages.target, voice);
      });
      record.status = RecordStatus::Synthesized;
      ++reached_synthesize;

      record.asr_hypothesis = with_retries(config.max_attempts, [&] {
        return clients.recognizer.transcribe(*record.audio_ref, config.languages.target);
      });

      const WerUnit unit = wer_unit_for_language(config.languages.target);
      double rate = wer(*record.translated_instruction, *record.asr_hypothesis, unit);
      record.wer = rate;
      ++reached_gate;
      auto bin = static_cast<std::size_t>(rate / 0.01);
      if (bin < histogram.size()) ++histogram[bin];
      else ++histogram_overflow;

      if (rate < config.wer_threshold) {
        record.status = RecordStatus::Accepted;
        XsCotSample sample;
        sample.id = pair.id;
        sample.languages = config.languages;
        sample.audio_ref = *record.audio_ref;
        sample.segment(Role::TargetInstruction) = *record.translated_instruction;
        sample.segment(Role::CoreInstruction) = pair.instruction;
        sample.segment(Role::CoreResponse) = pair.response;
        sample.segment(Role::TargetResponse) = *record.translated_response;
        sample.meta = {{"voice", voice}, {"wer", rate}};
        result.accepted.push_back(std::move(sample));
      } else {
        record.status = RecordStatus::RejectedWer;
      }
    } catch (const ClientError& e) {
      record.error = e.what();
      ++failed;
    } catch (const Error& e) {
      record.error = e.what();
      ++failed;
    }
    result.records.push_back(std::move(record));
  }

  std::map<std::string, std::size_t> final_status;
  for (const PipelineRecord& record : result.records) {
    ++final_status[std::string(record_status_name(record.status))];
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  manifest["languages"] = {{"core", config.languages.core},
                           {"target", config.languages.target}};
  manifest["wer_threshold"] = config.wer_threshold;
  manifest["wer_unit"] =
      wer_unit_for_language(config.languages.target) == WerUnit::Character ? "character"
                                                                           : "word";
  manifest["seed"] = config.seed;
  nlohmann::ordered_json stages;
  stages["input"] = pairs.size();
  stages["passed_filter"] = pairs.size() - static_cast<std::size_t>(std::accumulate(
                                               filter_reasons.begin(), filter_reasons.end(),
                                               std::size_t{0},
                                               [](std::size_t acc, const auto& kv) {
                                                 return acc + kv.second;
                                               }));
  stages["translated"] = reached_translate;
  stages["synthesized"] = reached_synthesize;
  stages["gated"] = reached_gate;
  manifest["stage_counts"] = std::move(stages);
  manifest["final_status"] = final_status;
  manifest["filter_reasons"] = filter_reasons;
  manifest["failed"] = failed;
  nlohmann::ordered_json hist;
  hist["bin_width"] = 0.01;
  hist["bins"] = histogram;
  hist["overflow"] = histogram_overflow;
  manifest["wer_histogram"] = std::move(hist);
  manifest["accepted"] = result.accepted.size();
  result.manifest = std::move(manifest);
  return result;
}

SiTestSetResult build_si_testset(const std::vector<TextPair>& pairs,
                                 const PipelineConfig& config,
                                 const ExternalClients& clients) {
  config.validate();

  SiTestSetResult result;
  std::vector<std::string> failed_ids;
  for (const TextPair& pair : pairs) {
    try {
      std::string instruction = with_retries(config.max_attempts, [&] {
        return clients.translator.translate(pair.instruction, config.languages.core,
                                            config.languages.target);
      });
      std::string reference = with_retries(config.max_attempts, [&] {
        return clients.translator.translate(pair.response, config.languages.core,
                                            config.languages.target);
      });
      const std::string& voice = pick_voice(config, pair.id);
      std::string audio_ref = with_retries(config.max_attempts, [&] {
        return clients.synthesizer.synthesize(instruction, config.languages.target, voice);
      });

      nlohmann::ordered_json record;
      record["id"] = pair.id;
      record["target_lang"] = config.languages.target;
      record["instruction"] = instruction;
      record["audio_ref"] = audio_ref;
      record["reference"] = reference;
      record["voice"] = voice;
      result.records.push_back(std::move(record));
    } catch (const ClientError&) {
      ++result.failures;
      failed_ids.push_back(pair.id);
    }
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  manifest["languages"] = {{"core", config.languages.core},
                           {"target", config.languages.target}};
  manifest["seed"] = config.seed;
  manifest["counts"] = {{"input", pairs.size()},
                        {"written", result.records.size()},
                        {"failed", result.failures}};
  manifest["failed_ids"] = failed_ids;
  result.manifest = std::move(manifest);
  return result;
}

}  // namespace xscot
