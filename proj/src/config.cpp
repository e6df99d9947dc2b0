#include "xscot/config.hpp"

#include <set>

#include "xscot/errors.hpp"
#include "xscot/jsonl.hpp"
#include "xscot/unicode.hpp"

namespace xscot {

namespace {

std::string get_string(const nlohmann::json& j, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) {
    fail(Errc::InvalidConfig, "'" + std::string(key) + "' must be a string");
  }
  return j[key].get<std::string>();
}

SegmentationProfile profile_from_json(const std::string& lang, const nlohmann::json& j) {
  SegmentationProfile profile;
  profile.language = lang;
  std::string grouping = get_string(j, "grouping", "whitespace");
  if (grouping == "script-run") {
    profile.grouping = GroupingRule::ScriptRunGroups;
  } else if (grouping == "whitespace") {
    profile.grouping = GroupingRule::WhitespaceGroups;
  } else {
    fail(Errc::InvalidConfig, "unknown grouping rule '" + grouping + "'");
  }
  if (j.contains("terminators")) {
    profile.terminators.clear();
    for (const auto& entry : j["terminators"]) {
      if (!entry.is_string()) fail(Errc::InvalidConfig, "terminators must be strings");
      auto cps = decode_utf8(entry.get<std::string>());
      if (cps.size() != 1) {
        fail(Errc::InvalidConfig, "each terminator must be a single character");
      }
      profile.terminators.push_back(cps[0].value);
    }
    if (profile.terminators.empty()) {
      fail(Errc::InvalidConfig, "terminator list must not be empty");
    }
  }
  return profile;
}

FilterRules filter_from_json(const nlohmann::json& j) {
  FilterRules rules;
  if (j.contains("max_instruction_chars")) {
    rules.max_instruction_chars = j["max_instruction_chars"].get<std::size_t>();
  }
  if (j.contains("max_response_chars")) {
    rules.max_response_chars = j["max_response_chars"].get<std::size_t>();
  }
  if (j.contains("max_digit_symbol_run")) {
    rules.max_digit_symbol_run = j["max_digit_symbol_run"].get<std::size_t>();
  }
  if (j.contains("reject_code_fences")) {
    rules.reject_code_fences = j["reject_code_fences"].get<bool>();
  }
  if (j.contains("reject_urls")) rules.reject_urls = j["reject_urls"].get<bool>();
  if (j.contains("reject_html")) rules.reject_html = j["reject_html"].get<bool>();
  if (j.contains("reject_tables")) rules.reject_tables = j["reject_tables"].get<bool>();
  rules.validate();
  return rules;
}

}  // namespace

AppConfig AppConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(Errc::InvalidConfig, "configuration root must be an object");
  static const std::set<std::string> known = {"markers",  "segmentation", "compression",
                                              "curriculum", "pipeline",   "clients",
                                              "metrics",  "stages"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      fail(Errc::InvalidConfig, "unknown configuration section '" + key + "'");
    }
  }

  AppConfig config;

  if (j.contains("markers")) {
    const auto& markers = j["markers"];
    config.markers.target_instruction =
        get_string(markers, "target_instruction", config.markers.target_instruction);
    config.markers.core_instruction =
        get_string(markers, "core_instruction", config.markers.core_instruction);
    config.markers.core_response =
        get_string(markers, "core_response", config.markers.core_response);
    config.markers.target_response =
        get_string(markers, "target_response", config.markers.target_response);
    config.markers.validate();
  }

  if (j.contains("segmentation")) {
    for (const auto& [lang, profile] : j["segmentation"].items()) {
      config.profiles.set(profile_from_json(lang, profile));
    }
  }

  if (j.contains("compression")) {
    const auto& compression = j["compression"];
    if (compression.contains("k")) {
      config.compression.keep_groups = compression["k"].get<std::size_t>();
    }
    config.compression.ellipsis_marker =
        get_string(compression, "ellipsis", config.compression.ellipsis_marker);
    config.compression.validate();
  }

  if (j.contains("curriculum")) {
    config.curriculum = CurriculumConfig::from_json(j["curriculum"]);
    config.compression.keep_groups = config.curriculum.k;
  }

  if (j.contains("pipeline")) {
    const auto& pipeline = j["pipeline"];
    config.pipeline.languages.core =
        get_string(pipeline, "core_lang", config.pipeline.languages.core);
    config.pipeline.languages.target =
        get_string(pipeline, "target_lang", config.pipeline.languages.target);
    if (pipeline.contains("wer_threshold")) {
      config.pipeline.wer_threshold = pipeline["wer_threshold"].get<double>();
    }
    if (pipeline.contains("seed")) {
      config.pipeline.seed = pipeline["seed"].get<std::uint64_t>();
    }
    if (pipeline.contains("max_attempts")) {
      config.pipeline.max_attempts = pipeline["max_attempts"].get<std::size_t>();
    }
    if (pipeline.contains("voices")) {
      for (const auto& [lang, list] : pipeline["voices"].items()) {
        std::vector<std::string> pool;
        for (const auto& voice : list) pool.push_back(voice.get<std::string>());
        config.pipeline.voices[lang] = std::move(pool);
      }
    }
    if (pipeline.contains("filter")) {
      config.pipeline.filter = filter_from_json(pipeline["filter"]);
    }
  }

  if (j.contains("clients")) {
    const auto& clients = j["clients"];
    config.clients.translate_url = get_string(clients, "translate_url", "");
    config.clients.tts_url = get_string(clients, "tts_url", "");
    config.clients.asr_url = get_string(clients, "asr_url", "");
    config.clients.judge_url = get_string(clients, "judge_url", "");
    config.clients.judge_model = get_string(clients, "judge_model", config.clients.judge_model);
  }

  if (j.contains("metrics")) {
    std::string counter = get_string(j["metrics"], "counter", "reference");
    if (counter == "reference") {
      config.counter = CounterChoice::Reference;
    } else if (counter == "whitespace") {
      config.counter = CounterChoice::Whitespace;
    } else {
      fail(Errc::InvalidConfig, "unknown token counter '" + counter + "'");
    }
  }

  if (j.contains("stages")) {
    for (const auto& stage : j["stages"]) {
      config.stages.push_back(StageManifest::from_json(stage));
    }
  }
  return config;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return from_json(parsed);
}

const TokenCounter& counter_for_choice(CounterChoice choice) {
  static const WhitespaceTokenCounter whitespace;
  if (choice == CounterChoice::Whitespace) return whitespace;
  return reference_token_counter();
}

}  // namespace xscot
