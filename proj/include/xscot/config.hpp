#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "xscot/compressor.hpp"
#include "xscot/core.hpp"
#include "xscot/curriculum.hpp"
#include "xscot/pipeline.hpp"
#include "xscot/segmenter.hpp"

namespace xscot {

/// Service endpoints. Credentials never live here; they come from the
/// environment (XSCOT_TRANSLATE_TOKEN, XSCOT_TTS_TOKEN, XSCOT_ASR_TOKEN,
/// XSCOT_JUDGE_TOKEN).
struct ClientEndpoints {
  std::string translate_url;
  std::string tts_url;
  std::string asr_url;
  std::string judge_url;
  std::string judge_model = "gpt-4";
};

enum class CounterChoice { Reference, Whitespace };

struct AppConfig {
  MarkerSet markers;
  SegmentationProfiles profiles = SegmentationProfiles::defaults();
  CompressionConfig compression;
  CurriculumConfig curriculum;
  PipelineConfig pipeline;
  ClientEndpoints clients;
  CounterChoice counter = CounterChoice::Reference;
  std::vector<StageManifest> stages;

  static AppConfig from_json(const nlohmann::json& j);
  static AppConfig load(const std::filesystem::path& path);
};

const TokenCounter& counter_for_choice(CounterChoice choice);

}  // namespace xscot
