#include "xscot/curriculum.hpp"

#include <algorithm>

#include "xscot/errors.hpp"
#include "xscot/hashing.hpp"
#include "xscot/jsonl.hpp"
#include "xscot/unicode.hpp"

namespace xscot {

std::size_t internalized_sentence_count(std::size_t x, std::size_t n, std::size_t m) {
  if (n < m) return std::min(x, n);
  return x;
}

bool extra_sentence_drawn(double p, std::uint64_t seed, std::string_view sample_id,
                          std::size_t epoch) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  std::uint64_t key =
      splitmix64(seed ^ fnv1a64(sample_id) ^ (0x9e3779b97f4a7c15ull * (epoch + 1)));
  return unit_interval(key) < p;
}

std::size_t effective_depth(std::size_t base, std::size_t x, double p, std::uint64_t seed,
                            std::string_view sample_id, std::size_t epoch) {
  std::size_t depth = std::min(base, x);
  if (extra_sentence_drawn(p, seed, sample_id, epoch)) depth = std::min(depth + 1, x);
  return depth;
}

std::string_view strategy_name(InternalizationStrategy strategy) {
  switch (strategy) {
    case InternalizationStrategy::AllCotSegments: return "all-cot";
    case InternalizationStrategy::CoreResponseOnly: return "core-response";
  }
  return "";
}

std::optional<InternalizationStrategy> strategy_from_name(std::string_view name) {
  if (name == "all-cot") return InternalizationStrategy::AllCotSegments;
  if (name == "core-response") return InternalizationStrategy::CoreResponseOnly;
  return std::nullopt;
}

void CurriculumConfig::validate() const {
  if (m < 1) fail(Errc::InvalidConfig, "m must be at least 1");
  if (strategy == InternalizationStrategy::AllCotSegments && m < 3) {
    fail(Errc::InvalidConfig,
         "the all-cot strategy needs m >= 3 (one epoch per instruction segment plus "
         "at least one for the response)");
  }
  if (p < 0.0 || p > 1.0) fail(Errc::InvalidConfig, "p must lie in [0, 1]");
  if (k < 1) fail(Errc::InvalidConfig, "k must be at least 1");
  if (total_epochs != 0 && total_epochs < m) {
    fail(Errc::InvalidConfig, "total_epochs must be at least m");
  }
}

std::string CurriculumConfig::fingerprint() const {
  return to_hex64(fnv1a64(to_json().dump()));
}

nlohmann::ordered_json CurriculumConfig::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["p"] = p;
  j["k"] = k;
  j["strategy"] = strategy_name(strategy);
  j["seed"] = seed;
  j["total_epochs"] = epochs();
  return j;
}

CurriculumConfig CurriculumConfig::from_json(const nlohmann::json& j) {
  CurriculumConfig cfg;
  if (j.contains("m")) cfg.m = j["m"].get<std::size_t>();
  if (j.contains("p")) cfg.p = j["p"].get<double>();
  if (j.contains("k")) cfg.k = j["k"].get<std::size_t>();
  if (j.contains("strategy")) {
    auto parsed = strategy_from_name(j["strategy"].get<std::string>());
    if (!parsed) {
      fail(Errc::InvalidConfig,
           "unknown strategy '" + j["strategy"].get<std::string>() + "'");
    }
    cfg.strategy = *parsed;
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("total_epochs")) cfg.total_epochs = j["total_epochs"].get<std::size_t>();
  cfg.validate();
  return cfg;
}

EpochPlan plan_epoch(const CurriculumConfig& config, std::size_t epoch) {
  config.validate();
  if (epoch < 1 || epoch > config.epochs()) {
    fail(Errc::EpochOutOfRange, "epoch " + std::to_string(epoch) + " outside 1.." +
                                    std::to_string(config.epochs()));
  }

  EpochPlan plan;
  plan.epoch = epoch;
  plan.optimizer_reset = epoch <= config.m;
  plan.config_fingerprint = config.fingerprint();
  plan.p = config.p;
  plan.seed = config.seed;

  auto& response = plan.depths[static_cast<std::size_t>(Role::CoreResponse)];
  if (config.strategy == InternalizationStrategy::CoreResponseOnly) {
    if (epoch >= config.m) {
      response = {Depth::Kind::Full, 0};
    } else {
      response = {Depth::Kind::Sentences, epoch};
    }
    return plan;
  }

  // all-cot: epoch 1 internalizes the target instruction, epoch 2 the
  // core instruction, the remaining m-2 epochs walk through the response.
  plan.depths[static_cast<std::size_t>(Role::TargetInstruction)] = {Depth::Kind::Full, 0};
  if (epoch >= 2) {
    plan.depths[static_cast<std::size_t>(Role::CoreInstruction)] = {Depth::Kind::Full, 0};
  }
  if (epoch >= 3) {
    std::size_t n = epoch - 2;
    std::size_t horizon = config.m - 2;
    if (n >= horizon) {
      response = {Depth::Kind::Full, 0};
    } else {
      response = {Depth::Kind::Sentences, n};
    }
  }
  return plan;
}

InternalizedSample apply_internalization(const XsCotSample& sample, const EpochPlan& plan,
                                         const CompressionConfig& ccfg,
                                         const SegmentationProfiles& profiles,
                                         const MarkerSet& markers,
                                         const TokenCounter& counter) {
  XsCotSample shaped = sample;
  for (Role role : kRoleOrder) {
    if (!is_cot_role(role)) continue;
    const Depth& depth = plan.depth(role);
    if (depth.kind == Depth::Kind::None) continue;

    std::string_view lang = segment_language(role, sample.languages);
    const SegmentationProfile& profile = profiles.for_language(lang);
    const std::string& text = sample.segment(role);
    if (depth.kind == Depth::Kind::Full) {
      shaped.segment(role) =
          compress_whole_segment(text, ccfg, profile, counter, lang).text;
    } else {
      std::size_t x = split_sentences(text, profile).size();
      std::size_t base = std::min(depth.count, x);
      std::size_t d = effective_depth(base, x, plan.p, plan.seed, sample.id, plan.epoch);
      shaped.segment(role) =
          compress_segment_prefix(text, d, ccfg, profile, counter, lang).text;
    }
  }

  InternalizedSample out;
  out.transcript = build_transcript(shaped, TranscriptMode::SemiImplicit, markers);
  for (Role role : kRoleOrder) {
    std::string_view lang = segment_language(role, sample.languages);
    std::size_t marker_tokens = counter.count(markers.marker_for(role), lang);
    std::size_t body_tokens = counter.count(trim_ascii(shaped.segment(role)), lang);
    if (is_cot_role(role)) {
      out.cot_tokens += marker_tokens + body_tokens;
    } else {
      out.response_tokens = body_tokens;
      out.total_tokens = out.cot_tokens + body_tokens + marker_tokens;
    }
  }
  return out;
}

EpochSummary emit_epoch_dataset(const std::vector<XsCotSample>& corpus,
                                const CurriculumConfig& cfg, const CompressionConfig& ccfg,
                                std::size_t epoch, const std::filesystem::path& out_path,
                                const SegmentationProfiles& profiles,
                                const MarkerSet& markers, const TokenCounter& counter) {
  ccfg.validate();
  const EpochPlan plan = plan_epoch(cfg, epoch);

  std::vector<const XsCotSample*> ordered;
  ordered.reserve(corpus.size());
  for (const auto& sample : corpus) ordered.push_back(&sample);
  std::sort(ordered.begin(), ordered.end(),
            [](const XsCotSample* a, const XsCotSample* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->id == ordered[i - 1]->id) {
      fail(Errc::DuplicateId, "duplicate sample id '" + ordered[i]->id + "'");
    }
  }

  std::vector<nlohmann::ordered_json> records;
  records.reserve(ordered.size());
  EpochSummary summary;
  summary.epoch = epoch;
  summary.optimizer_reset = plan.optimizer_reset;
  double cot_sum = 0.0;
  double total_sum = 0.0;
  for (const XsCotSample* sample : ordered) {
    InternalizedSample shaped = apply_internalization(*sample, plan, ccfg, profiles,
                                                      markers, counter);
    nlohmann::ordered_json record;
    record["id"] = sample->id;
    record["epoch"] = epoch;
    record["target"] = shaped.transcript;
    record["events"] = {{"optimizer_reset", plan.optimizer_reset}};
    record["token_stats"] = {{"cot", shaped.cot_tokens},
                             {"response", shaped.response_tokens},
                             {"total", shaped.total_tokens}};
    records.push_back(std::move(record));
    cot_sum += static_cast<double>(shaped.cot_tokens);
    total_sum += static_cast<double>(shaped.total_tokens);
  }
  write_jsonl(out_path, records);

  summary.records = records.size();
  if (!records.empty()) {
    summary.mean_cot_tokens = cot_sum / static_cast<double>(records.size());
    summary.mean_total_tokens = total_sum / static_cast<double>(records.size());
  }
  return summary;
}

std::string_view training_stage_name(TrainingStage stage) {
  switch (stage) {
    case TrainingStage::ModalAlignment: return "modal_alignment";
    case TrainingStage::XsCotFinetune: return "xs_cot_finetune";
    case TrainingStage::SemiImplicit: return "semi_implicit";
  }
  return "";
}

std::optional<TrainingStage> training_stage_from_name(std::string_view name) {
  if (name == "modal_alignment") return TrainingStage::ModalAlignment;
  if (name == "xs_cot_finetune") return TrainingStage::XsCotFinetune;
  if (name == "semi_implicit") return TrainingStage::SemiImplicit;
  return std::nullopt;
}

void StageManifest::validate() const {
  if (stage == TrainingStage::SemiImplicit) {
    if (!curriculum) {
      fail(Errc::InvalidConfig, "the semi_implicit stage requires a curriculum");
    }
    curriculum->validate();
  } else if (curriculum) {
    fail(Errc::InvalidConfig, std::string(training_stage_name(stage)) +
                                  " stage must not carry a curriculum");
  }
  for (const auto& mixture : mixtures) {
    if (mixture.dataset.empty()) fail(Errc::InvalidConfig, "mixture dataset id is empty");
    if (mixture.task.empty()) fail(Errc::InvalidConfig, "mixture task tag is empty");
  }
}

nlohmann::ordered_json StageManifest::to_json() const {
  nlohmann::ordered_json j;
  j["stage"] = training_stage_name(stage);
  j["mixtures"] = nlohmann::ordered_json::array();
  for (const auto& mixture : mixtures) {
    nlohmann::ordered_json entry;
    entry["dataset"] = mixture.dataset;
    entry["task"] = mixture.task;
    if (mixture.hours) entry["hours"] = *mixture.hours;
    if (mixture.samples) entry["samples"] = *mixture.samples;
    j["mixtures"].push_back(std::move(entry));
  }
  if (curriculum) j["curriculum"] = curriculum->to_json();
  return j;
}

StageManifest StageManifest::from_json(const nlohmann::json& j) {
  StageManifest manifest;
  if (!j.contains("stage") || !j["stage"].is_string()) {
    fail(Errc::InvalidConfig, "stage manifest needs a 'stage' name");
  }
  auto stage = training_stage_from_name(j["stage"].get<std::string>());
  if (!stage) fail(Errc::InvalidConfig, "unknown stage '" + j["stage"].get<std::string>() + "'");
  manifest.stage = *stage;
  if (j.contains("mixtures")) {
    for (const auto& entry : j["mixtures"]) {
      MixtureEntry mixture;
      mixture.dataset = entry.value("dataset", std::string{});
      mixture.task = entry.value("task", std::string{});
      if (entry.contains("hours")) mixture.hours = entry["hours"].get<double>();
      if (entry.contains("samples")) mixture.samples = entry["samples"].get<std::uint64_t>();
      manifest.mixtures.push_back(std::move(mixture));
    }
  }
  if (j.contains("curriculum")) {
    manifest.curriculum = CurriculumConfig::from_json(j["curriculum"]);
  }
  manifest.validate();
  return manifest;
}

}  // namespace xscot
