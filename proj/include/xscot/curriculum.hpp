#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xscot/compressor.hpp"
#include "xscot/core.hpp"
#include "xscot/segmenter.hpp"
#include "xscot/token_counter.hpp"

namespace xscot {

/// How many leading sentences of a segment are internalized at epoch n:
/// min(x, n) while the schedule is still running (n < m), all of them
/// once it has completed (n >= m).
std::size_t internalized_sentence_count(std::size_t x, std::size_t n, std::size_t m);

/// Deterministic per-sample draw that occasionally internalizes one extra
/// sentence, so sentence boundaries do not become a hard signal. Pure
/// function of (seed, sample_id, epoch).
bool extra_sentence_drawn(double p, std::uint64_t seed, std::string_view sample_id,
                          std::size_t epoch);

/// base plus the extra-sentence draw, clamped to the sentence count.
std::size_t effective_depth(std::size_t base, std::size_t x, double p, std::uint64_t seed,
                            std::string_view sample_id, std::size_t epoch);

enum class InternalizationStrategy {
  AllCotSegments,    // instructions first, then the response sentence by sentence
  CoreResponseOnly,  // instructions stay verbatim, only the response shrinks
};

std::string_view strategy_name(InternalizationStrategy strategy);
std::optional<InternalizationStrategy> strategy_from_name(std::string_view name);

struct CurriculumConfig {
  std::size_t m = 7;  // epoch at which internalization completes
  double p = 0.1;     // chance of internalizing one extra sentence
  std::size_t k = 3;  // word groups kept per compressed sentence
  InternalizationStrategy strategy = InternalizationStrategy::AllCotSegments;
  std::uint64_t seed = 0;
  std::size_t total_epochs = 0;  // 0 means m

  std::size_t epochs() const { return total_epochs == 0 ? m : total_epochs; }
  void validate() const;
  /// Stable hex digest over every field; two configs with the same
  /// fingerprint produce byte-identical datasets.
  std::string fingerprint() const;

  nlohmann::ordered_json to_json() const;
  static CurriculumConfig from_json(const nlohmann::json& j);
};

struct Depth {
  enum class Kind { None, Full, Sentences };
  Kind kind = Kind::None;
  std::size_t count = 0;  // pre-clamp sentence count, Kind::Sentences only
};

struct EpochPlan {
  std::size_t epoch = 1;  // 1-based
  std::array<Depth, 4> depths;
  bool optimizer_reset = false;
  std::string config_fingerprint;
  // Carried so the plan alone suffices to apply the per-sample draw.
  double p = 0.0;
  std::uint64_t seed = 0;

  const Depth& depth(Role role) const { return depths[static_cast<std::size_t>(role)]; }
};

EpochPlan plan_epoch(const CurriculumConfig& config, std::size_t epoch);

struct InternalizedSample {
  std::string transcript;
  std::size_t cot_tokens = 0;       // reasoning segments plus their markers
  std::size_t response_tokens = 0;  // answer segment, marker excluded
  std::size_t total_tokens = 0;
};

InternalizedSample apply_internalization(const XsCotSample& sample, const EpochPlan& plan,
                                         const CompressionConfig& ccfg,
                                         const SegmentationProfiles& profiles,
                                         const MarkerSet& markers,
                                         const TokenCounter& counter);

struct EpochSummary {
  std::size_t epoch = 0;
  std::size_t records = 0;
  bool optimizer_reset = false;
  double mean_cot_tokens = 0.0;
  double mean_total_tokens = 0.0;
};

/// Writes one JSONL record per sample, ordered by id, and returns the
/// epoch's aggregate stats. Duplicate sample ids are an error.
EpochSummary emit_epoch_dataset(const std::vector<XsCotSample>& corpus,
                                const CurriculumConfig& cfg, const CompressionConfig& ccfg,
                                std::size_t epoch, const std::filesystem::path& out_path,
                                const SegmentationProfiles& profiles,
                                const MarkerSet& markers, const TokenCounter& counter);

enum class TrainingStage { ModalAlignment, XsCotFinetune, SemiImplicit };

std::string_view training_stage_name(TrainingStage stage);
std::optional<TrainingStage> training_stage_from_name(std::string_view name);

struct MixtureEntry {
  std::string dataset;
  std::string task;
  std::optional<double> hours;
  std::optional<std::uint64_t> samples;
};

/// Describes one training stage: which datasets it mixes and, for the
/// final stage, the internalization schedule it runs under.
struct StageManifest {
  TrainingStage stage = TrainingStage::ModalAlignment;
  std::vector<MixtureEntry> mixtures;
  std::optional<CurriculumConfig> curriculum;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static StageManifest from_json(const nlohmann::json& j);
};

}  // namespace xscot
