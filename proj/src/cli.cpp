#include "xscot/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xscot/config.hpp"
#include "xscot/curriculum.hpp"
#include "xscot/errors.hpp"
#include "xscot/hashing.hpp"
#include "xscot/jsonl.hpp"
#include "xscot/metrics.hpp"
#include "xscot/pipeline.hpp"
#include "xscot/version.hpp"

namespace xscot {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool quiet = false;
  std::string out_dir = "out";
};

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::SinkUnavailable, "cannot create " + dir.string() + ": " + ec.message());
}

/// Manifests must stay byte-identical across machines and reruns: file
/// names only, never absolute paths, and no timestamps.
void write_manifest(const fs::path& dir, std::string_view command,
                    const nlohmann::ordered_json& options,
                    const nlohmann::ordered_json& results) {
  nlohmann::ordered_json manifest;
  manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  manifest["command"] = command;
  manifest["config_fingerprint"] = to_hex64(fnv1a64(options.dump()));
  manifest["options"] = options;
  for (const auto& [key, value] : results.items()) manifest[key] = value;
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

AppConfig load_app_config(const GlobalOptions& global) {
  AppConfig config;
  if (!global.config_path.empty()) config = AppConfig::load(global.config_path);
  if (global.seed_given) {
    config.curriculum.seed = global.seed;
    config.pipeline.seed = global.seed;
  }
  return config;
}

/// Line-by-line corpus walk that keeps going after a bad line so the user
/// sees every problem at once.
std::size_t walk_corpus_lines(
    const fs::path& path,
    const std::function<void(std::size_t, const nlohmann::json&)>& fn,
    std::vector<std::string>& diagnostics) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++seen;
    std::string where = path.filename().string() + ":" + std::to_string(line_no) + ": ";
    try {
      fn(line_no, nlohmann::json::parse(line));
    } catch (const Error& e) {
      diagnostics.push_back(where + std::string(errc_name(e.code())) + ": " + e.message());
    } catch (const std::exception& e) {
      diagnostics.push_back(where + e.what());
    }
  }
  return seen;
}

int cmd_compile(const GlobalOptions& global, const std::string& corpus_path,
                const std::string& mode_name, std::ostream& out, std::ostream& err) {
  const AppConfig config = load_app_config(global);
  auto mode = transcript_mode_from_name(mode_name);
  if (!mode) fail(Errc::InvalidConfig, "unknown mode '" + mode_name + "'");

  std::vector<std::string> diagnostics;
  std::vector<nlohmann::ordered_json> records;
  std::set<std::string> ids;
  walk_corpus_lines(
      corpus_path,
      [&](std::size_t, const nlohmann::json& j) {
        XsCotSample sample = sample_from_json(j);
        if (!ids.insert(sample.id).second) {
          fail(Errc::DuplicateId, "duplicate sample id '" + sample.id + "'");
        }
        nlohmann::ordered_json record;
        record["id"] = sample.id;
        record["core_lang"] = sample.languages.core;
        record["target_lang"] = sample.languages.target;
        record["transcript"] = build_transcript(sample, *mode, config.markers);
        records.push_back(std::move(record));
      },
      diagnostics);

  if (!diagnostics.empty()) {
    for (const std::string& diagnostic : diagnostics) err << diagnostic << '\n';
    err << diagnostics.size() << " invalid line(s) in " << corpus_path << '\n';
    return 2;
  }

  ensure_out_dir(global.out_dir);
  const fs::path out_path = fs::path(global.out_dir) / "transcripts.jsonl";
  write_jsonl(out_path, records);

  nlohmann::ordered_json options;
  options["input"] = fs::path(corpus_path).filename().string();
  options["mode"] = mode_name;
  options["markers"] = {{"target_instruction", config.markers.target_instruction},
                        {"core_instruction", config.markers.core_instruction},
                        {"core_response", config.markers.core_response},
                        {"target_response", config.markers.target_response}};
  nlohmann::ordered_json results;
  results["records"] = records.size();
  results["output"] = "transcripts.jsonl";
  write_manifest(global.out_dir, "compile", options, results);

  if (!global.quiet) {
    out << "wrote " << records.size() << " transcripts to " << out_path.string() << '\n';
  }
  return 0;
}

int cmd_schedule(const GlobalOptions& global, const AppConfig& config,
                 const std::string& corpus_path, const CurriculumConfig& curriculum,
                 std::ostream& out, std::ostream&) {
  curriculum.validate();
  CompressionConfig compression = config.compression;
  compression.keep_groups = curriculum.k;
  compression.validate();

  const std::vector<XsCotSample> corpus = load_corpus(corpus_path);
  ensure_out_dir(global.out_dir);

  const TokenCounter& counter = counter_for_choice(config.counter);
  nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
  for (std::size_t epoch = 1; epoch <= curriculum.epochs(); ++epoch) {
    std::ostringstream name;
    name << "epoch_" << std::setw(3) << std::setfill('0') << epoch << ".jsonl";
    const fs::path epoch_path = fs::path(global.out_dir) / name.str();
    EpochSummary summary = emit_epoch_dataset(corpus, curriculum, compression, epoch,
                                              epoch_path, config.profiles, config.markers,
                                              counter);
    epochs.push_back({{"epoch", summary.epoch},
                      {"file", name.str()},
                      {"records", summary.records},
                      {"optimizer_reset", summary.optimizer_reset},
                      {"mean_cot_tokens", summary.mean_cot_tokens},
                      {"mean_total_tokens", summary.mean_total_tokens}});
    if (!global.quiet) {
      out << name.str() << ": " << summary.records << " records, mean cot "
          << summary.mean_cot_tokens << (summary.optimizer_reset ? ", reset" : "") << '\n';
    }
  }

  nlohmann::ordered_json options;
  options["input"] = fs::path(corpus_path).filename().string();
  options["curriculum"] = curriculum.to_json();
  options["ellipsis"] = compression.ellipsis_marker;
  nlohmann::ordered_json results;
  results["epochs"] = std::move(epochs);
  write_manifest(global.out_dir, "schedule", options, results);
  return 0;
}

std::string require_env(const char* name, std::ostream& err) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') {
    err << "error: environment variable " << name
        << " is not set; export it or pass --mock for offline runs\n";
    return {};
  }
  return value;
}

int cmd_pipeline(const GlobalOptions& global, AppConfig config,
                 const std::string& pairs_path, bool mock, bool si_testset,
                 std::ostream& out, std::ostream& err) {
  PipelineConfig& pipeline = config.pipeline;
  if (pipeline.voices.find(pipeline.languages.target) == pipeline.voices.end()) {
    pipeline.voices[pipeline.languages.target] = {"voice-0", "voice-1", "voice-2",
                                                  "voice-3"};
  }
  pipeline.validate();

  const std::vector<TextPair> pairs = load_pairs(pairs_path);

  MockTranslator mock_translator;
  MockSynthesizer mock_synthesizer;
  std::unique_ptr<Recognizer> mock_recognizer;
  std::unique_ptr<Translator> rest_translator;
  std::unique_ptr<Synthesizer> rest_synthesizer;
  std::unique_ptr<Recognizer> rest_recognizer;

  Translator* translator = nullptr;
  Synthesizer* synthesizer = nullptr;
  Recognizer* recognizer = nullptr;
  if (mock) {
    // Scripted error rates cycle through [0, 0.1) in input order, so a
    // hundred pairs exercise the whole band around the gate.
    std::map<std::string, double> scripted;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::string translated = mock_translator.translate(
          pairs[i].instruction, pipeline.languages.core, pipeline.languages.target);
      scripted[translated] = static_cast<double>(i % 100) / 1000.0;
    }
    mock_recognizer = std::make_unique<ScriptedRecognizer>(std::move(scripted));
    translator = &mock_translator;
    synthesizer = &mock_synthesizer;
    recognizer = mock_recognizer.get();
  } else {
    std::string translate_token = require_env("XSCOT_TRANSLATE_TOKEN", err);
    std::string tts_token = require_env("XSCOT_TTS_TOKEN", err);
    std::string asr_token = require_env("XSCOT_ASR_TOKEN", err);
    if (translate_token.empty() || tts_token.empty() || asr_token.empty()) return 2;
    if (config.clients.translate_url.empty() || config.clients.tts_url.empty() ||
        config.clients.asr_url.empty()) {
      err << "error: clients.translate_url, clients.tts_url, and clients.asr_url must be "
             "configured for live runs\n";
      return 2;
    }
    rest_translator =
        std::make_unique<RestTranslator>(RestEndpoint{config.clients.translate_url,
                                                      translate_token});
    rest_synthesizer =
        std::make_unique<RestSynthesizer>(RestEndpoint{config.clients.tts_url, tts_token});
    rest_recognizer =
        std::make_unique<RestRecognizer>(RestEndpoint{config.clients.asr_url, asr_token});
    translator = rest_translator.get();
    synthesizer = rest_synthesizer.get();
    recognizer = rest_recognizer.get();
  }
  const ExternalClients clients{*translator, *synthesizer, *recognizer};

  ensure_out_dir(global.out_dir);
  nlohmann::ordered_json options;
  options["input"] = fs::path(pairs_path).filename().string();
  options["mock"] = mock;
  options["core_lang"] = pipeline.languages.core;
  options["target_lang"] = pipeline.languages.target;
  options["wer_threshold"] = pipeline.wer_threshold;
  options["seed"] = pipeline.seed;

  if (si_testset) {
    SiTestSetResult result = build_si_testset(pairs, pipeline, clients);
    write_jsonl(fs::path(global.out_dir) / "si_testset.jsonl", result.records);
    nlohmann::ordered_json results;
    results["pipeline"] = result.manifest;
    results["output"] = "si_testset.jsonl";
    write_manifest(global.out_dir, "pipeline", options, results);
    if (!global.quiet) {
      out << "wrote " << result.records.size() << " evaluation records ("
          << result.failures << " failed)\n";
    }
    return 0;
  }

  PipelineResult result = run_pipeline(pairs, pipeline, clients);
  save_corpus(fs::path(global.out_dir) / "corpus.jsonl", result.accepted);
  nlohmann::ordered_json results;
  results["pipeline"] = result.manifest;
  results["output"] = "corpus.jsonl";
  write_manifest(global.out_dir, "pipeline", options, results);
  if (!global.quiet) {
    out << result.accepted.size() << " of " << pairs.size() << " pairs accepted\n";
  }
  return 0;
}

LabeledCorpus load_stats_corpus(const fs::path& path, const LanguagePair& fallback) {
  LabeledCorpus corpus;
  corpus.label = path.stem().string();
  corpus.languages = fallback;
  bool languages_found = false;
  for_each_jsonl_line(path, [&](std::size_t, const nlohmann::json& j) {
    if (j.contains("transcript") && j["transcript"].is_string()) {
      corpus.transcripts.push_back(j["transcript"].get<std::string>());
    } else if (j.contains("target") && j["target"].is_string()) {
      corpus.transcripts.push_back(j["target"].get<std::string>());
    } else if (j.contains("segments")) {
      XsCotSample sample = sample_from_json(j);
      bool full = true;
      for (Role role : kRoleOrder) {
        if (sample.segment(role).empty()) full = false;
      }
      corpus.transcripts.push_back(build_transcript(
          sample, full ? TranscriptMode::XsCot : TranscriptMode::DirectSft));
    } else {
      fail(Errc::SchemaViolation,
           "record has none of 'transcript', 'target', or 'segments'");
    }
    if (!languages_found && j.contains("core_lang") && j.contains("target_lang")) {
      corpus.languages.core = j["core_lang"].get<std::string>();
      corpus.languages.target = j["target_lang"].get<std::string>();
      languages_found = true;
    }
  });
  return corpus;
}

int cmd_stats(const AppConfig& config, const std::vector<std::string>& paths,
              const LanguagePair& languages, bool as_json, std::ostream& out) {
  std::vector<LabeledCorpus> corpora;
  corpora.reserve(paths.size());
  for (const std::string& path : paths) {
    corpora.push_back(load_stats_corpus(path, languages));
  }
  StatsReport report = stats_report(corpora, counter_for_choice(config.counter),
                                    config.markers);
  if (as_json) {
    nlohmann::ordered_json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    nlohmann::ordered_json options;
    options["core_lang"] = languages.core;
    options["target_lang"] = languages.target;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const std::string& path : paths) inputs.push_back(fs::path(path).filename().string());
    options["inputs"] = std::move(inputs);
    j["config_fingerprint"] = to_hex64(fnv1a64(options.dump()));
    j["options"] = std::move(options);
    j["report"] = report.to_json();
    out << j.dump(2) << '\n';
  } else {
    out << report.render_text();
  }
  return 0;
}

std::vector<LabeledText> load_labeled_texts(const fs::path& path) {
  std::vector<LabeledText> texts;
  for_each_jsonl_line(path, [&](std::size_t, const nlohmann::json& j) {
    if (!j.contains("id") || !j["id"].is_string()) {
      fail(Errc::SchemaViolation, "missing string field 'id'");
    }
    if (!j.contains("text") || !j["text"].is_string()) {
      fail(Errc::SchemaViolation, "missing string field 'text'");
    }
    texts.push_back({j["id"].get<std::string>(), j["text"].get<std::string>()});
  });
  return texts;
}

int cmd_judge(const GlobalOptions& global, const AppConfig& config,
              const std::string& predictions_path, const std::string& references_path,
              const std::string& mock_scores_path, std::ostream& out, std::ostream& err) {
  const std::vector<LabeledText> predictions = load_labeled_texts(predictions_path);
  const std::vector<LabeledText> references = load_labeled_texts(references_path);

  std::unique_ptr<JudgeClient> client;
  if (!mock_scores_path.empty()) {
    std::map<std::string, ScriptedJudgeClient::Entry> replies;
    for_each_jsonl_line(mock_scores_path, [&](std::size_t, const nlohmann::json& j) {
      if (!j.contains("id") || !j["id"].is_string()) {
        fail(Errc::SchemaViolation, "missing string field 'id'");
      }
      ScriptedJudgeClient::Entry entry;
      if (j.contains("reply")) {
        entry.reply = j["reply"].get<std::string>();
      } else if (j.contains("score")) {
        entry.reply = std::to_string(j["score"].get<int>());
      } else {
        fail(Errc::SchemaViolation, "record needs 'score' or 'reply'");
      }
      if (j.contains("retry_reply")) entry.retry_reply = j["retry_reply"].get<std::string>();
      replies[j["id"].get<std::string>()] = std::move(entry);
    });
    client = std::make_unique<ScriptedJudgeClient>(std::move(replies));
  } else {
    std::string token = require_env("XSCOT_JUDGE_TOKEN", err);
    if (token.empty()) return 2;
    if (config.clients.judge_url.empty()) {
      err << "error: clients.judge_url must be configured for live judging\n";
      return 2;
    }
    client = std::make_unique<RestJudgeClient>(RestEndpoint{config.clients.judge_url, token},
                                               config.clients.judge_model);
  }

  JudgeOutcome outcome = judge_corpus(predictions, references, *client);

  ensure_out_dir(global.out_dir);
  std::vector<nlohmann::ordered_json> records;
  records.reserve(outcome.scores.size());
  for (const ScoredSample& score : outcome.scores) {
    records.push_back({{"id", score.id}, {"raw", score.raw}, {"scaled", score.scaled}});
  }
  write_jsonl(fs::path(global.out_dir) / "scores.jsonl", records);

  nlohmann::ordered_json options;
  options["predictions"] = fs::path(predictions_path).filename().string();
  options["references"] = fs::path(references_path).filename().string();
  options["mock"] = !mock_scores_path.empty();
  options["prompt_version"] = kJudgePromptVersion;
  nlohmann::ordered_json results;
  results["scored"] = outcome.scores.size();
  results["excluded"] = outcome.excluded;
  results["mean_scaled"] = outcome.mean_scaled;
  results["output"] = "scores.jsonl";
  write_manifest(global.out_dir, "judge", options, results);

  if (!global.quiet) {
    out << std::fixed << std::setprecision(2) << "mean score: " << outcome.mean_scaled
        << " (" << outcome.scores.size() << " scored, " << outcome.excluded
        << " excluded)\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cross-lingual reasoning dataset compiler and curriculum engine"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config_path, "configuration file (JSON)");
  auto* seed_opt = app.add_option("--seed", global.seed, "seed for all randomized choices");
  app.add_flag("--quiet", global.quiet, "suppress progress output");
  app.add_option("--out-dir", global.out_dir, "output directory (default: out)");

  auto* compile = app.add_subcommand("compile", "validate a corpus and emit transcripts");
  std::string compile_corpus;
  std::string compile_mode = "xs-cot";
  compile->add_option("corpus", compile_corpus, "corpus JSONL file")->required();
  compile->add_option("--mode", compile_mode, "xs-cot, direct-sft, or semi-implicit");

  auto* schedule = app.add_subcommand("schedule", "emit per-epoch internalization datasets");
  std::string schedule_corpus;
  std::uint64_t opt_m = 0;
  double opt_p = 0.0;
  std::uint64_t opt_k = 0;
  std::string opt_strategy;
  std::uint64_t opt_epochs = 0;
  schedule->add_option("corpus", schedule_corpus, "corpus JSONL file")->required();
  auto* m_opt = schedule->add_option("--m", opt_m, "epoch at which internalization completes");
  auto* p_opt = schedule->add_option("--p", opt_p, "extra-sentence probability");
  auto* k_opt = schedule->add_option("--k", opt_k, "word groups kept per sentence");
  auto* strategy_opt =
      schedule->add_option("--strategy", opt_strategy, "all-cot or core-response");
  auto* epochs_opt = schedule->add_option("--epochs", opt_epochs, "total epochs to emit");

  auto* pipeline = app.add_subcommand("pipeline", "filter, translate, synthesize, and gate");
  std::string pipeline_pairs;
  bool pipeline_mock = false;
  bool pipeline_si = false;
  double opt_threshold = 0.0;
  std::string opt_core_lang;
  std::string opt_target_lang;
  pipeline->add_option("pairs", pipeline_pairs, "instruction-response pairs JSONL")
      ->required();
  pipeline->add_flag("--mock", pipeline_mock, "use deterministic offline clients");
  pipeline->add_flag("--si-testset", pipeline_si,
                     "build an evaluation set instead of a gated corpus");
  auto* threshold_opt =
      pipeline->add_option("--wer-threshold", opt_threshold, "acceptance gate (default 0.05)");
  auto* core_lang_opt = pipeline->add_option("--core-lang", opt_core_lang, "source language");
  auto* target_lang_opt =
      pipeline->add_option("--target-lang", opt_target_lang, "speech language");

  auto* stats = app.add_subcommand("stats", "token statistics over transcript corpora");
  std::vector<std::string> stats_paths;
  bool stats_json = false;
  std::string stats_core_lang = "en";
  std::string stats_target_lang = "ja";
  stats->add_option("corpora", stats_paths, "transcript/epoch/corpus JSONL files");
  stats->add_flag("--json", stats_json, "machine-readable output");
  stats->add_option("--core-lang", stats_core_lang, "reasoning language (default en)");
  stats->add_option("--target-lang", stats_target_lang, "response language (default ja)");

  auto* judge = app.add_subcommand("judge", "score predictions against references");
  std::string judge_predictions;
  std::string judge_references;
  std::string judge_mock_scores;
  judge->add_option("--predictions", judge_predictions, "predictions JSONL")->required();
  judge->add_option("--references", judge_references, "references JSONL")->required();
  judge->add_option("--mock-scores", judge_mock_scores, "scripted replies JSONL");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("xscot");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  global.seed_given = seed_opt->count() > 0;

  try {
    if (*compile) return cmd_compile(global, compile_corpus, compile_mode, out, err);

    if (*schedule) {
      AppConfig config = load_app_config(global);
      CurriculumConfig curriculum = config.curriculum;
      if (m_opt->count() > 0) curriculum.m = opt_m;
      if (p_opt->count() > 0) curriculum.p = opt_p;
      if (k_opt->count() > 0) curriculum.k = opt_k;
      if (strategy_opt->count() > 0) {
        auto strategy = strategy_from_name(opt_strategy);
        if (!strategy) fail(Errc::InvalidConfig, "unknown strategy '" + opt_strategy + "'");
        curriculum.strategy = *strategy;
      }
      if (epochs_opt->count() > 0) curriculum.total_epochs = opt_epochs;
      if (global.seed_given) curriculum.seed = global.seed;
      return cmd_schedule(global, config, schedule_corpus, curriculum, out, err);
    }

    if (*pipeline) {
      AppConfig config = load_app_config(global);
      if (core_lang_opt->count() > 0) config.pipeline.languages.core = opt_core_lang;
      if (target_lang_opt->count() > 0) config.pipeline.languages.target = opt_target_lang;
      if (config.pipeline.languages.core.empty()) config.pipeline.languages.core = "en";
      if (config.pipeline.languages.target.empty()) config.pipeline.languages.target = "de";
      if (threshold_opt->count() > 0) config.pipeline.wer_threshold = opt_threshold;
      return cmd_pipeline(global, std::move(config), pipeline_pairs, pipeline_mock,
                          pipeline_si, out, err);
    }

    if (*stats) {
      AppConfig config = load_app_config(global);
      return cmd_stats(config, stats_paths, {stats_core_lang, stats_target_lang},
                       stats_json, out);
    }

    if (*judge) {
      AppConfig config = load_app_config(global);
      return cmd_judge(global, config, judge_predictions, judge_references,
                       judge_mock_scores, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_user_error() ? 2 : 1;
  } catch (const ClientError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace xscot
