#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "xscot/core.hpp"
#include "xscot/errors.hpp"
#include "xscot/jsonl.hpp"

using namespace xscot;

namespace {

XsCotSample make_sample() {
  XsCotSample s;
  s.id = "sample-001";
  s.languages = {"en", "ja"};
  s.audio_ref = "audio/001.wav";
  s.segment(Role::TargetInstruction) = "こんにちは世界。";
  s.segment(Role::CoreInstruction) = "Say hello to the world.";
  s.segment(Role::CoreResponse) = "Hello is a greeting. It is friendly.";
  s.segment(Role::TargetResponse) = "こんにちは。";
  return s;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

TEST_CASE("role names round-trip") {
  for (Role role : kRoleOrder) {
    auto back = role_from_name(role_name(role));
    REQUIRE(back.has_value());
    CHECK(*back == role);
  }
  CHECK(role_name(Role::TargetInstruction) == "target_instruction");
  CHECK(role_name(Role::CoreInstruction) == "core_instruction");
  CHECK(role_name(Role::CoreResponse) == "core_response");
  CHECK(role_name(Role::TargetResponse) == "target_response");
  CHECK_FALSE(role_from_name("bogus").has_value());
}

TEST_CASE("reasoning roles are the first three") {
  CHECK(is_cot_role(Role::TargetInstruction));
  CHECK(is_cot_role(Role::CoreInstruction));
  CHECK(is_cot_role(Role::CoreResponse));
  CHECK_FALSE(is_cot_role(Role::TargetResponse));
}

TEST_CASE("language pair validation") {
  CHECK_NOTHROW(validate_language_pair({"en", "ja"}));
  CHECK_NOTHROW(validate_language_pair({"en", "zh-CN"}));
  CHECK_THROWS_AS(validate_language_pair({"", "ja"}), Error);
  CHECK_THROWS_AS(validate_language_pair({"en", ""}), Error);
  CHECK_THROWS_AS(validate_language_pair({"en", "en"}), Error);
  CHECK_THROWS_AS(validate_language_pair({"EN", "ja"}), Error);
}

TEST_CASE("cjk detection uses the primary subtag") {
  CHECK(is_cjk_language("ja"));
  CHECK(is_cjk_language("zh"));
  CHECK(is_cjk_language("ko"));
  CHECK(is_cjk_language("ja-JP"));
  CHECK(is_cjk_language("zh-Hant-TW"));
  CHECK_FALSE(is_cjk_language("en"));
  CHECK_FALSE(is_cjk_language("de"));
  CHECK_FALSE(is_cjk_language("jap"));
  CHECK(is_space_delimited("en"));
  CHECK_FALSE(is_space_delimited("ja"));
}

TEST_CASE("segment language follows the role") {
  LanguagePair pair{"en", "ja"};
  CHECK(segment_language(Role::TargetInstruction, pair) == "ja");
  CHECK(segment_language(Role::CoreInstruction, pair) == "en");
  CHECK(segment_language(Role::CoreResponse, pair) == "en");
  CHECK(segment_language(Role::TargetResponse, pair) == "ja");
}

TEST_CASE("marker set validation") {
  CHECK_NOTHROW(MarkerSet{}.validate());
  MarkerSet empty;
  empty.core_response = "";
  CHECK_THROWS_AS(empty.validate(), Error);
  MarkerSet dup;
  dup.core_response = dup.core_instruction;
  CHECK_THROWS_AS(dup.validate(), Error);
  MarkerSet nested;
  nested.target_instruction = "[A]";
  nested.core_instruction = "[A]X";
  CHECK_THROWS_AS(nested.validate(), Error);
}

TEST_CASE("transcript layout spaces only space-delimited segments") {
  XsCotSample s = make_sample();
  CHECK(build_transcript(s, TranscriptMode::XsCot) ==
        "[TGT-INSTR]こんにちは世界。[CORE-INSTR] Say hello to the world. "
        "[CORE-RESP] Hello is a greeting. It is friendly. [TGT-RESP]こんにちは。");
  CHECK(build_transcript(s, TranscriptMode::DirectSft) == "[TGT-RESP]こんにちは。");
}

TEST_CASE("transcript layout with a space-delimited target") {
  XsCotSample s;
  s.id = "x";
  s.languages = {"en", "de"};
  s.segment(Role::TargetInstruction) = "Hallo Welt.";
  s.segment(Role::CoreInstruction) = "Say hello.";
  s.segment(Role::CoreResponse) = "Hello.";
  s.segment(Role::TargetResponse) = "Hallo.";
  CHECK(build_transcript(s, TranscriptMode::XsCot) ==
        "[TGT-INSTR] Hallo Welt. [CORE-INSTR] Say hello. [CORE-RESP] Hello. "
        "[TGT-RESP] Hallo.");
}

TEST_CASE("segments are trimmed before serialization") {
  XsCotSample s = make_sample();
  s.segment(Role::CoreInstruction) = "  Say hello to the world.\n";
  CHECK(build_transcript(s, TranscriptMode::XsCot) ==
        build_transcript(make_sample(), TranscriptMode::XsCot));
}

TEST_CASE("missing required segments are rejected") {
  XsCotSample s = make_sample();
  s.segment(Role::CoreResponse) = "";
  try {
    build_transcript(s, TranscriptMode::XsCot);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingSegment);
  }
  // Direct mode only needs the answer segment.
  CHECK_NOTHROW(build_transcript(s, TranscriptMode::DirectSft));
}

TEST_CASE("marker text inside a segment is a collision") {
  XsCotSample s = make_sample();
  s.segment(Role::CoreResponse) = "Quoting [TGT-RESP] verbatim breaks parsing.";
  try {
    build_transcript(s, TranscriptMode::XsCot);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MarkerCollision);
  }
}

TEST_CASE("parse recovers the built segments") {
  XsCotSample s = make_sample();
  for (TranscriptMode mode :
       {TranscriptMode::XsCot, TranscriptMode::SemiImplicit, TranscriptMode::DirectSft}) {
    ParsedTranscript parsed = parse_transcript(build_transcript(s, mode));
    CHECK(parsed.canonical_order);
    if (mode == TranscriptMode::DirectSft) {
      CHECK(parsed.mode == TranscriptMode::DirectSft);
      CHECK_FALSE(parsed.segment(Role::CoreResponse).has_value());
    } else {
      CHECK(parsed.mode == TranscriptMode::XsCot);
      for (Role role : kRoleOrder) {
        REQUIRE(parsed.segment(role).has_value());
        CHECK(*parsed.segment(role) == s.segment(role));
      }
    }
    CHECK(*parsed.segment(Role::TargetResponse) == "こんにちは。");
  }
}

TEST_CASE("parse flags out-of-order segments") {
  ParsedTranscript parsed = parse_transcript(
      "[CORE-INSTR] Say hello. [TGT-INSTR]こんにちは。[TGT-RESP]やあ。");
  CHECK_FALSE(parsed.canonical_order);
  REQUIRE(parsed.segment(Role::CoreInstruction).has_value());
  CHECK(*parsed.segment(Role::CoreInstruction) == "Say hello.");
  CHECK(*parsed.segment(Role::TargetInstruction) == "こんにちは。");
}

TEST_CASE("parse rejects duplicate and absent markers") {
  try {
    parse_transcript("[TGT-RESP]a[TGT-RESP]b");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateRole);
  }
  try {
    parse_transcript("no markers at all");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoMarkersFound);
  }
}

TEST_CASE("parse ignores text before the first marker") {
  ParsedTranscript parsed = parse_transcript("<s> preamble [TGT-RESP] Hallo.");
  CHECK(parsed.mode == TranscriptMode::DirectSft);
  CHECK(*parsed.segment(Role::TargetResponse) == "Hallo.");
}

TEST_CASE("round-trip holds for generated samples") {
  std::mt19937 rng(7);
  const std::vector<std::string> ja_bits = {"こんにちは", "世界", "です", "まず",
                                            "、", "答え"};
  const std::vector<std::string> en_bits = {"hello", "world", "answer", "first",
                                            "step", "value"};
  auto make_text = [&](const std::vector<std::string>& bits, bool spaced) {
    std::string out;
    std::uniform_int_distribution<std::size_t> pick(0, bits.size() - 1);
    std::uniform_int_distribution<int> count(1, 6);
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
      if (spaced && i > 0) out += ' ';
      out += bits[pick(rng)];
    }
    out += spaced ? "." : "。";
    return out;
  };
  for (int i = 0; i < 500; ++i) {
    XsCotSample s;
    s.id = "gen-" + std::to_string(i);
    s.languages = (i % 2 == 0) ? LanguagePair{"en", "ja"} : LanguagePair{"ja", "en"};
    bool core_spaced = is_space_delimited(s.languages.core);
    s.segment(Role::TargetInstruction) = make_text(core_spaced ? ja_bits : en_bits,
                                                   !core_spaced);
    s.segment(Role::CoreInstruction) = make_text(core_spaced ? en_bits : ja_bits,
                                                 core_spaced);
    s.segment(Role::CoreResponse) = make_text(core_spaced ? en_bits : ja_bits,
                                              core_spaced);
    s.segment(Role::TargetResponse) = make_text(core_spaced ? ja_bits : en_bits,
                                                !core_spaced);
    ParsedTranscript parsed = parse_transcript(build_transcript(s, TranscriptMode::XsCot));
    for (Role role : kRoleOrder) {
      REQUIRE(parsed.segment(role).has_value());
      CHECK(*parsed.segment(role) == s.segment(role));
    }
  }
}

TEST_CASE("sample json codec") {
  XsCotSample s = make_sample();
  s.meta = {{"topic", "greetings"}};
  nlohmann::ordered_json j = sample_to_json(s);
  CHECK(j.begin().key() == "id");
  XsCotSample back = sample_from_json(j);
  CHECK(back.id == s.id);
  CHECK(back.languages.core == "en");
  CHECK(back.languages.target == "ja");
  CHECK(back.audio_ref == s.audio_ref);
  for (Role role : kRoleOrder) CHECK(back.segment(role) == s.segment(role));
  CHECK(back.meta == s.meta);
}

TEST_CASE("sample json omits empty optional fields") {
  XsCotSample s = make_sample();
  s.audio_ref.clear();
  s.segment(Role::TargetInstruction).clear();
  nlohmann::ordered_json j = sample_to_json(s);
  CHECK_FALSE(j.contains("audio_ref"));
  CHECK_FALSE(j.contains("meta"));
  CHECK_FALSE(j["segments"].contains("target_instruction"));
}

TEST_CASE("sample json rejects unknown keys") {
  nlohmann::json good = sample_to_json(make_sample());
  nlohmann::json extra = good;
  extra["unexpected"] = 1;
  try {
    sample_from_json(extra);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaViolation);
  }
  nlohmann::json bad_role = good;
  bad_role["segments"]["core_respnse"] = "typo";
  CHECK_THROWS_AS(sample_from_json(bad_role), Error);
  nlohmann::json no_id = good;
  no_id.erase("id");
  CHECK_THROWS_AS(sample_from_json(no_id), Error);
}

TEST_CASE("corpus files round-trip and reject duplicate ids") {
  TempFile file("xscot_test_corpus.jsonl");
  XsCotSample a = make_sample();
  XsCotSample b = make_sample();
  b.id = "sample-002";
  save_corpus(file.path, {a, b});
  std::vector<XsCotSample> loaded = load_corpus(file.path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].id == a.id);
  CHECK(loaded[1].segment(Role::CoreResponse) == b.segment(Role::CoreResponse));

  save_corpus(file.path, {a, a});
  try {
    load_corpus(file.path);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateId);
  }
}

TEST_CASE("jsonl diagnostics carry file and line") {
  TempFile file("xscot_test_bad.jsonl");
  {
    std::ofstream out(file.path);
    out << R"({"ok": 1})" << "\n" << "not json\n";
  }
  try {
    for_each_jsonl_line(file.path, [](std::size_t, const nlohmann::json&) {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaViolation);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}
