#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xscot {

/// Failure from an external service. Retryable errors (timeouts, 5xx,
/// 429) may be re-attempted; fatal ones mark the record failed.
class ClientError : public std::runtime_error {
 public:
  ClientError(std::string message, bool retryable)
      : std::runtime_error(std::move(message)), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(std::string_view text, std::string_view source_lang,
                                std::string_view target_lang) = 0;
};

class Synthesizer {
 public:
  virtual ~Synthesizer() = default;
  /// Returns an opaque audio reference (URI or path).
  virtual std::string synthesize(std::string_view text, std::string_view lang,
                                 std::string_view voice) = 0;
};

class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::string transcribe(std::string_view audio_ref, std::string_view lang) = 0;
};

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  /// Sends the prompt and returns the raw reply text. attempt is 1-based
  /// so scripted implementations can vary their second answer.
  virtual std::string judge(std::string_view sample_id, std::string_view prompt,
                            std::size_t attempt) = 0;
};

struct ExternalClients {
  Translator& translator;
  Synthesizer& synthesizer;
  Recognizer& recognizer;
};

// --- Deterministic mock implementations (pure functions of their inputs) ---

/// Rotates ASCII letters by one place so the "translation" is a distinct,
/// invertible text with the same word structure.
class MockTranslator final : public Translator {
 public:
  std::string translate(std::string_view text, std::string_view source_lang,
                        std::string_view target_lang) override;
};

/// Encodes its inputs into a mock:// URI so the mock recognizer can
/// recover the exact text.
class MockSynthesizer final : public Synthesizer {
 public:
  std::string synthesize(std::string_view text, std::string_view lang,
                         std::string_view voice) override;
};

/// Decodes mock:// URIs back to the synthesized text (a perfect ASR).
class MockRecognizer final : public Recognizer {
 public:
  std::string transcribe(std::string_view audio_ref, std::string_view lang) override;
};

/// Perfect ASR degraded on purpose: for texts listed in the script, the
/// first floor(wer * units) units of the transcript are replaced with
/// out-of-vocabulary tokens, producing exactly that substitution rate.
class ScriptedRecognizer final : public Recognizer {
 public:
  explicit ScriptedRecognizer(std::map<std::string, double> wer_by_text)
      : wer_by_text_(std::move(wer_by_text)) {}
  std::string transcribe(std::string_view audio_ref, std::string_view lang) override;

 private:
  std::map<std::string, double> wer_by_text_;
};

/// Replies from a fixed per-id script; ids not in the script get "0".
/// A second attempt returns the retry entry when one is configured.
class ScriptedJudgeClient final : public JudgeClient {
 public:
  struct Entry {
    std::string reply;
    std::string retry_reply;  // empty: repeat the first reply
  };
  explicit ScriptedJudgeClient(std::map<std::string, Entry> replies)
      : replies_(std::move(replies)) {}
  std::string judge(std::string_view sample_id, std::string_view prompt,
                    std::size_t attempt) override;

 private:
  std::map<std::string, Entry> replies_;
};

// --- REST implementations -------------------------------------------------

/// Shared plumbing: POST JSON to base_url + path with a bearer token,
/// expect a JSON reply. 5xx and 429 raise retryable errors, other HTTP
/// failures fatal ones.
struct RestEndpoint {
  std::string base_url;  // e.g. "https://translate.example.com"
  std::string token;     // bearer credential, from the environment
  int timeout_seconds = 30;
};

class RestTranslator final : public Translator {
 public:
  explicit RestTranslator(RestEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string translate(std::string_view text, std::string_view source_lang,
                        std::string_view target_lang) override;

 private:
  RestEndpoint endpoint_;
};

class RestSynthesizer final : public Synthesizer {
 public:
  explicit RestSynthesizer(RestEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string synthesize(std::string_view text, std::string_view lang,
                         std::string_view voice) override;

 private:
  RestEndpoint endpoint_;
};

class RestRecognizer final : public Recognizer {
 public:
  explicit RestRecognizer(RestEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string transcribe(std::string_view audio_ref, std::string_view lang) override;

 private:
  RestEndpoint endpoint_;
};

/// Chat-completion style judge: sends the prompt as a single user message
/// at temperature 0 and returns the first choice's content.
class RestJudgeClient final : public JudgeClient {
 public:
  RestJudgeClient(RestEndpoint endpoint, std::string model)
      : endpoint_(std::move(endpoint)), model_(std::move(model)) {}
  std::string judge(std::string_view sample_id, std::string_view prompt,
                    std::size_t attempt) override;

 private:
  RestEndpoint endpoint_;
  std::string model_;
};

std::string percent_encode(std::string_view text);
std::string percent_decode(std::string_view text);

}  // namespace xscot
