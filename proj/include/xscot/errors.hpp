#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xscot {

/// Error codes shared across the toolkit. The CLI maps these onto exit
/// codes: user/input problems exit 2, runtime failures exit 1.
enum class Errc {
  MissingSegment,
  MarkerCollision,
  NoMarkersFound,
  DuplicateRole,
  InvalidLanguagePair,
  InvalidMarkerSet,
  InvalidConfig,
  EpochOutOfRange,
  DuplicateId,
  EmptyReference,
  OutOfRange,
  AlignmentMismatch,
  UnparseableJudgeReply,
  SchemaViolation,
  IoFailure,
  SinkUnavailable,
  ClientFailure,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

  /// The message without the error-code prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

  /// True for errors caused by bad user input or configuration rather
  /// than by the environment at runtime.
  bool is_user_error() const noexcept;

 private:
  Errc code_;
  std::string message_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace xscot
