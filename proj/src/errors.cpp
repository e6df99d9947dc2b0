#include "xscot/errors.hpp"

namespace xscot {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::MissingSegment: return "MissingSegment";
    case Errc::MarkerCollision: return "MarkerCollision";
    case Errc::NoMarkersFound: return "NoMarkersFound";
    case Errc::DuplicateRole: return "DuplicateRole";
    case Errc::InvalidLanguagePair: return "InvalidLanguagePair";
    case Errc::InvalidMarkerSet: return "InvalidMarkerSet";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EpochOutOfRange: return "EpochOutOfRange";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::AlignmentMismatch: return "AlignmentMismatch";
    case Errc::UnparseableJudgeReply: return "UnparseableJudgeReply";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::IoFailure: return "IoFailure";
    case Errc::SinkUnavailable: return "SinkUnavailable";
    case Errc::ClientFailure: return "ClientFailure";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code),
      message_(message) {}

bool Error::is_user_error() const noexcept {
  switch (code_) {
    case Errc::SinkUnavailable:
    case Errc::ClientFailure:
      return false;
    default:
      return true;
  }
}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace xscot
