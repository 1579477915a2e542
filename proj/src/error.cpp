#include "longner/error.hpp"

namespace longner {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::MalformedLabel: return "MalformedLabel";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::SplitSentence: return "SplitSentence";
    case ErrorCode::TooFewSentences: return "TooFewSentences";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::MalformedModelFile: return "MalformedModelFile";
    case ErrorCode::InvalidStride: return "InvalidStride";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Misaligned: return "Misaligned";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace longner
