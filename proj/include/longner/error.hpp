#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace longner {

enum class ErrorCode {
  EmptyLabel,
  MalformedLabel,
  MalformedRow,
  SplitSentence,
  TooFewSentences,
  InvalidK,
  EmptyList,
  IndexOutOfRange,
  EmptyModel,
  EmptyCorpus,
  InvalidConfig,
  UnknownVersion,
  MalformedModelFile,
  InvalidStride,
  LengthMismatch,
  Misaligned,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace longner
