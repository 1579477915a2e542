#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace longner {

enum class Prefix : char { B = 'B', I = 'I', O = 'O' };

enum class LabelStyle {
  paper_raw,   // "BNEM"
  hyphenated,  // "B-NEM"
};

// One IOB label. `type` is empty exactly when the prefix is O.
struct Tag {
  Prefix prefix = Prefix::O;
  std::string type;

  static Tag outside() { return {}; }
  static Tag begin(std::string type) { return {Prefix::B, std::move(type)}; }
  static Tag inside(std::string type) { return {Prefix::I, std::move(type)}; }

  bool is_outside() const { return prefix == Prefix::O; }

  friend bool operator==(const Tag&, const Tag&) = default;
};

// Accepts "O", "BNEM", "B-NEM", "IED", ... after trimming ASCII whitespace.
// Throws Error{EmptyLabel} or Error{MalformedLabel}.
Tag parse_tag(std::string_view raw);

std::string format_tag(const Tag& tag, LabelStyle style = LabelStyle::hyphenated);

// True when `next` may legally follow `prev` (I-X only after B-X or I-X).
bool iob_allows(const Tag* prev, const Tag& next);

LabelStyle parse_label_style(std::string_view name);

}  // namespace longner
