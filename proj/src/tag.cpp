#include "longner/tag.hpp"

#include "longner/error.hpp"

namespace longner {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace

Tag parse_tag(std::string_view raw) {
  const auto label = trim(raw);
  if (label.empty()) throw Error(ErrorCode::EmptyLabel, "empty label");
  if (label == "O") return Tag::outside();

  const char head = label.front();
  if (head != 'B' && head != 'I') {
    throw Error(ErrorCode::MalformedLabel,
                "label has no B/I/O prefix: '" + std::string(label) + "'");
  }
  auto type = label.substr(1);
  if (!type.empty() && type.front() == '-') type.remove_prefix(1);
  if (type.empty()) {
    throw Error(ErrorCode::MalformedLabel,
                "label has an empty entity type: '" + std::string(label) + "'");
  }
  for (const char c : type) {
    if (c < 'A' || c > 'Z') {
      throw Error(ErrorCode::MalformedLabel,
                  "entity type must be Latin capitals: '" + std::string(label) + "'");
    }
  }
  return Tag{head == 'B' ? Prefix::B : Prefix::I, std::string(type)};
}

std::string format_tag(const Tag& tag, LabelStyle style) {
  if (tag.is_outside()) return "O";
  std::string out(1, static_cast<char>(tag.prefix));
  if (style == LabelStyle::hyphenated) out += '-';
  out += tag.type;
  return out;
}

bool iob_allows(const Tag* prev, const Tag& next) {
  if (next.prefix != Prefix::I) return true;
  return prev != nullptr && !prev->is_outside() && prev->type == next.type;
}

LabelStyle parse_label_style(std::string_view name) {
  if (name == "paper_raw" || name == "paper-raw" || name == "raw") {
    return LabelStyle::paper_raw;
  }
  if (name == "hyphenated") return LabelStyle::hyphenated;
  throw Error(ErrorCode::InvalidConfig, "unknown label style: " + std::string(name));
}

}  // namespace longner
