#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace majinlink::detail {

/// One lexical unit of an XML/XHTML document. Tolerant of sloppy markup.
struct MarkupToken {
  enum class Kind { Text, Open, Close, SelfClosing, CData, Skip };
  Kind kind = Kind::Text;
  std::string_view raw;   // full token text
  std::string name;       // lowercased local name for tags
};

class MarkupScanner {
 public:
  explicit MarkupScanner(std::string_view doc) : doc_(doc) {}
  std::optional<MarkupToken> next();
  /// Skips to just after the matching close tag of `name` (raw text elements).
  void skip_until_close(std::string_view name);

 private:
  std::string_view doc_;
  std::size_t pos_ = 0;
};

/// Value of attribute `name` (local name match, case-insensitive) in a tag.
std::optional<std::string> tag_attribute(std::string_view tag, std::string_view name);

/// Decodes predefined, common HTML and numeric character references.
/// Unknown references are kept verbatim.
std::string decode_entities(std::string_view text);

/// Plain text of an XHTML document: head, script and style dropped, one
/// paragraph per line, whitespace collapsed inside paragraphs.
std::string xhtml_to_text(std::string_view doc);

bool valid_utf8(std::string_view s);

}  // namespace majinlink::detail
