#include <algorithm>
#include <cctype>

#include "majinlink/ingest.hpp"

namespace majinlink {

IdentifierSet ShadowItem::all_identifiers() const {
  IdentifierSet out = identifiers;
  out.insert(embedded_identifiers.begin(), embedded_identifiers.end());
  return out;
}

std::string_view to_string(FormatClass format) {
  switch (format) {
    case FormatClass::EpubClass: return "epub";
    case FormatClass::Pdf: return "pdf";
    case FormatClass::Discard: return "discard";
  }
  return "discard";
}

FormatClass classify_format(std::string_view extension) {
  if (!extension.empty() && extension.front() == '.') extension.remove_prefix(1);
  std::string ext(extension);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  // Formats convertible to EPUB without significant loss count as EPUB.
  if (ext == "epub" || ext == "mobi" || ext == "azw" || ext == "azw3" || ext == "fb2") {
    return FormatClass::EpubClass;
  }
  if (ext == "pdf") return FormatClass::Pdf;
  return FormatClass::Discard;
}

SizeDecision classify_size(std::uint64_t size_bytes) {
  if (size_bytes < kMinItemBytes) return SizeDecision::TooSmall;
  if (size_bytes > kMaxItemBytes) return SizeDecision::TooLarge;
  return SizeDecision::Retained;
}

SizePartition size_filter(std::span<const ShadowItem> items) {
  SizePartition out;
  for (const auto& item : items) {
    switch (classify_size(item.size_bytes)) {
      case SizeDecision::Retained: out.retained.push_back(item); break;
      case SizeDecision::TooSmall: out.too_small.push_back(item); break;
      case SizeDecision::TooLarge: out.too_large.push_back(item); break;
    }
  }
  return out;
}

}  // namespace majinlink
