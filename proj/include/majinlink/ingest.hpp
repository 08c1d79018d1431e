#pragma once

// Catalogue triage, EPUB text extraction, text normalization and shingling.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "majinlink/records.hpp"

namespace majinlink {

struct ShadowItem {
  std::string item_id;
  std::optional<std::string> declared_title;
  std::optional<std::string> declared_language;
  std::string extension;
  std::uint64_t size_bytes = 0;
  /// Identifiers from the shadow-library catalogue metadata.
  IdentifierSet identifiers;
  /// Identifiers harvested from the EPUB package metadata during ingest.
  IdentifierSet embedded_identifiers;
  std::optional<std::string> text_ref;

  IdentifierSet all_identifiers() const;
};

enum class FormatClass { EpubClass, Pdf, Discard };

std::string_view to_string(FormatClass format);

/// epub/mobi/azw/azw3/fb2 -> EpubClass, pdf -> Pdf, anything else -> Discard.
/// Case-insensitive; a leading dot is ignored.
FormatClass classify_format(std::string_view extension);

inline constexpr std::uint64_t kMinItemBytes = 10ULL * 1024;
inline constexpr std::uint64_t kMaxItemBytes = 10ULL * 1024 * 1024;

enum class SizeDecision { Retained, TooSmall, TooLarge };

/// Both bounds are inclusive.
SizeDecision classify_size(std::uint64_t size_bytes);

struct SizePartition {
  std::vector<ShadowItem> retained;
  std::vector<ShadowItem> too_small;
  std::vector<ShadowItem> too_large;
};

SizePartition size_filter(std::span<const ShadowItem> items);

struct EpubContent {
  std::string text;
  std::vector<std::string> raw_identifiers;  // dc:identifier values, verbatim
  std::optional<std::string> title;
};

/// Reads the container, follows the spine and returns plain text with one
/// paragraph per line and a blank line between spine documents.
/// Throws ExtractionError on any structural failure.
EpubContent extract_epub(std::span<const std::byte> epub_bytes);
std::string extract_epub_text(std::span<const std::byte> epub_bytes);

/// NFKC, lowercase, runs of whitespace/punctuation collapsed to one space, trimmed.
std::string normalize_text(std::string_view text);

struct ShingleSet {
  std::string item_id;
  std::vector<std::uint64_t> hashes;  // sorted ascending, unique
};

inline constexpr std::size_t kShingleWords = 3;

/// Hashes every k-word window of normalized text. Texts with fewer than k
/// words hash as a single shingle; empty text yields an empty set.
ShingleSet shingle(std::string_view normalized_text, std::size_t k = kShingleWords,
                   std::string item_id = {});

/// Exact Jaccard of two sorted hash sets. Two empty sets give 1.
double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

void write_shingles(const std::filesystem::path& path, std::span<const std::uint64_t> hashes);
std::vector<std::uint64_t> read_shingles(const std::filesystem::path& path);

}  // namespace majinlink
