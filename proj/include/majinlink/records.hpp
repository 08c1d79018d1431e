#pragma once

// Work/edition scaffold and book identifier canonicalization.

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "majinlink/error.hpp"

namespace majinlink {

enum class IdKind { Isbn13, Asin };

/// A canonical book identifier. ISBN-10s are always stored in their ISBN-13
/// form, so two identifiers are equal iff they name the same book number.
struct Identifier {
  IdKind kind = IdKind::Isbn13;
  std::string value;

  friend auto operator<=>(const Identifier&, const Identifier&) = default;
  friend bool operator==(const Identifier&, const Identifier&) = default;
};

using IdentifierSet = std::set<Identifier>;

std::string_view to_string(IdKind kind);

/// Canonicalizes an ISBN-10, ISBN-13 or ASIN. Hyphens and whitespace are
/// stripped and letters uppercased. Invalid input yields nullopt.
std::optional<Identifier> normalize_identifier(std::string_view raw);

bool is_valid_isbn10(std::string_view digits);
bool is_valid_isbn13(std::string_view digits);
/// Check digit character ('0'..'9') for the first 12 digits of an ISBN-13.
char isbn13_check_digit(std::string_view first12);
/// 978-prefixed ISBN-13 for a valid ISBN-10. No validation.
std::string isbn10_to_isbn13(std::string_view isbn10);

/// Canonicalizes a list of raw identifier strings, dropping invalid ones.
IdentifierSet normalize_identifiers(std::span<const std::string> raw);

/// Lowercase two-letter primary subtag ("en-US" -> "en", "eng" -> "en",
/// "French" -> "fr"), or "und" when nothing recognizable is given.
std::string normalize_language(std::string_view raw);

struct WorkRecord {
  std::string work_id;
  std::string title;
  std::vector<std::string> author_ids;
  std::vector<std::string> author_names;
  std::optional<int> first_publication_year;
  std::optional<std::vector<std::string>> genres;
  std::optional<double> avg_rating;
  std::optional<std::int64_t> ratings_count;
  std::optional<std::int64_t> reviews_count;
  std::vector<std::string> edition_ids;
};

struct EditionRecord {
  std::string edition_id;
  std::string work_id;
  std::string title;
  std::string language = "und";
  IdentifierSet identifiers;
  std::optional<int> publication_year;
};

struct AuthorRecord {
  std::string author_id;
  std::string name;
  std::optional<std::int64_t> ratings_count;
  std::vector<std::string> work_ids;
};

/// Throws ContractViolation if the record breaks its invariants.
void validate(const WorkRecord& work, int current_year);
void validate(const EditionRecord& edition);

int current_calendar_year();

/// Union of the editions' identifiers. Every edition must belong to `work`.
IdentifierSet work_identifier_set(const WorkRecord& work,
                                  std::span<const EditionRecord> editions);

struct DatablePartition {
  std::vector<WorkRecord> retained;
  std::vector<WorkRecord> discarded;
};

/// Keeps works with a first publication year.
DatablePartition filter_datable_works(std::span<const WorkRecord> works);

}  // namespace majinlink
