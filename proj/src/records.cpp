#include "majinlink/records.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>

#include <spdlog/spdlog.h>

namespace majinlink {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string strip_separators(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

bool looks_like_asin(std::string_view s) {
  if (s.size() != 10 || s[0] != 'B') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return is_digit(c) || (c >= 'A' && c <= 'Z');
  });
}

}  // namespace

std::string_view to_string(IdKind kind) {
  return kind == IdKind::Isbn13 ? "ISBN13" : "ASIN";
}

bool is_valid_isbn10(std::string_view s) {
  if (s.size() != 10) return false;
  int sum = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    int v;
    if (is_digit(s[i])) {
      v = s[i] - '0';
    } else if (i == 9 && (s[i] == 'X' || s[i] == 'x')) {
      v = 10;
    } else {
      return false;
    }
    sum += static_cast<int>(10 - i) * v;
  }
  return sum % 11 == 0;
}

char isbn13_check_digit(std::string_view first12) {
  int sum = 0;
  for (std::size_t i = 0; i < 12; ++i) sum += (first12[i] - '0') * (i % 2 == 0 ? 1 : 3);
  return static_cast<char>('0' + (10 - sum % 10) % 10);
}

bool is_valid_isbn13(std::string_view s) {
  if (s.size() != 13 || !std::all_of(s.begin(), s.end(), is_digit)) return false;
  return isbn13_check_digit(s.substr(0, 12)) == s[12];
}

std::string isbn10_to_isbn13(std::string_view isbn10) {
  std::string out = "978";
  out.append(isbn10.substr(0, 9));
  out.push_back(isbn13_check_digit(out));
  return out;
}

std::optional<Identifier> normalize_identifier(std::string_view raw) {
  const std::string s = strip_separators(raw);
  if (s.size() == 10) {
    // Amazon reuses ISBN-10s as ASINs for books; those stay ISBNs.
    if (is_valid_isbn10(s)) return Identifier{IdKind::Isbn13, isbn10_to_isbn13(s)};
    if (looks_like_asin(s)) return Identifier{IdKind::Asin, s};
  } else if (s.size() == 13 && is_valid_isbn13(s)) {
    return Identifier{IdKind::Isbn13, s};
  }
  spdlog::debug("rejected identifier '{}'", raw);
  return std::nullopt;
}

IdentifierSet normalize_identifiers(std::span<const std::string> raw) {
  IdentifierSet out;
  for (const auto& r : raw) {
    if (auto id = normalize_identifier(r)) out.insert(std::move(*id));
  }
  return out;
}

std::string normalize_language(std::string_view raw) {
  static const std::map<std::string, std::string, std::less<>> kAliases = {
      {"eng", "en"}, {"english", "en"},    {"fre", "fr"},     {"fra", "fr"},
      {"french", "fr"}, {"francais", "fr"}, {"ger", "de"},   {"deu", "de"},
      {"german", "de"}, {"deutsch", "de"},  {"spa", "es"},   {"spanish", "es"},
      {"espanol", "es"}, {"rus", "ru"},     {"russian", "ru"}, {"chi", "zh"},
      {"zho", "zh"},    {"chinese", "zh"},  {"ita", "it"},   {"italian", "it"},
      {"por", "pt"},    {"portuguese", "pt"}, {"dut", "nl"}, {"nld", "nl"},
      {"dutch", "nl"},  {"jpn", "ja"},      {"japanese", "ja"}, {"pol", "pl"},
      {"polish", "pl"}, {"ara", "ar"},      {"arabic", "ar"}, {"und", "und"},
  };
  std::string lowered;
  for (char c : raw) {
    if (c == '-' || c == '_') break;  // primary subtag only
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (auto it = kAliases.find(lowered); it != kAliases.end()) return it->second;
  if (lowered.size() == 2 && std::all_of(lowered.begin(), lowered.end(),
                                         [](char c) { return c >= 'a' && c <= 'z'; })) {
    return lowered;
  }
  return "und";
}

int current_calendar_year() {
  const auto now = std::chrono::system_clock::now();
  const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(now)};
  return static_cast<int>(ymd.year());
}

void validate(const WorkRecord& work, int current_year) {
  if (work.work_id.empty()) throw Error(ErrorCode::ContractViolation, "work without work_id");
  if (work.edition_ids.empty()) {
    throw Error(ErrorCode::ContractViolation, "work " + work.work_id + " has no editions");
  }
  if (work.first_publication_year && *work.first_publication_year > current_year) {
    throw Error(ErrorCode::ContractViolation,
                "work " + work.work_id + " first published in the future");
  }
  if (work.ratings_count && *work.ratings_count < 0) {
    throw Error(ErrorCode::ContractViolation, "work " + work.work_id + " has negative ratings");
  }
  if (work.reviews_count && *work.reviews_count < 0) {
    throw Error(ErrorCode::ContractViolation, "work " + work.work_id + " has negative reviews");
  }
  if (work.avg_rating && (*work.avg_rating < 0.0 || *work.avg_rating > 5.0)) {
    throw Error(ErrorCode::ContractViolation, "work " + work.work_id + " rating outside [0,5]");
  }
}

void validate(const EditionRecord& edition) {
  if (edition.edition_id.empty() || edition.work_id.empty()) {
    throw Error(ErrorCode::ContractViolation, "edition without edition_id or work_id");
  }
  for (const auto& id : edition.identifiers) {
    if (id.kind == IdKind::Isbn13 && !is_valid_isbn13(id.value)) {
      throw Error(ErrorCode::ContractViolation,
                  "edition " + edition.edition_id + " holds invalid ISBN " + id.value);
    }
  }
}

IdentifierSet work_identifier_set(const WorkRecord& work,
                                  std::span<const EditionRecord> editions) {
  IdentifierSet out;
  for (const auto& edition : editions) {
    if (edition.work_id != work.work_id) {
      throw Error(ErrorCode::ContractViolation, "edition " + edition.edition_id +
                                                    " belongs to " + edition.work_id + ", not " +
                                                    work.work_id);
    }
    out.insert(edition.identifiers.begin(), edition.identifiers.end());
  }
  return out;
}

DatablePartition filter_datable_works(std::span<const WorkRecord> works) {
  DatablePartition out;
  for (const auto& w : works) {
    (w.first_publication_year ? out.retained : out.discarded).push_back(w);
  }
  spdlog::info("datable works: {} retained, {} discarded", out.retained.size(),
               out.discarded.size());
  return out;
}

}  // namespace majinlink
