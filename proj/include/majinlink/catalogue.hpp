#pragma once

// Final catalogue emission and corpus statistics.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "majinlink/dedup.hpp"
#include "majinlink/linkage.hpp"
#include "majinlink/records.hpp"
#include "majinlink/stats.hpp"

namespace majinlink {

struct CatalogueEntry {
  std::string work_id;
  int first_publication_year = 0;
  std::vector<std::string> author_names;
  std::vector<std::string> author_ids;
  std::string title;
  std::optional<double> avg_rating;
  std::optional<std::int64_t> ratings_count;
  std::optional<std::int64_t> reviews_count;
  std::optional<std::vector<std::string>> genres;
  std::vector<std::string> shadow_item_ids;  // sorted, unique
  std::string language;
  bool experimental = false;
};

struct CatalogueCoverage {
  std::size_t entries = 0;
  double with_genres = 0;   // fraction of entries
  double with_reviews = 0;  // fraction of entries
  std::size_t undated_skipped = 0;
};

struct Catalogue {
  std::vector<CatalogueEntry> entries;  // ordered by work_id
  CatalogueCoverage coverage;
};

/// The language whose catalogue carries the validated precision guarantee.
inline constexpr const char* kPrimaryLanguage = "en";

/// One entry per work for `language`, merging the items of every accepted
/// cluster linked to it. Candidates in other languages are ignored. Throws
/// ContractViolation when a candidate names an unknown work or cluster.
/// Works without a first publication year produce no entry.
Catalogue emit_catalogue(std::span<const Candidate> accepted, std::span<const WorkRecord> works,
                         std::span<const Cluster> clusters, const std::string& language);

/// Sum of squared shares. Normalized: (H - 1/N) / (1 - 1/N), 1 when N = 1.
/// Throws InvalidArgument on a negative share or empty input.
double herfindahl(std::span<const double> shares, bool normalized);

/// Shares rescaled to sum to 1. Throws on negative values or a zero total.
std::vector<double> renormalize(std::span<const double> shares);

struct LanguageShare {
  std::string language;
  double share = 0;  // percent
};

/// Percent of items per language, descending by share then by code.
std::vector<LanguageShare> language_shares(std::span<const std::string> languages);

struct DecadeBin {
  int decade = 0;
  std::size_t count = 0;
};

struct DecadeHistogram {
  std::vector<DecadeBin> bins;  // ascending decade
  std::size_t undated = 0;
};

/// decade = floor(year / 10) * 10. Missing years go to `undated`.
DecadeHistogram decade_histogram(std::span<const std::optional<int>> years);

/// True when the ratio between consecutive decade counts strictly increases,
/// i.e. growth is faster than exponential on a semi-log plot. Needs at least
/// three consecutive non-zero decades.
bool accelerating_growth(const DecadeHistogram& histogram);

/// Same estimator as score_distribution_stats.
stats::Quartiles median_iqr(std::span<const double> values);

}  // namespace majinlink
