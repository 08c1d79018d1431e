#pragma once

// Identifier-overlap candidates and fuzzy title scoring.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "majinlink/dedup.hpp"
#include "majinlink/records.hpp"

namespace majinlink {

struct CandidateKey {
  std::string cluster_id;
  std::string work_id;

  friend auto operator<=>(const CandidateKey&, const CandidateKey&) = default;
  friend bool operator==(const CandidateKey&, const CandidateKey&) = default;
};

struct Candidate {
  std::string cluster_id;
  std::string work_id;
  std::string language;
  double title_score = 0;
  IdentifierSet shared_identifiers;

  CandidateKey key() const { return {cluster_id, work_id}; }
};

namespace fuzzy {

/// Indel distance (insertions + deletions only) between code point strings.
std::size_t indel_distance(std::u32string_view a, std::u32string_view b);

/// 100 * (1 - indel / (|a| + |b|)); ratio of two empty strings is 100.
double ratio(std::u32string_view a, std::u32string_view b);

/// Best ratio between the shorter string and a window of the longer one.
/// Windows are every |shorter|-length substring, the shorter prefixes and
/// suffixes at both edges, and the whole longer string. Equal lengths reduce
/// to ratio(a, b).
double partial_ratio(std::u32string_view a, std::u32string_view b);

std::u32string to_code_points(std::string_view utf8);

}  // namespace fuzzy

/// UTF-8 convenience overloads. Inputs are expected to be normalized already.
double ratio(std::string_view a, std::string_view b);
double partial_ratio(std::string_view a, std::string_view b);

/// Mean partial_ratio over cluster titles x edition titles, after
/// normalize_text. Titles that normalize to "" are ignored. nullopt when
/// either side has no usable title.
std::optional<double> title_score(std::span<const std::string> cluster_titles,
                                  std::span<const std::string> edition_titles);

/// One candidate per (cluster, work) with a non-empty identifier
/// intersection. Scores are left at 0; see link_candidates.
std::vector<Candidate> generate_candidates(std::span<const Cluster> clusters,
                                           std::span<const WorkRecord> works,
                                           std::span<const EditionRecord> editions);

struct LinkReport {
  std::vector<Candidate> scored;
  std::vector<CandidateKey> no_language_edition;  // work has no edition in the cluster language
  std::vector<CandidateKey> no_title_basis;       // empty title list on either side
};

/// Generates and scores candidates. Edition titles are restricted to the
/// cluster's language.
LinkReport link_candidates(std::span<const Cluster> clusters, std::span<const WorkRecord> works,
                           std::span<const EditionRecord> editions);

struct ThresholdSplit {
  std::vector<Candidate> accepted;
  std::vector<Candidate> rejected;
};

inline constexpr double kDefaultScoreThreshold = 80.0;

/// accepted iff title_score >= threshold.
ThresholdSplit apply_threshold(std::span<const Candidate> candidates,
                               double threshold = kDefaultScoreThreshold);

}  // namespace majinlink
