#pragma once

// Frontier expansion over a work/author recommendation graph.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace majinlink {

struct WorkStub {
  std::string work_id;
  std::vector<std::string> author_ids;
  std::int64_t ratings_count = 0;
  std::int64_t edition_count = 0;
};

/// Source of catalogue records. Implementations may throw to signal a
/// failed lookup; the planner records the id and moves on.
class CatalogueProvider {
 public:
  virtual ~CatalogueProvider() = default;
  virtual std::vector<WorkStub> seeds() = 0;
  virtual std::vector<WorkStub> recommendations(const std::string& work_id) = 0;
  virtual std::vector<WorkStub> author_works(const std::string& author_id) = 0;
};

/// An author's other works are followed only with >= 1 rating and >= 2 editions.
bool author_work_qualifies(const WorkStub& stub);

struct DepthCounts {
  std::size_t works = 0;            // new works at this depth
  std::size_t editions = 0;         // editions of those works
  std::size_t authors = 0;          // new authors at this depth
  std::size_t recommendations = 0;  // new works reached through recommendations
  std::size_t author_works = 0;     // new works reached only through authors
};

struct FrontierState {
  std::size_t depth = 0;  // last depth processed
  std::set<std::string> known_work_ids;
  std::set<std::string> known_author_ids;
  std::vector<DepthCounts> new_by_depth;
  std::vector<std::string> failed_ids;
  bool exhausted = false;  // stopped because a depth added nothing

  std::vector<std::size_t> works_series() const;
};

inline constexpr std::size_t kDefaultMaxDepth = 5;

/// Depth 0 loads the seeds. Each later depth pulls recommendations of the
/// previous depth's new works and qualifying works of its new authors.
/// Stops after a depth adds no recommendation and no author work, or after
/// max_depth.
FrontierState expand(CatalogueProvider& provider, std::size_t max_depth = kDefaultMaxDepth);

/// Reads a fixture_graph directory:
///   seeds.txt         one work id per line
///   recs.tsv          source_work_id <TAB> recommended_work_id
///   author_works.tsv  author_id <TAB> work_id [<TAB> ratings_count <TAB> edition_count]
///   works.tsv         optional: work_id <TAB> ratings_count <TAB> edition_count [<TAB> a1,a2]
///   failures.txt      optional: ids whose lookups throw, for failure drills
/// Works without metadata have 0 ratings and 1 edition. Blank lines and
/// lines starting with '#' are ignored.
class FixtureProvider : public CatalogueProvider {
 public:
  explicit FixtureProvider(const std::filesystem::path& directory);

  std::vector<WorkStub> seeds() override;
  std::vector<WorkStub> recommendations(const std::string& work_id) override;
  std::vector<WorkStub> author_works(const std::string& author_id) override;

  std::size_t fetch_count(const std::string& id) const;

 private:
  WorkStub stub(const std::string& work_id) const;

  std::vector<std::string> seeds_;
  std::map<std::string, std::vector<std::string>> recs_;
  std::map<std::string, std::vector<std::string>> author_works_;
  std::map<std::string, WorkStub> works_;
  std::set<std::string> failures_;
  std::map<std::string, std::size_t> fetches_;
};

}  // namespace majinlink
