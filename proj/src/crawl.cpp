#include <algorithm>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "majinlink/crawl.hpp"
#include "majinlink/error.hpp"

namespace majinlink {

bool author_work_qualifies(const WorkStub& stub) {
  return stub.ratings_count >= 1 && stub.edition_count >= 2;
}

std::vector<std::size_t> FrontierState::works_series() const {
  std::vector<std::size_t> out;
  out.reserve(new_by_depth.size());
  for (const auto& d : new_by_depth) out.push_back(d.works);
  return out;
}

FrontierState expand(CatalogueProvider& provider, std::size_t max_depth) {
  FrontierState state;
  std::map<std::string, WorkStub> stubs;

  std::vector<WorkStub> seeds;
  try {
    seeds = provider.seeds();
  } catch (const std::exception& e) {
    spdlog::warn("seed lookup failed: {}", e.what());
    state.failed_ids.push_back("<seeds>");
  }

  // Registers works new to the frontier and returns the authors they introduce.
  auto admit = [&](const std::set<std::string>& work_ids, DepthCounts& counts) {
    std::set<std::string> authors;
    for (const auto& id : work_ids) {
      state.known_work_ids.insert(id);
      const auto& stub = stubs.at(id);
      counts.editions += static_cast<std::size_t>(std::max<std::int64_t>(0, stub.edition_count));
      for (const auto& a : stub.author_ids) {
        if (!state.known_author_ids.contains(a)) authors.insert(a);
      }
    }
    counts.works = work_ids.size();
    state.known_author_ids.insert(authors.begin(), authors.end());
    counts.authors = authors.size();
    return authors;
  };

  std::set<std::string> frontier_works;
  for (auto& s : seeds) {
    if (state.known_work_ids.contains(s.work_id)) continue;
    stubs.emplace(s.work_id, s);
    frontier_works.insert(s.work_id);
  }
  DepthCounts depth0;
  std::set<std::string> frontier_authors = admit(frontier_works, depth0);
  state.new_by_depth.push_back(depth0);

  if (frontier_works.empty()) {
    state.exhausted = true;
    return state;
  }

  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    std::set<std::string> via_recs;
    std::set<std::string> via_authors;
    for (const auto& work_id : frontier_works) {
      try {
        for (auto& stub : provider.recommendations(work_id)) {
          if (state.known_work_ids.contains(stub.work_id)) continue;
          via_recs.insert(stub.work_id);
          stubs.try_emplace(stub.work_id, std::move(stub));
        }
      } catch (const std::exception& e) {
        spdlog::warn("recommendations for {} failed: {}", work_id, e.what());
        state.failed_ids.push_back(work_id);
      }
    }
    for (const auto& author_id : frontier_authors) {
      try {
        for (auto& stub : provider.author_works(author_id)) {
          if (!author_work_qualifies(stub) || state.known_work_ids.contains(stub.work_id)) continue;
          via_authors.insert(stub.work_id);
          stubs.try_emplace(stub.work_id, std::move(stub));
        }
      } catch (const std::exception& e) {
        spdlog::warn("works of author {} failed: {}", author_id, e.what());
        state.failed_ids.push_back(author_id);
      }
    }

    DepthCounts counts;
    counts.recommendations = via_recs.size();
    std::set<std::string> new_works = via_recs;
    for (const auto& id : via_authors) {
      if (new_works.insert(id).second) ++counts.author_works;
    }
    frontier_authors = admit(new_works, counts);
    frontier_works = std::move(new_works);
    state.new_by_depth.push_back(counts);
    state.depth = depth;

    if (counts.recommendations == 0 && counts.author_works == 0) {
      state.exhausted = true;
      break;
    }
  }
  return state;
}

namespace {

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path, bool required) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(path);
  if (!in) {
    if (required) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return rows;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::int64_t to_count(const std::string& s, const std::filesystem::path& file) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad count '" + s + "' in " + file.string());
  }
}

}  // namespace

FixtureProvider::FixtureProvider(const std::filesystem::path& directory) {
  for (const auto& row : read_rows(directory / "seeds.txt", true)) seeds_.push_back(row.at(0));

  const auto works_file = directory / "works.tsv";
  for (const auto& row : read_rows(works_file, false)) {
    if (row.size() < 3) throw Error(ErrorCode::Parse, "works.tsv rows need 3 or 4 fields");
    WorkStub& s = works_[row[0]];
    s.work_id = row[0];
    s.ratings_count = to_count(row[1], works_file);
    s.edition_count = to_count(row[2], works_file);
    if (row.size() > 3) {
      std::stringstream ss(row[3]);
      std::string a;
      while (std::getline(ss, a, ',')) {
        if (!a.empty()) s.author_ids.push_back(a);
      }
    }
  }

  const auto recs_file = directory / "recs.tsv";
  for (const auto& row : read_rows(recs_file, false)) {
    if (row.size() < 2) throw Error(ErrorCode::Parse, "recs.tsv rows need 2 fields");
    recs_[row[0]].push_back(row[1]);
  }

  const auto authors_file = directory / "author_works.tsv";
  for (const auto& row : read_rows(authors_file, false)) {
    if (row.size() != 2 && row.size() != 4) {
      throw Error(ErrorCode::Parse, "author_works.tsv rows need 2 or 4 fields");
    }
    author_works_[row[0]].push_back(row[1]);
    WorkStub& s = works_[row[1]];
    s.work_id = row[1];
    if (std::find(s.author_ids.begin(), s.author_ids.end(), row[0]) == s.author_ids.end()) {
      s.author_ids.push_back(row[0]);
    }
    if (row.size() == 4) {
      s.ratings_count = to_count(row[2], authors_file);
      s.edition_count = to_count(row[3], authors_file);
    }
  }

  for (const auto& row : read_rows(directory / "failures.txt", false)) failures_.insert(row.at(0));
}

WorkStub FixtureProvider::stub(const std::string& work_id) const {
  if (auto it = works_.find(work_id); it != works_.end()) return it->second;
  return WorkStub{work_id, {}, 0, 1};
}

std::vector<WorkStub> FixtureProvider::seeds() {
  std::vector<WorkStub> out;
  for (const auto& id : seeds_) out.push_back(stub(id));
  return out;
}

std::vector<WorkStub> FixtureProvider::recommendations(const std::string& work_id) {
  ++fetches_[work_id];
  if (failures_.contains(work_id)) throw Error(ErrorCode::NotFound, "fixture failure for " + work_id);
  std::vector<WorkStub> out;
  if (auto it = recs_.find(work_id); it != recs_.end()) {
    for (const auto& id : it->second) out.push_back(stub(id));
  }
  return out;
}

std::vector<WorkStub> FixtureProvider::author_works(const std::string& author_id) {
  ++fetches_[author_id];
  if (failures_.contains(author_id)) throw Error(ErrorCode::NotFound, "fixture failure for " + author_id);
  std::vector<WorkStub> out;
  if (auto it = author_works_.find(author_id); it != author_works_.end()) {
    for (const auto& id : it->second) out.push_back(stub(id));
  }
  return out;
}

std::size_t FixtureProvider::fetch_count(const std::string& id) const {
  const auto it = fetches_.find(id);
  return it == fetches_.end() ? 0 : it->second;
}

}  // namespace majinlink
