#include <algorithm>
#include <map>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "majinlink/linkage.hpp"

namespace majinlink {

namespace {

std::map<std::string, std::vector<const EditionRecord*>> editions_by_work(
    std::span<const EditionRecord> editions) {
  std::map<std::string, std::vector<const EditionRecord*>> out;
  for (const auto& e : editions) out[e.work_id].push_back(&e);
  return out;
}

}  // namespace

std::vector<Candidate> generate_candidates(std::span<const Cluster> clusters,
                                           std::span<const WorkRecord> works,
                                           std::span<const EditionRecord> editions) {
  const auto by_work = editions_by_work(editions);

  // identifier -> works whose editions carry it
  std::map<Identifier, std::vector<std::size_t>> works_by_identifier;
  std::vector<IdentifierSet> work_ids(works.size());
  for (std::size_t w = 0; w < works.size(); ++w) {
    std::vector<EditionRecord> own;
    if (auto it = by_work.find(works[w].work_id); it != by_work.end()) {
      for (const auto* e : it->second) own.push_back(*e);
    }
    work_ids[w] = work_identifier_set(works[w], own);
    for (const auto& id : work_ids[w]) works_by_identifier[id].push_back(w);
  }

  std::vector<Candidate> out;
  for (const auto& cluster : clusters) {
    std::map<std::size_t, IdentifierSet> shared;
    for (const auto& id : cluster.identifiers) {
      const auto it = works_by_identifier.find(id);
      if (it == works_by_identifier.end()) continue;
      for (const std::size_t w : it->second) shared[w].insert(id);
    }
    for (auto& [w, ids] : shared) {
      out.push_back({cluster.cluster_id, works[w].work_id, cluster.language, 0.0, std::move(ids)});
    }
  }
  return out;
}

LinkReport link_candidates(std::span<const Cluster> clusters, std::span<const WorkRecord> works,
                           std::span<const EditionRecord> editions) {
  const auto by_work = editions_by_work(editions);
  std::unordered_map<std::string, const Cluster*> cluster_by_id;
  for (const auto& c : clusters) cluster_by_id.emplace(c.cluster_id, &c);

  LinkReport report;
  for (auto& candidate : generate_candidates(clusters, works, editions)) {
    const Cluster& cluster = *cluster_by_id.at(candidate.cluster_id);
    std::vector<std::string> edition_titles;
    if (auto it = by_work.find(candidate.work_id); it != by_work.end()) {
      for (const auto* e : it->second) {
        if (e->language == cluster.language) edition_titles.push_back(e->title);
      }
    }
    if (edition_titles.empty()) {
      report.no_language_edition.push_back(candidate.key());
      continue;
    }
    const auto score = title_score(cluster.titles, edition_titles);
    if (!score) {
      report.no_title_basis.push_back(candidate.key());
      continue;
    }
    candidate.title_score = *score;
    report.scored.push_back(std::move(candidate));
  }
  spdlog::info("scored {} candidates ({} without same-language edition, {} without titles)",
               report.scored.size(), report.no_language_edition.size(),
               report.no_title_basis.size());
  return report;
}

ThresholdSplit apply_threshold(std::span<const Candidate> candidates, double threshold) {
  ThresholdSplit out;
  for (const auto& c : candidates) {
    (c.title_score >= threshold ? out.accepted : out.rejected).push_back(c);
  }
  return out;
}

}  // namespace majinlink
