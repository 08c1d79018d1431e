#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "majinlink/catalogue.hpp"

namespace majinlink {

Catalogue emit_catalogue(std::span<const Candidate> accepted, std::span<const WorkRecord> works,
                         std::span<const Cluster> clusters, const std::string& language) {
  std::unordered_map<std::string, const WorkRecord*> work_by_id;
  for (const auto& w : works) work_by_id.emplace(w.work_id, &w);
  std::unordered_map<std::string, const Cluster*> cluster_by_id;
  for (const auto& c : clusters) cluster_by_id.emplace(c.cluster_id, &c);

  std::map<std::string, std::set<std::string>> items_by_work;
  for (const auto& cand : accepted) {
    if (!work_by_id.contains(cand.work_id)) {
      throw Error(ErrorCode::ContractViolation, "accepted candidate references unknown work " + cand.work_id);
    }
    const auto cluster = cluster_by_id.find(cand.cluster_id);
    if (cluster == cluster_by_id.end()) {
      throw Error(ErrorCode::ContractViolation,
                  "accepted candidate references unknown cluster " + cand.cluster_id);
    }
    if (cand.language != language) continue;
    auto& items = items_by_work[cand.work_id];
    items.insert(cluster->second->item_ids.begin(), cluster->second->item_ids.end());
  }

  Catalogue out;
  std::size_t with_genres = 0, with_reviews = 0;
  for (const auto& [work_id, items] : items_by_work) {
    const WorkRecord& work = *work_by_id.at(work_id);
    if (!work.first_publication_year) {
      ++out.coverage.undated_skipped;
      continue;
    }
    CatalogueEntry e;
    e.work_id = work.work_id;
    e.first_publication_year = *work.first_publication_year;
    e.author_names = work.author_names;
    e.author_ids = work.author_ids;
    e.title = work.title;
    e.avg_rating = work.avg_rating;
    e.ratings_count = work.ratings_count;
    e.reviews_count = work.reviews_count;
    e.genres = work.genres;
    e.shadow_item_ids.assign(items.begin(), items.end());
    e.language = language;
    e.experimental = language != kPrimaryLanguage;
    with_genres += e.genres && !e.genres->empty();
    with_reviews += e.reviews_count.has_value();
    out.entries.push_back(std::move(e));
  }
  out.coverage.entries = out.entries.size();
  if (!out.entries.empty()) {
    const auto n = static_cast<double>(out.entries.size());
    out.coverage.with_genres = static_cast<double>(with_genres) / n;
    out.coverage.with_reviews = static_cast<double>(with_reviews) / n;
  }
  if (out.coverage.undated_skipped) {
    spdlog::warn("{} linked works lack a first publication year and were left out",
                 out.coverage.undated_skipped);
  }
  return out;
}

double herfindahl(std::span<const double> shares, bool normalized) {
  if (shares.empty()) throw Error(ErrorCode::InvalidArgument, "herfindahl of no categories");
  double h = 0.0;
  for (const double p : shares) {
    if (p < 0.0 || std::isnan(p)) throw Error(ErrorCode::InvalidArgument, "negative share");
    h += p * p;
  }
  if (!normalized) return h;
  const auto n = static_cast<double>(shares.size());
  if (shares.size() == 1) return 1.0;
  return (h - 1.0 / n) / (1.0 - 1.0 / n);
}

std::vector<double> renormalize(std::span<const double> shares) {
  double total = 0.0;
  for (const double p : shares) {
    if (p < 0.0 || std::isnan(p)) throw Error(ErrorCode::InvalidArgument, "negative share");
    total += p;
  }
  if (total <= 0.0) throw Error(ErrorCode::InvalidArgument, "shares sum to zero");
  std::vector<double> out;
  out.reserve(shares.size());
  for (const double p : shares) out.push_back(p / total);
  return out;
}

std::vector<LanguageShare> language_shares(std::span<const std::string> languages) {
  std::map<std::string, std::size_t> counts;
  for (const auto& l : languages) ++counts[l];
  std::vector<LanguageShare> out;
  for (const auto& [lang, n] : counts) {
    out.push_back({lang, 100.0 * static_cast<double>(n) / static_cast<double>(languages.size())});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.share > b.share; });
  return out;
}

DecadeHistogram decade_histogram(std::span<const std::optional<int>> years) {
  std::map<int, std::size_t> counts;
  DecadeHistogram out;
  for (const auto& y : years) {
    if (!y) {
      ++out.undated;
      continue;
    }
    const int decade = static_cast<int>(std::floor(static_cast<double>(*y) / 10.0)) * 10;
    ++counts[decade];
  }
  for (const auto& [decade, n] : counts) out.bins.push_back({decade, n});
  return out;
}

bool accelerating_growth(const DecadeHistogram& histogram) {
  const auto& bins = histogram.bins;
  if (bins.size() < 3) return false;
  double previous_ratio = 0.0;
  for (std::size_t i = 1; i < bins.size(); ++i) {
    if (bins[i].decade != bins[i - 1].decade + 10 || bins[i - 1].count == 0) return false;
    const double ratio = static_cast<double>(bins[i].count) / static_cast<double>(bins[i - 1].count);
    if (i > 1 && ratio <= previous_ratio) return false;
    previous_ratio = ratio;
  }
  return true;
}

stats::Quartiles median_iqr(std::span<const double> values) { return stats::median_iqr(values); }

}  // namespace majinlink
