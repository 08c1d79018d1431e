#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include <spdlog/spdlog.h>

#include "majinlink/dedup.hpp"
#include "majinlink/random.hpp"

namespace majinlink {

LshIndex::LshIndex(LshParams params, std::uint64_t seed) : params_(params), seed_(seed) {
  if (params.bands == 0 || params.rows == 0 ||
      static_cast<std::uint64_t>(params.bands) * params.rows > params.num_perm) {
    throw Error(ErrorCode::InvalidArgument, "LSH parameters need bands*rows <= num_perm");
  }
  tables_.resize(params.bands);
}

void LshIndex::check(const MinHashSignature& signature) const {
  if (signature.slots.size() != params_.num_perm || signature.seed != seed_) {
    throw Error(ErrorCode::InvalidArgument,
                "signature '" + signature.item_id + "' does not match the index num_perm/seed");
  }
}

std::uint64_t LshIndex::band_key(const MinHashSignature& signature, std::uint32_t band) const {
  std::uint64_t h = splitmix64(band);
  const std::size_t start = static_cast<std::size_t>(band) * params_.rows;
  for (std::size_t i = start; i < start + params_.rows; ++i) h = splitmix64(h ^ signature.slots[i]);
  return h;
}

bool LshIndex::band_equal(const MinHashSignature& a, const MinHashSignature& b,
                          std::uint32_t band) const {
  const std::size_t start = static_cast<std::size_t>(band) * params_.rows;
  return std::equal(a.slots.begin() + static_cast<std::ptrdiff_t>(start),
                    a.slots.begin() + static_cast<std::ptrdiff_t>(start + params_.rows),
                    b.slots.begin() + static_cast<std::ptrdiff_t>(start));
}

void LshIndex::insert(const MinHashSignature& signature) {
  check(signature);
  if (by_id_.contains(signature.item_id)) {
    throw Error(ErrorCode::InvalidArgument, "duplicate item id in LSH index: " + signature.item_id);
  }
  const std::size_t idx = signatures_.size();
  signatures_.push_back(signature);
  by_id_.emplace(signature.item_id, idx);
  for (std::uint32_t band = 0; band < params_.bands; ++band) {
    tables_[band][band_key(signature, band)].push_back(idx);
  }
}

std::unordered_set<std::string> LshIndex::query(const MinHashSignature& signature) const {
  check(signature);
  std::unordered_set<std::string> out;
  for (std::uint32_t band = 0; band < params_.bands; ++band) {
    const auto it = tables_[band].find(band_key(signature, band));
    if (it == tables_[band].end()) continue;
    for (const std::size_t idx : it->second) {
      const auto& other = signatures_[idx];
      if (other.item_id == signature.item_id) continue;
      if (band_equal(signature, other, band)) out.insert(other.item_id);
    }
  }
  return out;
}

std::string majority_language(std::span<const std::string> declared) {
  std::map<std::string, std::size_t> counts;
  for (const auto& lang : declared) {
    if (!lang.empty() && lang != "und") ++counts[lang];
  }
  std::string best = "und";
  std::size_t best_count = 0;
  bool tied = false;
  for (const auto& [lang, n] : counts) {
    if (n > best_count) {
      best = lang;
      best_count = n;
      tied = false;
    } else if (n == best_count) {
      tied = true;
    }
  }
  return tied ? "und" : best;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

}  // namespace

std::vector<Cluster> cluster_items(std::span<const ShadowItem> items,
                                   std::span<const MinHashSignature> signatures,
                                   const LshParams& params, const ClusterOptions& options,
                                   std::span<const ShingleSet> shingles) {
  std::unordered_map<std::string, std::size_t> item_index;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!item_index.emplace(items[i].item_id, i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate item id " + items[i].item_id);
    }
  }
  std::vector<const MinHashSignature*> sig_of(items.size(), nullptr);
  for (const auto& sig : signatures) {
    if (auto it = item_index.find(sig.item_id); it != item_index.end()) sig_of[it->second] = &sig;
  }
  std::vector<const ShingleSet*> shingles_of(items.size(), nullptr);
  if (options.exact_verification) {
    for (const auto& s : shingles) {
      if (auto it = item_index.find(s.item_id); it != item_index.end()) shingles_of[it->second] = &s;
    }
  }

  std::uint64_t seed = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!sig_of[i]) throw Error(ErrorCode::InvalidArgument, "no signature for item " + items[i].item_id);
    if (options.exact_verification && !shingles_of[i]) {
      throw Error(ErrorCode::InvalidArgument, "no shingles for item " + items[i].item_id);
    }
    seed = sig_of[i]->seed;
  }

  LshIndex index(params, seed);
  for (std::size_t i = 0; i < items.size(); ++i) index.insert(*sig_of[i]);

  DisjointSets sets(items.size());
  std::size_t edges = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& other_id : index.query(*sig_of[i])) {
      const std::size_t j = item_index.at(other_id);
      if (j <= i) continue;
      const double sim = options.exact_verification
                             ? jaccard(shingles_of[i]->hashes, shingles_of[j]->hashes)
                             : estimate_jaccard(*sig_of[i], *sig_of[j]);
      if (sim >= options.threshold) {
        sets.unite(i, j);
        ++edges;
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < items.size(); ++i) components[sets.find(i)].push_back(i);

  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(components.size());
  for (auto& [root, members] : components) {
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return items[a].item_id < items[b].item_id; });
    groups.push_back(std::move(members));
  }
  std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
    return items[a.front()].item_id < items[b.front()].item_id;
  });

  std::vector<Cluster> clusters;
  clusters.reserve(groups.size());
  char id_buffer[32];
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Cluster c;
    std::snprintf(id_buffer, sizeof id_buffer, "c%06zu", g);
    c.cluster_id = id_buffer;
    std::vector<std::string> languages;
    for (const std::size_t i : groups[g]) {
      const auto& item = items[i];
      c.item_ids.push_back(item.item_id);
      if (item.declared_language) languages.push_back(normalize_language(*item.declared_language));
      const auto ids = item.all_identifiers();
      c.identifiers.insert(ids.begin(), ids.end());
      if (item.declared_title) c.titles.push_back(*item.declared_title);
    }
    c.language = majority_language(languages);
    clusters.push_back(std::move(c));
  }
  spdlog::info("clustered {} items into {} clusters over {} verified edges", items.size(),
               clusters.size(), edges);
  return clusters;
}

}  // namespace majinlink
