#pragma once

// MinHash signatures, LSH banding and near-duplicate clustering.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "majinlink/ingest.hpp"
#include "majinlink/records.hpp"

namespace majinlink {

inline constexpr std::uint32_t kDefaultNumPerm = 128;
/// 2^61 - 1
inline constexpr std::uint64_t kMersennePrime61 = (1ULL << 61) - 1;

struct MinHashSignature {
  std::string item_id;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> slots;
};

/// Universal hash family (a*h + b) mod p, a odd, drawn from a seeded PRNG.
class MinHasher {
 public:
  explicit MinHasher(std::uint32_t num_perm = kDefaultNumPerm, std::uint64_t seed = 1);

  /// Throws InvalidArgument if the shingle set is empty.
  MinHashSignature sign(const ShingleSet& shingles) const;
  MinHashSignature sign(std::string item_id, std::span<const std::uint64_t> hashes) const;

  std::uint32_t num_perm() const noexcept { return static_cast<std::uint32_t>(a_.size()); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
};

/// Fraction of equal slots. Throws InvalidArgument on seed or length mismatch.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

struct LshParams {
  std::uint32_t bands = 0;
  std::uint32_t rows = 0;
  double threshold = 0.8;
  std::uint32_t num_perm = kDefaultNumPerm;
};

/// P(candidate) = 1 - (1 - s^r)^b
double candidate_probability(double similarity, std::uint32_t bands, std::uint32_t rows);

/// Weighted false-positive + false-negative area of the banding curve,
/// integrated by the midpoint rule with step 0.001.
double banding_error(double threshold, std::uint32_t bands, std::uint32_t rows,
                     double fp_weight = 0.5, double fn_weight = 0.5);

/// Exhaustive search over b*r <= num_perm minimizing banding_error.
/// Ties go to the smaller b.
LshParams optimal_params(double threshold = 0.8, std::uint32_t num_perm = kDefaultNumPerm,
                         double fp_weight = 0.5, double fn_weight = 0.5);

class LshIndex {
 public:
  LshIndex(LshParams params, std::uint64_t seed);

  /// Throws InvalidArgument on num_perm/seed mismatch or duplicate item id.
  void insert(const MinHashSignature& signature);

  /// Items sharing at least one full band with `signature`, excluding the
  /// signature's own item id.
  std::unordered_set<std::string> query(const MinHashSignature& signature) const;

  const LshParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return signatures_.size(); }

 private:
  void check(const MinHashSignature& signature) const;
  std::uint64_t band_key(const MinHashSignature& signature, std::uint32_t band) const;
  bool band_equal(const MinHashSignature& a, const MinHashSignature& b, std::uint32_t band) const;

  LshParams params_;
  std::uint64_t seed_;
  std::vector<MinHashSignature> signatures_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::size_t>>> tables_;
};

struct Cluster {
  std::string cluster_id;
  std::vector<std::string> item_ids;  // sorted
  std::string language = "und";
  IdentifierSet identifiers;
  std::vector<std::string> titles;

  bool singleton() const noexcept { return item_ids.size() == 1; }
};

struct ClusterOptions {
  double threshold = 0.8;
  /// Verify candidate pairs on exact shingle Jaccard instead of the
  /// signature estimate. Requires shingle sets.
  bool exact_verification = false;
};

/// Connected components over LSH candidate pairs whose similarity is at
/// least the threshold. `items` and `signatures` are matched by item id.
/// Every item ends up in exactly one cluster; clusters are ordered by their
/// smallest item id and numbered c000000, c000001, ...
std::vector<Cluster> cluster_items(std::span<const ShadowItem> items,
                                   std::span<const MinHashSignature> signatures,
                                   const LshParams& params, const ClusterOptions& options = {},
                                   std::span<const ShingleSet> shingles = {});

/// Plurality of declared languages; ties or no declared language give "und".
std::string majority_language(std::span<const std::string> declared);

// signatures.bin: "MJLS", u32 version, u32 num_perm, u64 seed, then per item
// u32 id length, id bytes, num_perm u64 slots. All little-endian.
void write_signatures(const std::filesystem::path& path,
                      std::span<const MinHashSignature> signatures, std::uint32_t num_perm,
                      std::uint64_t seed);
std::vector<MinHashSignature> read_signatures(const std::filesystem::path& path);

}  // namespace majinlink
