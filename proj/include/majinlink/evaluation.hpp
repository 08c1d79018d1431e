#pragma once

// Stratified sampling, label bookkeeping and precision/recall curves.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "majinlink/linkage.hpp"
#include "majinlink/random.hpp"
#include "majinlink/stats.hpp"

namespace majinlink {

struct StratumBin {
  double lower = 0;
  double upper = 0;
  std::size_t count = 0;
};

/// Bins are (lower, upper], except the first which also includes its lower
/// bound.
struct StratifiedPlan {
  std::vector<StratumBin> bins;

  /// 5/15/10/15/25/30/50/50 over [0,20], (20,40], (40,50], ... (90,100].
  static StratifiedPlan default_plan();

  /// Index of the bin holding `score`, or nullopt.
  std::optional<std::size_t> bin_of(double score) const;
  std::size_t total() const;
  /// Throws InvalidArgument on overlap, out-of-range bounds or zero counts.
  void validate() const;
};

struct SampledKey {
  CandidateKey key;
  std::size_t bin = 0;
};

struct Shortfall {
  std::size_t bin = 0;
  std::size_t requested = 0;
  std::size_t available = 0;
};

struct StratifiedSample {
  std::vector<SampledKey> keys;
  std::vector<Shortfall> shortfalls;
};

/// Per bin, a uniform sample without replacement of `count` keys.
/// Deterministic for a given seed. Throws on an empty candidate set.
StratifiedSample stratified_sample(std::span<const Candidate> candidates,
                                   const StratifiedPlan& plan, std::uint64_t seed);

enum class Label { Yes, No, Unknown };

std::string_view to_string(Label label);
/// "yes"/"no"/"unknown" (case-insensitive); nullopt otherwise.
std::optional<Label> parse_label(std::string_view text);

struct EvalLabel {
  CandidateKey key;
  Label label = Label::Unknown;
  std::string evaluator_id;
  std::string timestamp;  // ISO-8601 UTC
};

/// One label per candidate: latest label per evaluator, then majority over
/// Yes/No. Ties or Unknown-only resolve to Unknown.
std::map<CandidateKey, Label> resolve_labels(std::span<const EvalLabel> labels);

struct PrCurve {
  std::vector<double> thresholds;
  std::vector<std::optional<double>> precision;
  std::vector<std::optional<double>> precision_ci_low;
  std::vector<std::optional<double>> precision_ci_high;
  std::vector<std::optional<double>> recall;
  std::vector<std::optional<double>> recall_ci_low;
  std::vector<std::optional<double>> recall_ci_high;
  std::vector<double> retention;
};

/// Draws `n` indices in [0, n) for one bootstrap replicate.
using Resampler = std::function<std::vector<std::size_t>(std::size_t n, Rng& rng)>;

struct PrCurveOptions {
  std::vector<double> thresholds;  // empty = 0..100 step 1
  std::size_t bootstrap_samples = 1000;
  std::uint64_t seed = 0;
  double confidence = 0.95;
  Resampler resampler;  // empty = uniform with replacement
};

std::vector<double> default_threshold_grid();

/// Precision and recall at each threshold over the conclusive (Yes/No)
/// labels, percentile-bootstrap CIs, and retention over all candidates.
/// Throws InvalidArgument when there are no labels or a label refers to an
/// unknown candidate.
PrCurve pr_curve(const std::map<CandidateKey, Label>& labels,
                 std::span<const Candidate> candidates, const PrCurveOptions& options = {});

struct AmbiguousReport {
  double threshold = kDefaultScoreThreshold;
  std::vector<Candidate> items;       // Unknown-labeled, score >= threshold
  std::size_t unknown_total = 0;      // all Unknown labels
  double share = 0;                   // items / unknown_total, 0 when none
  // Filled when secondary relabels are supplied.
  std::size_t relabeled_yes = 0;
  std::size_t relabeled_no = 0;
  std::optional<double> secondary_precision;
};

/// Unknown-labeled candidates above the threshold, with optional precision
/// from a deeper secondary relabeling of those items.
AmbiguousReport ambiguous_subset_report(const std::map<CandidateKey, Label>& labels,
                                        std::span<const Candidate> candidates,
                                        double threshold = kDefaultScoreThreshold,
                                        const std::map<CandidateKey, Label>& relabels = {});

/// Median and IQR of title scores (type-7). Throws on empty input.
stats::Quartiles score_distribution_stats(std::span<const Candidate> candidates);

}  // namespace majinlink
