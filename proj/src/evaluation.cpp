#include <algorithm>
#include <cctype>
#include <map>

#include "majinlink/evaluation.hpp"

namespace majinlink {

StratifiedPlan StratifiedPlan::default_plan() {
  return {{{0, 20, 5},
           {20, 40, 15},
           {40, 50, 10},
           {50, 60, 15},
           {60, 70, 25},
           {70, 80, 30},
           {80, 90, 50},
           {90, 100, 50}}};
}

std::optional<std::size_t> StratifiedPlan::bin_of(double score) const {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& b = bins[i];
    const bool above = i == 0 ? score >= b.lower : score > b.lower;
    if (above && score <= b.upper) return i;
  }
  return std::nullopt;
}

std::size_t StratifiedPlan::total() const {
  std::size_t n = 0;
  for (const auto& b : bins) n += b.count;
  return n;
}

void StratifiedPlan::validate() const {
  if (bins.empty()) throw Error(ErrorCode::InvalidArgument, "stratified plan has no bins");
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& b = bins[i];
    if (b.lower < 0 || b.upper > 100 || b.lower >= b.upper) {
      throw Error(ErrorCode::InvalidArgument, "stratum bounds must satisfy 0 <= lower < upper <= 100");
    }
    if (b.count == 0) throw Error(ErrorCode::InvalidArgument, "stratum count must be positive");
    if (i > 0 && b.lower < bins[i - 1].upper) {
      throw Error(ErrorCode::InvalidArgument, "strata overlap or are out of order");
    }
  }
}

StratifiedSample stratified_sample(std::span<const Candidate> candidates,
                                   const StratifiedPlan& plan, std::uint64_t seed) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "no candidates to sample");
  plan.validate();

  std::vector<std::vector<CandidateKey>> pools(plan.bins.size());
  for (const auto& c : candidates) {
    if (auto bin = plan.bin_of(c.title_score)) pools[*bin].push_back(c.key());
  }

  StratifiedSample out;
  Rng rng(seed);
  for (std::size_t bin = 0; bin < pools.size(); ++bin) {
    auto& pool = pools[bin];
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    const std::size_t want = plan.bins[bin].count;
    if (pool.size() < want) out.shortfalls.push_back({bin, want, pool.size()});
    const std::size_t take = std::min(want, pool.size());
    // Partial Fisher-Yates: the first `take` slots become the sample.
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    for (std::size_t i = 0; i < take; ++i) out.keys.push_back({pool[i], bin});
  }
  return out;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Yes: return "yes";
    case Label::No: return "no";
    case Label::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "yes") return Label::Yes;
  if (lowered == "no") return Label::No;
  if (lowered == "unknown") return Label::Unknown;
  return std::nullopt;
}

std::map<CandidateKey, Label> resolve_labels(std::span<const EvalLabel> labels) {
  std::map<std::pair<CandidateKey, std::string>, Label> latest;
  for (const auto& l : labels) latest[{l.key, l.evaluator_id}] = l.label;

  std::map<CandidateKey, std::pair<std::size_t, std::size_t>> votes;  // yes, no
  for (const auto& [slot, label] : latest) {
    auto& v = votes[slot.first];
    if (label == Label::Yes) ++v.first;
    if (label == Label::No) ++v.second;
  }
  std::map<CandidateKey, Label> out;
  for (const auto& [key, v] : votes) {
    out[key] = v.first > v.second ? Label::Yes : v.second > v.first ? Label::No : Label::Unknown;
  }
  return out;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int t = 0; t <= 100; ++t) grid.push_back(t);
  return grid;
}

namespace {

struct Judged {
  double score;
  bool yes;
};

struct PointEstimate {
  std::optional<double> precision;
  std::optional<double> recall;
};

PointEstimate estimate_at(const std::vector<Judged>& judged, std::span<const std::size_t> sample,
                          double threshold) {
  std::size_t tp = 0, predicted = 0, positives = 0;
  for (const std::size_t i : sample) {
    const auto& j = judged[i];
    const bool pred = j.score >= threshold;
    predicted += pred;
    positives += j.yes;
    tp += pred && j.yes;
  }
  PointEstimate e;
  if (predicted) e.precision = static_cast<double>(tp) / static_cast<double>(predicted);
  if (positives) e.recall = static_cast<double>(tp) / static_cast<double>(positives);
  return e;
}

std::pair<std::optional<double>, std::optional<double>> percentile_ci(std::vector<double> values,
                                                                      double confidence) {
  if (values.empty()) return {};
  const double alpha = (1.0 - confidence) / 2.0;
  return {stats::quantile(values, alpha), stats::quantile(values, 1.0 - alpha)};
}

}  // namespace

PrCurve pr_curve(const std::map<CandidateKey, Label>& labels,
                 std::span<const Candidate> candidates, const PrCurveOptions& options) {
  if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "pr_curve needs at least one label");
  std::map<CandidateKey, double> score_of;
  for (const auto& c : candidates) score_of.emplace(c.key(), c.title_score);

  std::vector<Judged> judged;
  for (const auto& [key, label] : labels) {
    const auto it = score_of.find(key);
    if (it == score_of.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  "label for unknown candidate " + key.cluster_id + "/" + key.work_id);
    }
    if (label != Label::Unknown) judged.push_back({it->second, label == Label::Yes});
  }

  PrCurve curve;
  curve.thresholds = options.thresholds.empty() ? default_threshold_grid() : options.thresholds;
  const std::size_t T = curve.thresholds.size();
  curve.precision.resize(T);
  curve.recall.resize(T);
  curve.precision_ci_low.resize(T);
  curve.precision_ci_high.resize(T);
  curve.recall_ci_low.resize(T);
  curve.recall_ci_high.resize(T);
  curve.retention.resize(T);

  std::vector<std::size_t> identity(judged.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  for (std::size_t t = 0; t < T; ++t) {
    const double threshold = curve.thresholds[t];
    const auto e = estimate_at(judged, identity, threshold);
    curve.precision[t] = e.precision;
    curve.recall[t] = e.recall;
    std::size_t kept = 0;
    for (const auto& c : candidates) kept += c.title_score >= threshold;
    curve.retention[t] = candidates.empty() ? 0.0
                                            : static_cast<double>(kept) / static_cast<double>(candidates.size());
  }

  if (options.bootstrap_samples == 0 || judged.empty()) return curve;

  std::vector<std::vector<double>> p_draws(T), r_draws(T);
  Rng rng(options.seed);
  std::vector<std::size_t> sample(judged.size());
  for (std::size_t b = 0; b < options.bootstrap_samples; ++b) {
    if (options.resampler) {
      sample = options.resampler(judged.size(), rng);
    } else {
      for (auto& s : sample) s = static_cast<std::size_t>(uniform_below(rng, judged.size()));
    }
    for (std::size_t t = 0; t < T; ++t) {
      const auto e = estimate_at(judged, sample, curve.thresholds[t]);
      if (e.precision) p_draws[t].push_back(*e.precision);
      if (e.recall) r_draws[t].push_back(*e.recall);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    std::tie(curve.precision_ci_low[t], curve.precision_ci_high[t]) =
        percentile_ci(std::move(p_draws[t]), options.confidence);
    std::tie(curve.recall_ci_low[t], curve.recall_ci_high[t]) =
        percentile_ci(std::move(r_draws[t]), options.confidence);
  }
  return curve;
}

AmbiguousReport ambiguous_subset_report(const std::map<CandidateKey, Label>& labels,
                                        std::span<const Candidate> candidates, double threshold,
                                        const std::map<CandidateKey, Label>& relabels) {
  AmbiguousReport report;
  report.threshold = threshold;
  std::map<CandidateKey, const Candidate*> by_key;
  for (const auto& c : candidates) by_key.emplace(c.key(), &c);

  for (const auto& [key, label] : labels) {
    if (label != Label::Unknown) continue;
    ++report.unknown_total;
    const auto it = by_key.find(key);
    if (it == by_key.end() || it->second->title_score < threshold) continue;
    report.items.push_back(*it->second);
    if (auto r = relabels.find(key); r != relabels.end()) {
      if (r->second == Label::Yes) ++report.relabeled_yes;
      if (r->second == Label::No) ++report.relabeled_no;
    }
  }
  if (report.unknown_total) {
    report.share = static_cast<double>(report.items.size()) / static_cast<double>(report.unknown_total);
  }
  if (const auto decided = report.relabeled_yes + report.relabeled_no) {
    report.secondary_precision = static_cast<double>(report.relabeled_yes) / static_cast<double>(decided);
  }
  return report;
}

stats::Quartiles score_distribution_stats(std::span<const Candidate> candidates) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(c.title_score);
  return stats::median_iqr(scores);
}

}  // namespace majinlink
