#pragma once

// File-to-file pipeline stages behind the command line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "majinlink/crawl.hpp"
#include "majinlink/dedup.hpp"
#include "majinlink/linkage.hpp"

namespace majinlink::pipeline {

namespace fs = std::filesystem;

struct IngestOptions {
  fs::path items_file;   // shadow_items.jsonl
  fs::path payload_dir;  // <item_id>.<extension>
  fs::path out_dir;      // texts/, shingles/, triage.csv, items.jsonl
};

struct IngestSummary {
  std::size_t total = 0;
  std::size_t retained = 0;
  std::size_t discarded_format = 0;
  std::size_t pdf = 0;  // counted, not extracted
  std::size_t too_small = 0;
  std::size_t too_large = 0;
  std::size_t missing_payload = 0;
  std::size_t extraction_error = 0;
  std::size_t empty_text = 0;
};

IngestSummary run_ingest(const IngestOptions& options);

struct DedupOptions {
  fs::path items_file;    // items.jsonl from ingest
  fs::path shingles_dir;  // <item_id>.bin
  fs::path out_dir;       // signatures.bin, clusters.jsonl
  double threshold = 0.8;
  std::uint32_t num_perm = kDefaultNumPerm;
  std::uint64_t seed = 1;
  std::size_t min_cluster_size = 1;
  bool exact = false;
};

struct DedupSummary {
  std::size_t items = 0;
  std::size_t clusters = 0;        // before the size filter
  std::size_t multi_item = 0;
  std::size_t written = 0;         // after the size filter
  LshParams params;
};

DedupSummary run_dedup(const DedupOptions& options);

struct LinkOptions {
  fs::path clusters_file;
  fs::path works_file;
  fs::path editions_file;
  fs::path out_dir;  // candidates.jsonl, accepted.jsonl, link_report.json
  double threshold = kDefaultScoreThreshold;
  std::optional<std::string> language;
};

struct LinkSummary {
  std::size_t works = 0;
  std::size_t datable_works = 0;
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::size_t no_language_edition = 0;
  std::size_t no_title_basis = 0;
};

LinkSummary run_link(const LinkOptions& options);

struct EvalSampleOptions {
  fs::path candidates_file;
  fs::path works_file;
  fs::path clusters_file;
  fs::path plan_file;
  std::string language = "en";
  std::uint64_t seed = 0;
  double threshold = kDefaultScoreThreshold;
};

struct EvalSampleSummary {
  std::size_t sampled = 0;
  std::size_t shortfall = 0;
};

EvalSampleSummary run_eval_sample(const EvalSampleOptions& options);

struct EvalCurveOptions {
  fs::path candidates_file;
  fs::path labels_file;
  fs::path out_csv;  // pr_curve.csv
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 0;
  std::optional<std::string> language;
};

struct EvalCurveSummary {
  std::size_t labeled = 0;
  std::size_t conclusive = 0;
  std::optional<double> precision_at_80;
  std::optional<double> recall_at_80;
};

EvalCurveSummary run_eval_curve(const EvalCurveOptions& options);

struct EvalReportOptions {
  fs::path candidates_file;
  fs::path labels_file;
  std::optional<fs::path> relabels_file;
  fs::path out_json;
  double threshold = kDefaultScoreThreshold;
};

struct EvalReportSummary {
  std::size_t ambiguous = 0;
  std::optional<double> secondary_precision;
};

EvalReportSummary run_eval_report(const EvalReportOptions& options);

struct EmitOptions {
  fs::path candidates_file;  // scored candidates; threshold re-applied
  fs::path works_file;
  fs::path clusters_file;
  fs::path out_dir;  // catalogue_<lang>.jsonl, catalogue_<lang>.coverage.json
  std::string language = "en";
  double threshold = kDefaultScoreThreshold;
};

struct EmitSummary {
  std::size_t entries = 0;
  std::size_t items = 0;
  double with_genres = 0;
  double with_reviews = 0;
};

EmitSummary run_emit(const EmitOptions& options);

struct StatsOptions {
  std::optional<fs::path> shares_csv;  // language,<corpus>,<corpus>,...
  std::optional<fs::path> catalogue_file;
  std::optional<fs::path> works_file;
  std::string corpus = "catalogue";
  fs::path out_dir;  // languages.csv, herfindahl.csv, decades_<corpus>.csv
};

struct StatsSummary {
  std::size_t corpora = 0;
  std::size_t files_written = 0;
};

StatsSummary run_stats(const StatsOptions& options);

struct CrawlOptions {
  fs::path fixture_dir;
  fs::path out_csv;  // crawl_series.csv
  std::size_t max_depth = kDefaultMaxDepth;
};

FrontierState run_crawl_sim(const CrawlOptions& options);

}  // namespace majinlink::pipeline
