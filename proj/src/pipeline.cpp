#include "majinlink/pipeline.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "majinlink/catalogue.hpp"
#include "majinlink/eval_service.hpp"
#include "majinlink/evaluation.hpp"
#include "majinlink/ingest.hpp"
#include "majinlink/serialization.hpp"

namespace majinlink::pipeline {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_number(const std::optional<double>& v) {
  if (!v) return {};
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << *v;
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back().push_back(c);
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

std::vector<std::byte> read_bytes(const fs::path& path) {
  const std::string raw = read_file(path);
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

std::optional<fs::path> find_payload(const fs::path& dir, const ShadowItem& item) {
  std::vector<fs::path> tries{dir / (item.item_id + "." + item.extension)};
  if (item.extension != "epub") {
    // Non-EPUB EPUB-class formats must be converted upstream.
    tries.push_back(dir / (item.item_id + ".epub"));
    tries.push_back(dir / (item.item_id + ".txt"));
  }
  for (const auto& p : tries) {
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

std::map<std::string, const WorkRecord*> index_works(const std::vector<WorkRecord>& works) {
  std::map<std::string, const WorkRecord*> out;
  for (const auto& w : works) out.emplace(w.work_id, &w);
  return out;
}

std::vector<WorkRecord> load_works(const fs::path& path) {
  auto works = read_jsonl<WorkRecord>(path);
  const int year = current_calendar_year();
  for (const auto& w : works) validate(w, year);
  return works;
}

std::map<CandidateKey, Label> load_resolved(const fs::path& path) {
  const auto labels = LabelStore::read_all(path);
  return resolve_labels(labels);
}

// Drops labels for candidates outside `candidates`.
std::map<CandidateKey, Label> restrict_labels(std::map<CandidateKey, Label> labels,
                                              std::span<const Candidate> candidates) {
  std::set<CandidateKey> keys;
  for (const auto& c : candidates) keys.insert(c.key());
  const auto before = labels.size();
  std::erase_if(labels, [&](const auto& kv) { return !keys.contains(kv.first); });
  if (labels.size() != before) {
    spdlog::warn("ignored {} labels for candidates outside the candidate file", before - labels.size());
  }
  return labels;
}

void write_decades(const fs::path& path, const DecadeHistogram& h) {
  auto out = open_out(path);
  out << "decade,count\n";
  for (const auto& b : h.bins) out << b.decade << ',' << b.count << '\n';
  out << "und," << h.undated << '\n';
}

}  // namespace

IngestSummary run_ingest(const IngestOptions& options) {
  auto items = read_jsonl<ShadowItem>(options.items_file);
  fs::create_directories(options.out_dir / "texts");
  fs::create_directories(options.out_dir / "shingles");

  IngestSummary summary;
  std::vector<ShadowItem> retained;
  auto triage = open_out(options.out_dir / "triage.csv");
  triage << "item_id,format_class,size_bytes,decision\n";

  for (auto& item : items) {
    ++summary.total;
    const FormatClass format = classify_format(item.extension);
    std::uint64_t size = item.size_bytes;
    std::string decision;

    auto decide = [&]() -> std::string {
      if (format == FormatClass::Discard) {
        ++summary.discarded_format;
        return "discarded_format";
      }
      if (format == FormatClass::Pdf) {
        ++summary.pdf;
        return "pdf";
      }
      const auto payload = find_payload(options.payload_dir, item);
      if (!payload) {
        ++summary.missing_payload;
        return "missing_payload";
      }
      size = fs::file_size(*payload);
      switch (classify_size(size)) {
        case SizeDecision::TooSmall: ++summary.too_small; return "too_small";
        case SizeDecision::TooLarge: ++summary.too_large; return "too_large";
        case SizeDecision::Retained: break;
      }
      std::string text;
      if (payload->extension() == ".txt") {
        text = read_file(*payload);
      } else {
        try {
          auto content = extract_epub(read_bytes(*payload));
          text = std::move(content.text);
          item.embedded_identifiers = normalize_identifiers(content.raw_identifiers);
          if (!item.declared_title && content.title) item.declared_title = content.title;
        } catch (const Error& e) {
          spdlog::debug("{}: {}", item.item_id, e.what());
          ++summary.extraction_error;
          return "extraction_error";
        }
      }
      const auto shingles = shingle(normalize_text(text), kShingleWords, item.item_id);
      if (shingles.hashes.empty()) {
        ++summary.empty_text;
        return "empty_text";
      }
      write_file(options.out_dir / "texts" / (item.item_id + ".txt"), text);
      write_shingles(options.out_dir / "shingles" / (item.item_id + ".bin"), shingles.hashes);
      item.text_ref = "texts/" + item.item_id + ".txt";
      item.size_bytes = size;
      ++summary.retained;
      retained.push_back(item);
      return "retained";
    };

    decision = decide();
    triage << csv_field(item.item_id) << ',' << to_string(format) << ',' << size << ',' << decision << '\n';
  }
  write_jsonl(options.out_dir / "items.jsonl", retained);
  return summary;
}

DedupSummary run_dedup(const DedupOptions& options) {
  const auto items = read_jsonl<ShadowItem>(options.items_file);
  const MinHasher hasher(options.num_perm, options.seed);

  std::vector<ShingleSet> shingles;
  std::vector<MinHashSignature> signatures;
  shingles.reserve(items.size());
  signatures.reserve(items.size());
  for (const auto& item : items) {
    ShingleSet s{item.item_id, read_shingles(options.shingles_dir / (item.item_id + ".bin"))};
    signatures.push_back(hasher.sign(s));
    if (options.exact) shingles.push_back(std::move(s));
  }

  DedupSummary summary;
  summary.items = items.size();
  summary.params = optimal_params(options.threshold, options.num_perm);
  const ClusterOptions cluster_options{options.threshold, options.exact};
  auto clusters = cluster_items(items, signatures, summary.params, cluster_options, shingles);
  summary.clusters = clusters.size();

  std::vector<Cluster> kept;
  for (auto& c : clusters) {
    if (c.item_ids.size() > 1) ++summary.multi_item;
    if (c.item_ids.size() >= options.min_cluster_size) kept.push_back(std::move(c));
  }
  summary.written = kept.size();

  fs::create_directories(options.out_dir);
  write_signatures(options.out_dir / "signatures.bin", signatures, options.num_perm, options.seed);
  write_jsonl(options.out_dir / "clusters.jsonl", kept);
  return summary;
}

LinkSummary run_link(const LinkOptions& options) {
  auto clusters = read_jsonl<Cluster>(options.clusters_file);
  const auto works = load_works(options.works_file);
  const auto editions = read_jsonl<EditionRecord>(options.editions_file);
  for (const auto& e : editions) validate(e);

  if (options.language) {
    std::erase_if(clusters, [&](const Cluster& c) { return c.language != *options.language; });
  }
  const auto datable = filter_datable_works(works);
  const auto report = link_candidates(clusters, datable.retained, editions);
  const auto split = apply_threshold(report.scored, options.threshold);

  fs::create_directories(options.out_dir);
  write_jsonl(options.out_dir / "candidates.jsonl", report.scored);
  write_jsonl(options.out_dir / "accepted.jsonl", split.accepted);

  auto keys_json = [](const std::vector<CandidateKey>& keys) {
    Json arr = Json::array();
    for (const auto& k : keys) arr.push_back({{"cluster_id", k.cluster_id}, {"work_id", k.work_id}});
    return arr;
  };
  Json j{{"threshold", options.threshold},
         {"works", works.size()},
         {"datable_works", datable.retained.size()},
         {"candidates", report.scored.size()},
         {"accepted", split.accepted.size()},
         {"no_language_edition", keys_json(report.no_language_edition)},
         {"no_title_basis", keys_json(report.no_title_basis)}};
  write_file(options.out_dir / "link_report.json", j.dump(2) + "\n");

  return {works.size(),        datable.retained.size(),         report.scored.size(),
          split.accepted.size(), report.no_language_edition.size(), report.no_title_basis.size()};
}

EvalSampleSummary run_eval_sample(const EvalSampleOptions& options) {
  auto candidates = read_jsonl<Candidate>(options.candidates_file);
  std::erase_if(candidates, [&](const Candidate& c) { return c.language != options.language; });
  const auto works = read_jsonl<WorkRecord>(options.works_file);
  const auto clusters = read_jsonl<Cluster>(options.clusters_file);
  const auto work_by_id = index_works(works);
  std::map<std::string, const Cluster*> cluster_by_id;
  for (const auto& c : clusters) cluster_by_id.emplace(c.cluster_id, &c);
  std::map<CandidateKey, const Candidate*> cand_by_key;
  for (const auto& c : candidates) cand_by_key.emplace(c.key(), &c);

  EvalPlan plan;
  plan.strata = StratifiedPlan::default_plan();
  plan.seed = options.seed;
  plan.threshold = options.threshold;
  const auto sample = stratified_sample(candidates, plan.strata, options.seed);
  plan.shortfalls = sample.shortfalls;
  for (const auto& s : sample.keys) {
    const Candidate& c = *cand_by_key.at(s.key);
    PlanTask t;
    t.key = s.key;
    t.bin = s.bin;
    t.title_score = c.title_score;
    t.language = c.language;
    if (auto w = work_by_id.find(c.work_id); w != work_by_id.end()) {
      t.work_title = w->second->title;
      t.author_names = w->second->author_names;
    }
    if (auto cl = cluster_by_id.find(c.cluster_id); cl != cluster_by_id.end()) t.item_ids = cl->second->item_ids;
    plan.tasks.push_back(std::move(t));
  }
  plan.save(options.plan_file);

  EvalSampleSummary summary;
  summary.sampled = plan.tasks.size();
  for (const auto& s : sample.shortfalls) summary.shortfall += s.requested - s.available;
  return summary;
}

EvalCurveSummary run_eval_curve(const EvalCurveOptions& options) {
  auto candidates = read_jsonl<Candidate>(options.candidates_file);
  if (options.language) {
    std::erase_if(candidates, [&](const Candidate& c) { return c.language != *options.language; });
  }
  const auto labels = restrict_labels(load_resolved(options.labels_file), candidates);

  PrCurveOptions curve_options;
  curve_options.bootstrap_samples = options.bootstrap;
  curve_options.seed = options.seed;
  const auto curve = pr_curve(labels, candidates, curve_options);

  auto out = open_out(options.out_csv);
  out << "threshold,precision,ci_low,ci_high,recall,r_ci_low,r_ci_high,retention\n";
  EvalCurveSummary summary;
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    out << curve.thresholds[i] << ',' << csv_number(curve.precision[i]) << ',' << csv_number(curve.precision_ci_low[i])
        << ',' << csv_number(curve.precision_ci_high[i]) << ',' << csv_number(curve.recall[i]) << ','
        << csv_number(curve.recall_ci_low[i]) << ',' << csv_number(curve.recall_ci_high[i]) << ','
        << csv_number(curve.retention[i]) << '\n';
    if (curve.thresholds[i] == kDefaultScoreThreshold) {
      summary.precision_at_80 = curve.precision[i];
      summary.recall_at_80 = curve.recall[i];
    }
  }
  summary.labeled = labels.size();
  for (const auto& [k, l] : labels) summary.conclusive += l != Label::Unknown;
  return summary;
}

EvalReportSummary run_eval_report(const EvalReportOptions& options) {
  const auto candidates = read_jsonl<Candidate>(options.candidates_file);
  const auto labels = restrict_labels(load_resolved(options.labels_file), candidates);
  std::map<CandidateKey, Label> relabels;
  if (options.relabels_file) relabels = restrict_labels(load_resolved(*options.relabels_file), candidates);

  const auto report = ambiguous_subset_report(labels, candidates, options.threshold, relabels);
  Json j{{"threshold", report.threshold},
         {"ambiguous", report.items.size()},
         {"unknown_total", report.unknown_total},
         {"share", report.share},
         {"relabeled_yes", report.relabeled_yes},
         {"relabeled_no", report.relabeled_no},
         {"secondary_precision", report.secondary_precision ? Json(*report.secondary_precision) : Json(nullptr)},
         {"items", report.items}};
  if (!candidates.empty()) {
    const auto q = score_distribution_stats(candidates);
    j["score_median"] = q.median;
    j["score_q1"] = q.q1;
    j["score_q3"] = q.q3;
  }
  if (options.out_json.has_parent_path()) fs::create_directories(options.out_json.parent_path());
  write_file(options.out_json, j.dump(2) + "\n");
  return {report.items.size(), report.secondary_precision};
}

EmitSummary run_emit(const EmitOptions& options) {
  auto candidates = read_jsonl<Candidate>(options.candidates_file);
  std::erase_if(candidates, [&](const Candidate& c) { return c.language != options.language; });
  const auto accepted = apply_threshold(candidates, options.threshold).accepted;
  const auto works = load_works(options.works_file);
  const auto clusters = read_jsonl<Cluster>(options.clusters_file);

  const auto catalogue = emit_catalogue(accepted, works, clusters, options.language);
  fs::create_directories(options.out_dir);
  write_jsonl(options.out_dir / ("catalogue_" + options.language + ".jsonl"), catalogue.entries);
  const auto& cov = catalogue.coverage;
  Json j{{"language", options.language},
         {"threshold", options.threshold},
         {"entries", cov.entries},
         {"with_genres", cov.with_genres},
         {"with_reviews", cov.with_reviews},
         {"undated_skipped", cov.undated_skipped},
         {"experimental", options.language != kPrimaryLanguage}};
  write_file(options.out_dir / ("catalogue_" + options.language + ".coverage.json"), j.dump(2) + "\n");

  EmitSummary summary;
  summary.entries = cov.entries;
  summary.with_genres = cov.with_genres;
  summary.with_reviews = cov.with_reviews;
  for (const auto& e : catalogue.entries) summary.items += e.shadow_item_ids.size();
  return summary;
}

StatsSummary run_stats(const StatsOptions& options) {
  struct Corpus {
    std::string name;
    std::vector<std::string> languages;
    std::vector<double> percents;
  };
  std::vector<Corpus> corpora;

  if (options.shares_csv) {
    std::istringstream in(read_file(*options.shares_csv));
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty table: " + options.shares_csv->string());
    const auto header = split_csv_line(line);
    if (header.size() < 2) throw Error(ErrorCode::Parse, "table needs a language column and a share column");
    for (std::size_t c = 1; c < header.size(); ++c) corpora.push_back({header[c], {}, {}});
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto cells = split_csv_line(line);
      for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string cell = c < cells.size() ? cells[c] : "";
        if (cell.find_first_not_of(" \t") == std::string::npos) continue;  // not listed
        double v = 0;
        try {
          v = std::stod(cell);
        } catch (const std::exception&) {
          throw Error(ErrorCode::Parse, options.shares_csv->string() + ":" + std::to_string(line_no) +
                                            ": bad share '" + cell + "'");
        }
        corpora[c - 1].languages.push_back(cells[0]);
        corpora[c - 1].percents.push_back(v);
      }
    }
  }

  std::optional<DecadeHistogram> catalogue_decades;
  if (options.catalogue_file) {
    const auto entries = read_jsonl<CatalogueEntry>(*options.catalogue_file);
    std::vector<std::string> langs;
    std::vector<std::optional<int>> years;
    for (const auto& e : entries) {
      langs.push_back(e.language);
      years.emplace_back(e.first_publication_year);
    }
    Corpus c{options.corpus, {}, {}};
    for (const auto& s : language_shares(langs)) {
      c.languages.push_back(s.language);
      c.percents.push_back(s.share);
    }
    corpora.push_back(std::move(c));
    catalogue_decades = decade_histogram(years);
  }

  std::optional<DecadeHistogram> work_decades;
  if (options.works_file) {
    std::vector<std::optional<int>> years;
    for (const auto& w : read_jsonl<WorkRecord>(*options.works_file)) years.push_back(w.first_publication_year);
    work_decades = decade_histogram(years);
  }

  fs::create_directories(options.out_dir);
  StatsSummary summary;
  summary.corpora = corpora.size();
  if (!corpora.empty()) {
    auto langs = open_out(options.out_dir / "languages.csv");
    auto herf = open_out(options.out_dir / "herfindahl.csv");
    langs << "corpus,language,share\n";
    herf << "corpus,languages,listed_total,h_plain,h_normalized\n";
    for (const auto& c : corpora) {
      double total = 0;
      std::vector<double> fractions;
      for (std::size_t i = 0; i < c.languages.size(); ++i) {
        langs << csv_field(c.name) << ',' << csv_field(c.languages[i]) << ',' << csv_number(c.percents[i]) << '\n';
        total += c.percents[i];
        fractions.push_back(c.percents[i] / 100.0);
      }
      if (fractions.empty() || total <= 0) continue;
      const auto shares = renormalize(fractions);
      herf << csv_field(c.name) << ',' << shares.size() << ',' << csv_number(total) << ','
           << csv_number(herfindahl(shares, false)) << ',' << csv_number(herfindahl(shares, true)) << '\n';
    }
    summary.files_written += 2;
  }
  if (catalogue_decades) {
    write_decades(options.out_dir / ("decades_" + options.corpus + ".csv"), *catalogue_decades);
    ++summary.files_written;
  }
  if (work_decades) {
    write_decades(options.out_dir / "decades_works.csv", *work_decades);
    ++summary.files_written;
  }
  return summary;
}

FrontierState run_crawl_sim(const CrawlOptions& options) {
  FixtureProvider provider(options.fixture_dir);
  auto state = expand(provider, options.max_depth);

  auto out = open_out(options.out_csv);
  out << "depth,works,editions,authors,recommendations,author_works,cum_works,cum_editions,cum_authors\n";
  std::size_t works = 0, editions = 0, authors = 0;
  for (std::size_t d = 0; d < state.new_by_depth.size(); ++d) {
    const auto& n = state.new_by_depth[d];
    works += n.works;
    editions += n.editions;
    authors += n.authors;
    out << d << ',' << n.works << ',' << n.editions << ',' << n.authors << ',' << n.recommendations << ','
        << n.author_works << ',' << works << ',' << editions << ',' << authors << '\n';
  }
  return state;
}

}  // namespace majinlink::pipeline
