// majinlink command line front end. Talks to the library through the C API only.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "majinlink/majinlink.h"

namespace fs = std::filesystem;

namespace {

struct ContextDeleter {
  void operator()(mjl_context* c) const { mjl_context_destroy(c); }
};
using Context = std::unique_ptr<mjl_context, ContextDeleter>;

int check(mjl_context* ctx, mjl_status status) {
  if (status == MJL_OK) return 0;
  std::fprintf(stderr, "majinlink: %s: %s\n", mjl_status_string(status), mjl_last_error(ctx));
  return static_cast<int>(status) == MJL_ERR_INTERNAL ? 70 : 1;
}

const char* c_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::string path_in(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"majinlink: shadow-library to catalogue record linkage"};
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");
  app.add_flag("-q,--quiet", quiet, "errors only");
  app.set_version_flag("--version", std::string(mjl_version()));

  // ingest
  std::string in_items = "shadow_items.jsonl", in_payloads = "payloads", in_out = "work";
  auto* ingest = app.add_subcommand("ingest", "triage items, extract EPUB text, write shingles");
  ingest->add_option("--items", in_items, "shadow_items.jsonl")->capture_default_str();
  ingest->add_option("--payloads", in_payloads, "directory of <item_id>.<extension>")->capture_default_str();
  ingest->add_option("--out", in_out, "output directory")->capture_default_str();

  // dedup
  std::string dd_work = "work", dd_items, dd_out;
  double dd_threshold = 0.8;
  std::uint32_t dd_num_perm = 128;
  std::uint64_t dd_seed = 1;
  std::size_t dd_min_size = 1;
  bool dd_exact = false;
  auto* dedup = app.add_subcommand("dedup", "MinHash + LSH clustering of near-duplicate items");
  dedup->add_option("--work", dd_work, "ingest output directory")->capture_default_str();
  dedup->add_option("--items", dd_items, "items.jsonl (default <work>/items.jsonl)");
  dedup->add_option("--out", dd_out, "output directory (default <work>)");
  dedup->add_option("--threshold", dd_threshold, "Jaccard threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  dedup->add_option("--num-perm", dd_num_perm, "signature length")->capture_default_str()->check(CLI::PositiveNumber);
  dedup->add_option("--seed", dd_seed, "MinHash seed")->capture_default_str();
  dedup->add_option("--min-cluster-size", dd_min_size, "drop smaller clusters")->capture_default_str();
  dedup->add_flag("--exact", dd_exact, "verify LSH candidates with exact Jaccard");

  // link
  std::string lk_clusters = "work/clusters.jsonl", lk_works = "works.jsonl", lk_editions = "editions.jsonl",
              lk_out = "work", lk_language;
  double lk_threshold = 80;
  auto* link = app.add_subcommand("link", "identifier blocking and title scoring");
  link->add_option("--clusters", lk_clusters)->capture_default_str();
  link->add_option("--works", lk_works)->capture_default_str();
  link->add_option("--editions", lk_editions)->capture_default_str();
  link->add_option("--out", lk_out)->capture_default_str();
  link->add_option("--threshold", lk_threshold, "title score threshold")->capture_default_str();
  link->add_option("--language", lk_language, "only clusters in this language");

  // eval
  auto* eval = app.add_subcommand("eval", "human evaluation workflow");
  eval->require_subcommand(1);
  std::string ev_candidates = "work/candidates.jsonl", ev_works = "works.jsonl", ev_clusters = "work/clusters.jsonl",
              ev_plan = "work/plan.json", ev_language = "en", ev_labels = "work/labels.jsonl",
              ev_curve_out = "work/pr_curve.csv", ev_curve_lang, ev_relabels, ev_report_out = "work/eval_report.json";
  std::uint64_t ev_seed = 0;
  double ev_threshold = 80;
  std::size_t ev_bootstrap = 1000;
  auto* sample = eval->add_subcommand("sample", "draw the stratified evaluation plan");
  sample->add_option("--candidates", ev_candidates)->capture_default_str();
  sample->add_option("--works", ev_works)->capture_default_str();
  sample->add_option("--clusters", ev_clusters)->capture_default_str();
  sample->add_option("--plan", ev_plan, "plan.json to write")->capture_default_str();
  sample->add_option("--language", ev_language)->capture_default_str();
  sample->add_option("--seed", ev_seed)->capture_default_str();
  sample->add_option("--threshold", ev_threshold)->capture_default_str();
  auto* curve = eval->add_subcommand("curve", "precision/recall/retention with bootstrap CIs");
  curve->add_option("--candidates", ev_candidates)->capture_default_str();
  curve->add_option("--labels", ev_labels)->capture_default_str();
  curve->add_option("--out", ev_curve_out)->capture_default_str();
  curve->add_option("--bootstrap", ev_bootstrap, "resamples")->capture_default_str();
  curve->add_option("--seed", ev_seed)->capture_default_str();
  curve->add_option("--language", ev_curve_lang, "only candidates in this language");
  auto* report = eval->add_subcommand("report", "Unknown-labelled candidates above the threshold");
  report->add_option("--candidates", ev_candidates)->capture_default_str();
  report->add_option("--labels", ev_labels)->capture_default_str();
  report->add_option("--relabels", ev_relabels, "labels from the second pass");
  report->add_option("--out", ev_report_out)->capture_default_str();
  report->add_option("--threshold", ev_threshold)->capture_default_str();

  // emit
  std::string em_candidates = "work/candidates.jsonl", em_works = "works.jsonl", em_clusters = "work/clusters.jsonl",
              em_out = "work", em_lang = "en";
  double em_threshold = 80;
  auto* emit = app.add_subcommand("emit", "write catalogue_<lang>.jsonl");
  emit->add_option("--candidates", em_candidates)->capture_default_str();
  emit->add_option("--works", em_works)->capture_default_str();
  emit->add_option("--clusters", em_clusters)->capture_default_str();
  emit->add_option("--out", em_out)->capture_default_str();
  emit->add_option("--lang", em_lang)->capture_default_str();
  emit->add_option("--threshold", em_threshold)->capture_default_str();

  // stats
  std::string st_shares, st_catalogue, st_works, st_corpus = "catalogue", st_out = "work/stats";
  auto* stats = app.add_subcommand("stats", "language shares, Herfindahl index, decade histograms");
  stats->add_option("--shares", st_shares, "CSV: language,<corpus>,...  (percent shares)");
  stats->add_option("--catalogue", st_catalogue, "catalogue_<lang>.jsonl");
  stats->add_option("--works", st_works, "works.jsonl");
  stats->add_option("--corpus", st_corpus, "corpus name for the catalogue")->capture_default_str();
  stats->add_option("--out", st_out)->capture_default_str();

  // crawl-sim
  std::string cr_fixture, cr_out = "crawl_series.csv";
  std::size_t cr_depth = 5;
  auto* crawl = app.add_subcommand("crawl-sim", "frontier expansion over a fixture graph");
  crawl->add_option("--fixture", cr_fixture, "directory with seeds.txt, recs.tsv, author_works.tsv")->required();
  crawl->add_option("--out", cr_out)->capture_default_str();
  crawl->add_option("--max-depth", cr_depth)->capture_default_str();

  // serve
  std::string sv_plan, sv_labels = "work/labels.jsonl", sv_texts = "work/texts", sv_host = "127.0.0.1", sv_cors = "*";
  int sv_port = 8080;
  std::uint32_t sv_lease = 600;
  auto* serve = app.add_subcommand("serve", "evaluation HTTP service");
  serve->add_option("--plan", sv_plan, "plan.json");
  serve->add_option("--labels", sv_labels, "append-only labels.jsonl")->capture_default_str();
  serve->add_option("--texts", sv_texts, "extracted texts")->capture_default_str();
  serve->add_option("--host", sv_host)->capture_default_str();
  serve->add_option("--port", sv_port)->capture_default_str();
  serve->add_option("--cors-origin", sv_cors)->capture_default_str();
  serve->add_option("--lease-seconds", sv_lease)->capture_default_str();

  // params
  double pa_threshold = 0.8;
  std::uint32_t pa_num_perm = 128;
  auto* params = app.add_subcommand("params", "optimal LSH bands and rows");
  params->add_option("--threshold", pa_threshold)->capture_default_str();
  params->add_option("--num-perm", pa_num_perm)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  mjl_set_log_level(verbose ? MJL_LOG_DEBUG : quiet ? MJL_LOG_ERROR : MJL_LOG_INFO);
  Context owner(mjl_context_create());
  mjl_context* ctx = owner.get();
  if (!ctx) return 70;

  if (*ingest) {
    mjl_ingest_options o{in_items.c_str(), in_payloads.c_str(), in_out.c_str()};
    mjl_ingest_summary s{};
    if (int rc = check(ctx, mjl_run_ingest(ctx, &o, &s))) return rc;
    std::printf(
        "total=%zu retained=%zu discarded_format=%zu pdf=%zu too_small=%zu too_large=%zu missing_payload=%zu "
        "extraction_error=%zu empty_text=%zu\n",
        s.total, s.retained, s.discarded_format, s.pdf, s.too_small, s.too_large, s.missing_payload,
        s.extraction_error, s.empty_text);
  } else if (*dedup) {
    const std::string items = dd_items.empty() ? path_in(dd_work, "items.jsonl") : dd_items;
    const std::string shingles = path_in(dd_work, "shingles");
    const std::string out = dd_out.empty() ? dd_work : dd_out;
    mjl_dedup_options o{items.c_str(), shingles.c_str(), out.c_str(), dd_threshold, dd_num_perm,
                        dd_seed,       dd_min_size,      dd_exact ? 1 : 0};
    mjl_dedup_summary s{};
    if (int rc = check(ctx, mjl_run_dedup(ctx, &o, &s))) return rc;
    std::printf("items=%zu clusters=%zu multi_item=%zu written=%zu bands=%u rows=%u\n", s.items, s.clusters,
                s.multi_item, s.written, s.params.bands, s.params.rows);
  } else if (*link) {
    mjl_link_options o{lk_clusters.c_str(), lk_works.c_str(), lk_editions.c_str(),
                       lk_out.c_str(),      lk_threshold,     c_or_null(lk_language)};
    mjl_link_summary s{};
    if (int rc = check(ctx, mjl_run_link(ctx, &o, &s))) return rc;
    std::printf("works=%zu datable=%zu candidates=%zu accepted=%zu no_language_edition=%zu no_title_basis=%zu\n",
                s.works, s.datable_works, s.candidates, s.accepted, s.no_language_edition, s.no_title_basis);
  } else if (*sample) {
    mjl_eval_sample_options o{ev_candidates.c_str(), ev_works.c_str(), ev_clusters.c_str(), ev_plan.c_str(),
                              ev_language.c_str(),   ev_seed,          ev_threshold};
    std::size_t sampled = 0, shortfall = 0;
    if (int rc = check(ctx, mjl_run_eval_sample(ctx, &o, &sampled, &shortfall))) return rc;
    std::printf("sampled=%zu shortfall=%zu plan=%s\n", sampled, shortfall, ev_plan.c_str());
  } else if (*curve) {
    mjl_eval_curve_options o{ev_candidates.c_str(), ev_labels.c_str(), ev_curve_out.c_str(),
                             ev_bootstrap,          ev_seed,           c_or_null(ev_curve_lang)};
    mjl_eval_curve_summary s{};
    if (int rc = check(ctx, mjl_run_eval_curve(ctx, &o, &s))) return rc;
    std::printf("labeled=%zu conclusive=%zu", s.labeled, s.conclusive);
    if (s.has_precision) std::printf(" precision@80=%.4f", s.precision_at_80);
    if (s.has_recall) std::printf(" recall@80=%.4f", s.recall_at_80);
    std::printf("\n");
  } else if (*report) {
    mjl_eval_report_options o{ev_candidates.c_str(), ev_labels.c_str(), c_or_null(ev_relabels),
                              ev_report_out.c_str(), ev_threshold};
    std::size_t ambiguous = 0;
    int has_secondary = 0;
    double secondary = 0;
    if (int rc = check(ctx, mjl_run_eval_report(ctx, &o, &ambiguous, &has_secondary, &secondary))) return rc;
    std::printf("ambiguous=%zu", ambiguous);
    if (has_secondary) std::printf(" secondary_precision=%.4f", secondary);
    std::printf("\n");
  } else if (*emit) {
    mjl_emit_options o{em_candidates.c_str(), em_works.c_str(), em_clusters.c_str(),
                       em_out.c_str(),        em_lang.c_str(),  em_threshold};
    mjl_emit_summary s{};
    if (int rc = check(ctx, mjl_run_emit(ctx, &o, &s))) return rc;
    std::printf("entries=%zu items=%zu with_genres=%.4f with_reviews=%.4f\n", s.entries, s.items, s.with_genres,
                s.with_reviews);
  } else if (*stats) {
    mjl_stats_options o{c_or_null(st_shares), c_or_null(st_catalogue), c_or_null(st_works), st_corpus.c_str(),
                        st_out.c_str()};
    std::size_t files = 0;
    if (int rc = check(ctx, mjl_run_stats(ctx, &o, &files))) return rc;
    std::printf("files_written=%zu out=%s\n", files, st_out.c_str());
  } else if (*crawl) {
    mjl_crawl_options o{cr_fixture.c_str(), cr_out.c_str(), cr_depth};
    mjl_crawl_summary s{};
    if (int rc = check(ctx, mjl_run_crawl_sim(ctx, &o, &s))) return rc;
    std::printf("depth=%zu works=%zu authors=%zu failures=%zu exhausted=%d\n", s.depth, s.works, s.authors,
                s.failures, s.exhausted);
  } else if (*serve) {
    mjl_serve_options o{c_or_null(sv_plan), sv_labels.c_str(), sv_texts.c_str(), sv_host.c_str(),
                        sv_port,            sv_cors.c_str(),   sv_lease};
    return check(ctx, mjl_serve(ctx, &o));
  } else if (*params) {
    mjl_lsh_params p{};
    if (int rc = check(ctx, mjl_optimal_params(ctx, pa_threshold, pa_num_perm, 0.5, 0.5, &p))) return rc;
    std::printf("bands=%u rows=%u threshold=%.3f num_perm=%u\n", p.bands, p.rows, p.threshold, p.num_perm);
  }
  return 0;
}
