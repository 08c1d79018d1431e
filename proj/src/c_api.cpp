#include "majinlink/majinlink.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "majinlink/catalogue.hpp"
#include "majinlink/dedup.hpp"
#include "majinlink/error.hpp"
#include "majinlink/eval_service.hpp"
#include "majinlink/ingest.hpp"
#include "majinlink/linkage.hpp"
#include "majinlink/pipeline.hpp"
#include "majinlink/stats.hpp"

struct mjl_context {
  std::string last_error;
};

struct mjl_minhasher {
  majinlink::MinHasher hasher;
};

struct mjl_lsh_index {
  majinlink::LshIndex index;
};

namespace {

using namespace majinlink;

mjl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MJL_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io: return MJL_ERR_IO;
    case ErrorCode::Parse: return MJL_ERR_PARSE;
    case ErrorCode::Extraction: return MJL_ERR_EXTRACTION;
    case ErrorCode::ContractViolation: return MJL_ERR_CONTRACT;
    case ErrorCode::NotFound: return MJL_ERR_NOT_FOUND;
  }
  return MJL_ERR_INTERNAL;
}

struct Fail {
  mjl_status status;
  std::string message;
};

template <typename F>
mjl_status guarded(mjl_context* ctx, F&& fn) {
  if (!ctx) return MJL_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    fn();
    return MJL_OK;
  } catch (const Fail& f) {
    ctx->last_error = f.message;
    return f.status;
  } catch (const Error& e) {
    ctx->last_error = e.what();
    return to_status(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    ctx->last_error = e.what();
    return MJL_ERR_IO;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return MJL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return MJL_ERR_INTERNAL;
  } catch (...) {
    ctx->last_error = "unknown error";
    return MJL_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Fail{MJL_ERR_INVALID_ARGUMENT, what};
}

std::string str(const char* s, const char* name) {
  require(s != nullptr, name);
  return s;
}

std::optional<std::string> opt_str(const char* s) {
  if (!s || !*s) return std::nullopt;
  return std::string(s);
}

void copy_out(const std::string& value, char* out, size_t out_size, size_t* required) {
  if (required) *required = value.size() + 1;
  if (!out || out_size < value.size() + 1) throw Fail{MJL_ERR_BUFFER_TOO_SMALL, "output buffer too small"};
  std::memcpy(out, value.data(), value.size());
  out[value.size()] = '\0';
}

std::vector<std::string> string_list(const char* const* items, size_t n) {
  require(items != nullptr || n == 0, "null title list");
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(str(items[i], "null title"));
  return out;
}

// Raw slots carry no seed; callers pair an index with a hasher of the same seed.
MinHashSignature signature(const char* item_id, const uint64_t* slots, size_t n, uint64_t seed = 0) {
  require(slots != nullptr && n > 0, "empty signature");
  return {item_id ? item_id : "", seed, std::vector<uint64_t>(slots, slots + n)};
}

}  // namespace

extern "C" {

const char* mjl_version(void) { return "0.1.0"; }

const char* mjl_status_string(mjl_status status) {
  switch (status) {
    case MJL_OK: return "ok";
    case MJL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MJL_ERR_IO: return "i/o error";
    case MJL_ERR_PARSE: return "parse error";
    case MJL_ERR_EXTRACTION: return "extraction error";
    case MJL_ERR_CONTRACT: return "contract violation";
    case MJL_ERR_NOT_FOUND: return "not found";
    case MJL_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case MJL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void mjl_set_log_level(mjl_log_level level) {
  switch (level) {
    case MJL_LOG_DEBUG: spdlog::set_level(spdlog::level::debug); break;
    case MJL_LOG_INFO: spdlog::set_level(spdlog::level::info); break;
    case MJL_LOG_WARN: spdlog::set_level(spdlog::level::warn); break;
    case MJL_LOG_ERROR: spdlog::set_level(spdlog::level::err); break;
    case MJL_LOG_OFF: spdlog::set_level(spdlog::level::off); break;
  }
}

mjl_context* mjl_context_create(void) { return new (std::nothrow) mjl_context(); }
void mjl_context_destroy(mjl_context* ctx) { delete ctx; }
const char* mjl_last_error(const mjl_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

mjl_status mjl_normalize_identifier(mjl_context* ctx, const char* raw, mjl_id_kind* kind, char* out,
                                    size_t out_size) {
  return guarded(ctx, [&] {
    require(kind != nullptr, "null kind");
    const auto id = normalize_identifier(str(raw, "null identifier"));
    *kind = !id ? MJL_ID_NONE : id->kind == IdKind::Isbn13 ? MJL_ID_ISBN13 : MJL_ID_ASIN;
    copy_out(id ? id->value : std::string(), out, out_size, nullptr);
  });
}

mjl_status mjl_classify_format(mjl_context* ctx, const char* extension, mjl_format_class* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null output");
    switch (classify_format(str(extension, "null extension"))) {
      case FormatClass::EpubClass: *out = MJL_FORMAT_EPUB; break;
      case FormatClass::Pdf: *out = MJL_FORMAT_PDF; break;
      case FormatClass::Discard: *out = MJL_FORMAT_DISCARD; break;
    }
  });
}

mjl_status mjl_normalize_text(mjl_context* ctx, const char* text, char* out, size_t out_size, size_t* required) {
  return guarded(ctx, [&] { copy_out(normalize_text(str(text, "null text")), out, out_size, required); });
}

mjl_status mjl_ratio(mjl_context* ctx, const char* a, const char* b, double* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null output");
    *out = ratio(str(a, "null string"), str(b, "null string"));
  });
}

mjl_status mjl_partial_ratio(mjl_context* ctx, const char* a, const char* b, double* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null output");
    *out = partial_ratio(str(a, "null string"), str(b, "null string"));
  });
}

mjl_status mjl_title_score(mjl_context* ctx, const char* const* cluster_titles, size_t n_cluster,
                           const char* const* edition_titles, size_t n_edition, double* out, int* defined) {
  return guarded(ctx, [&] {
    require(out != nullptr && defined != nullptr, "null output");
    const auto score = title_score(string_list(cluster_titles, n_cluster), string_list(edition_titles, n_edition));
    *defined = score.has_value();
    *out = score.value_or(0.0);
  });
}

mjl_status mjl_optimal_params(mjl_context* ctx, double threshold, uint32_t num_perm, double fp_weight,
                              double fn_weight, mjl_lsh_params* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null output");
    const auto p = optimal_params(threshold, num_perm, fp_weight, fn_weight);
    *out = {p.bands, p.rows, p.threshold, p.num_perm};
  });
}

mjl_status mjl_minhasher_create(mjl_context* ctx, uint32_t num_perm, uint64_t seed, mjl_minhasher** out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null output");
    *out = new mjl_minhasher{MinHasher(num_perm, seed)};
  });
}

void mjl_minhasher_destroy(mjl_minhasher* hasher) { delete hasher; }

mjl_status mjl_minhash_text(mjl_context* ctx, const mjl_minhasher* hasher, const char* text, uint64_t* slots,
                            size_t n_slots) {
  return guarded(ctx, [&] {
    require(hasher != nullptr && slots != nullptr, "null argument");
    require(n_slots >= hasher->hasher.num_perm(), "slot buffer shorter than num_perm");
    const auto sig = hasher->hasher.sign(shingle(normalize_text(str(text, "null text"))));
    std::copy(sig.slots.begin(), sig.slots.end(), slots);
  });
}

mjl_status mjl_estimate_jaccard(mjl_context* ctx, const uint64_t* a, const uint64_t* b, size_t n_slots,
                                double* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null output");
    *out = estimate_jaccard(signature("a", a, n_slots), signature("b", b, n_slots));
  });
}

mjl_status mjl_lsh_index_create(mjl_context* ctx, const mjl_lsh_params* params, uint64_t seed,
                                mjl_lsh_index** out) {
  return guarded(ctx, [&] {
    require(params != nullptr && out != nullptr, "null argument");
    LshParams p{params->bands, params->rows, params->threshold, params->num_perm};
    *out = new mjl_lsh_index{LshIndex(p, seed)};
  });
}

void mjl_lsh_index_destroy(mjl_lsh_index* index) { delete index; }

mjl_status mjl_lsh_index_insert(mjl_context* ctx, mjl_lsh_index* index, const char* item_id, const uint64_t* slots,
                                size_t n_slots) {
  return guarded(ctx, [&] {
    require(index != nullptr, "null index");
    index->index.insert(signature(str(item_id, "null item id").c_str(), slots, n_slots, index->index.seed()));
  });
}

mjl_status mjl_lsh_index_query(mjl_context* ctx, const mjl_lsh_index* index, const char* item_id,
                               const uint64_t* slots, size_t n_slots, mjl_item_callback fn, void* user) {
  return guarded(ctx, [&] {
    require(index != nullptr && fn != nullptr, "null argument");
    const auto hits = index->index.query(signature(item_id, slots, n_slots, index->index.seed()));
    std::vector<std::string> sorted(hits.begin(), hits.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& id : sorted) fn(id.c_str(), user);
  });
}

mjl_status mjl_herfindahl(mjl_context* ctx, const double* shares, size_t n, int normalized, double* out) {
  return guarded(ctx, [&] {
    require(out != nullptr && (shares != nullptr || n == 0), "null argument");
    *out = herfindahl(std::span<const double>(shares, n), normalized != 0);
  });
}

mjl_status mjl_median_iqr(mjl_context* ctx, const double* values, size_t n, double* median, double* q1,
                          double* q3) {
  return guarded(ctx, [&] {
    require(median && q1 && q3 && (values != nullptr || n == 0), "null argument");
    const auto q = majinlink::median_iqr(std::span<const double>(values, n));
    *median = q.median;
    *q1 = q.q1;
    *q3 = q.q3;
  });
}

mjl_status mjl_run_ingest(mjl_context* ctx, const mjl_ingest_options* options, mjl_ingest_summary* summary) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    const auto s = pipeline::run_ingest({str(options->items_file, "items_file required"),
                                         str(options->payload_dir, "payload_dir required"),
                                         str(options->out_dir, "out_dir required")});
    if (summary) {
      *summary = {s.total,     s.retained,  s.discarded_format, s.pdf,       s.too_small,
                  s.too_large, s.missing_payload, s.extraction_error, s.empty_text};
    }
  });
}

mjl_status mjl_run_dedup(mjl_context* ctx, const mjl_dedup_options* options, mjl_dedup_summary* summary) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::DedupOptions o;
    o.items_file = str(options->items_file, "items_file required");
    o.shingles_dir = str(options->shingles_dir, "shingles_dir required");
    o.out_dir = str(options->out_dir, "out_dir required");
    o.threshold = options->threshold;
    o.num_perm = options->num_perm;
    o.seed = options->seed;
    o.min_cluster_size = options->min_cluster_size;
    o.exact = options->exact != 0;
    const auto s = pipeline::run_dedup(o);
    if (summary) {
      *summary = {s.items, s.clusters, s.multi_item, s.written,
                  {s.params.bands, s.params.rows, s.params.threshold, s.params.num_perm}};
    }
  });
}

mjl_status mjl_run_link(mjl_context* ctx, const mjl_link_options* options, mjl_link_summary* summary) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::LinkOptions o;
    o.clusters_file = str(options->clusters_file, "clusters_file required");
    o.works_file = str(options->works_file, "works_file required");
    o.editions_file = str(options->editions_file, "editions_file required");
    o.out_dir = str(options->out_dir, "out_dir required");
    o.threshold = options->threshold;
    o.language = opt_str(options->language);
    const auto s = pipeline::run_link(o);
    if (summary) {
      *summary = {s.works, s.datable_works, s.candidates, s.accepted, s.no_language_edition, s.no_title_basis};
    }
  });
}

mjl_status mjl_run_eval_sample(mjl_context* ctx, const mjl_eval_sample_options* options, size_t* sampled,
                               size_t* shortfall) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::EvalSampleOptions o;
    o.candidates_file = str(options->candidates_file, "candidates_file required");
    o.works_file = str(options->works_file, "works_file required");
    o.clusters_file = str(options->clusters_file, "clusters_file required");
    o.plan_file = str(options->plan_file, "plan_file required");
    o.language = opt_str(options->language).value_or(kPrimaryLanguage);
    o.seed = options->seed;
    o.threshold = options->threshold;
    const auto s = pipeline::run_eval_sample(o);
    if (sampled) *sampled = s.sampled;
    if (shortfall) *shortfall = s.shortfall;
  });
}

mjl_status mjl_run_eval_curve(mjl_context* ctx, const mjl_eval_curve_options* options,
                              mjl_eval_curve_summary* summary) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::EvalCurveOptions o;
    o.candidates_file = str(options->candidates_file, "candidates_file required");
    o.labels_file = str(options->labels_file, "labels_file required");
    o.out_csv = str(options->out_csv, "out_csv required");
    o.bootstrap = options->bootstrap;
    o.seed = options->seed;
    o.language = opt_str(options->language);
    const auto s = pipeline::run_eval_curve(o);
    if (summary) {
      *summary = {s.labeled,
                  s.conclusive,
                  s.precision_at_80.has_value(),
                  s.recall_at_80.has_value(),
                  s.precision_at_80.value_or(0.0),
                  s.recall_at_80.value_or(0.0)};
    }
  });
}

mjl_status mjl_run_eval_report(mjl_context* ctx, const mjl_eval_report_options* options, size_t* ambiguous,
                               int* has_secondary, double* secondary_precision) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::EvalReportOptions o;
    o.candidates_file = str(options->candidates_file, "candidates_file required");
    o.labels_file = str(options->labels_file, "labels_file required");
    if (auto r = opt_str(options->relabels_file)) o.relabels_file = *r;
    o.out_json = str(options->out_json, "out_json required");
    o.threshold = options->threshold;
    const auto s = pipeline::run_eval_report(o);
    if (ambiguous) *ambiguous = s.ambiguous;
    if (has_secondary) *has_secondary = s.secondary_precision.has_value();
    if (secondary_precision) *secondary_precision = s.secondary_precision.value_or(0.0);
  });
}

mjl_status mjl_run_emit(mjl_context* ctx, const mjl_emit_options* options, mjl_emit_summary* summary) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::EmitOptions o;
    o.candidates_file = str(options->candidates_file, "candidates_file required");
    o.works_file = str(options->works_file, "works_file required");
    o.clusters_file = str(options->clusters_file, "clusters_file required");
    o.out_dir = str(options->out_dir, "out_dir required");
    o.language = opt_str(options->language).value_or(kPrimaryLanguage);
    o.threshold = options->threshold;
    const auto s = pipeline::run_emit(o);
    if (summary) *summary = {s.entries, s.items, s.with_genres, s.with_reviews};
  });
}

mjl_status mjl_run_stats(mjl_context* ctx, const mjl_stats_options* options, size_t* files_written) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::StatsOptions o;
    if (auto p = opt_str(options->shares_csv)) o.shares_csv = *p;
    if (auto p = opt_str(options->catalogue_file)) o.catalogue_file = *p;
    if (auto p = opt_str(options->works_file)) o.works_file = *p;
    o.corpus = opt_str(options->corpus).value_or("catalogue");
    o.out_dir = str(options->out_dir, "out_dir required");
    require(o.shares_csv || o.catalogue_file || o.works_file, "no input given");
    const auto s = pipeline::run_stats(o);
    if (files_written) *files_written = s.files_written;
  });
}

mjl_status mjl_run_crawl_sim(mjl_context* ctx, const mjl_crawl_options* options, mjl_crawl_summary* summary) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    pipeline::CrawlOptions o;
    o.fixture_dir = str(options->fixture_dir, "fixture_dir required");
    o.out_csv = str(options->out_csv, "out_csv required");
    o.max_depth = options->max_depth;
    const auto s = pipeline::run_crawl_sim(o);
    if (summary) {
      *summary = {s.depth, s.known_work_ids.size(), s.known_author_ids.size(), s.failed_ids.size(), s.exhausted};
    }
  });
}

mjl_status mjl_serve(mjl_context* ctx, const mjl_serve_options* options) {
  return guarded(ctx, [&] {
    require(options != nullptr, "null options");
    LabelStore store(str(options->labels_file, "labels_file required"));
    EvalService::Options so;
    if (auto t = opt_str(options->texts_dir)) so.texts_dir = *t;
    if (options->lease_seconds) so.lease = std::chrono::seconds(options->lease_seconds);
    std::optional<EvalPlan> plan;
    if (auto p = opt_str(options->plan_file)) {
      plan = EvalPlan::load(*p);
      so.seed = plan->seed;
    }
    EvalService service(so, store);
    if (plan) service.load_plan(std::move(*plan));
    EvalHttpServer server(service, opt_str(options->cors_origin).value_or("*"));
    const std::string host = opt_str(options->host).value_or("127.0.0.1");
    const int port = server.bind(host, options->port);
    spdlog::info("serving on http://{}:{} ({} labels loaded)", host, port, store.size());
    server.listen();
  });
}

}  // extern "C"
