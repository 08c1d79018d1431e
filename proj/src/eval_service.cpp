#include "majinlink/eval_service.hpp"

#include <ctime>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "majinlink/serialization.hpp"

namespace majinlink {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

// ---- plan -----------------------------------------------------------------

std::vector<Candidate> EvalPlan::candidates() const {
  std::vector<Candidate> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) {
    out.push_back({t.key.cluster_id, t.key.work_id, t.language, t.title_score, {}});
  }
  return out;
}

const PlanTask* EvalPlan::find(const CandidateKey& key) const {
  for (const auto& t : tasks) {
    if (t.key == key) return &t;
  }
  return nullptr;
}

EvalPlan EvalPlan::load(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  EvalPlan plan;
  try {
    plan.threshold = j.value("threshold", kDefaultScoreThreshold);
    plan.seed = j.value("seed", std::uint64_t{0});
    for (const auto& b : j.at("bins")) {
      plan.strata.bins.push_back({b.at("lower").get<double>(), b.at("upper").get<double>(),
                                  b.at("count").get<std::size_t>()});
    }
    for (const auto& t : j.at("tasks")) {
      PlanTask task;
      task.key = {t.at("cluster_id").get<std::string>(), t.at("work_id").get<std::string>()};
      task.title_score = t.at("title_score").get<double>();
      task.bin = t.at("bin").get<std::size_t>();
      task.language = t.value("language", "und");
      task.work_title = t.value("work_title", "");
      task.author_names = t.value("author_names", std::vector<std::string>{});
      task.item_ids = t.value("item_ids", std::vector<std::string>{});
      if (task.bin >= plan.strata.bins.size()) throw Error(ErrorCode::Parse, "task bin out of range");
      plan.tasks.push_back(std::move(task));
    }
    for (const auto& s : j.value("shortfalls", Json::array())) {
      plan.shortfalls.push_back({s.at("bin").get<std::size_t>(), s.at("requested").get<std::size_t>(),
                                 s.at("available").get<std::size_t>()});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return plan;
}

void EvalPlan::save(const std::filesystem::path& path) const {
  Json j;
  j["version"] = 1;
  j["threshold"] = threshold;
  j["seed"] = seed;
  j["bins"] = Json::array();
  for (const auto& b : strata.bins) j["bins"].push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
  j["tasks"] = Json::array();
  for (const auto& t : tasks) {
    j["tasks"].push_back({{"cluster_id", t.key.cluster_id},
                          {"work_id", t.key.work_id},
                          {"title_score", round_to(t.title_score, 4)},
                          {"bin", t.bin},
                          {"language", t.language},
                          {"work_title", t.work_title},
                          {"author_names", t.author_names},
                          {"item_ids", t.item_ids}});
  }
  j["shortfalls"] = Json::array();
  for (const auto& s : shortfalls) {
    j["shortfalls"].push_back({{"bin", s.bin}, {"requested", s.requested}, {"available", s.available}});
  }
  write_file(path, j.dump(2) + "\n");
}

// ---- label store ----------------------------------------------------------

LabelStore::LabelStore(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(*path_)) {
    for (auto& l : read_all(*path_)) {
      Slot slot{l.key, l.evaluator_id};
      current_[slot] = std::move(l);
    }
  }
  out_.open(*path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error(ErrorCode::Io, "cannot open label store " + path_->string());
}

bool LabelStore::append(const EvalLabel& label) {
  std::lock_guard lock(mutex_);
  if (path_) {
    out_ << Json(label).dump() << '\n';
    out_.flush();
    if (!out_) throw Error(ErrorCode::Io, "label store write failed");
  }
  auto [it, inserted] = current_.insert_or_assign(Slot{label.key, label.evaluator_id}, label);
  return !inserted;
}

std::vector<EvalLabel> LabelStore::snapshot() const {
  std::lock_guard lock(mutex_);
  std::vector<EvalLabel> out;
  out.reserve(current_.size());
  for (const auto& [slot, label] : current_) out.push_back(label);
  return out;
}

std::size_t LabelStore::size() const {
  std::lock_guard lock(mutex_);
  return current_.size();
}

std::vector<EvalLabel> LabelStore::read_all(const std::filesystem::path& path) {
  std::vector<EvalLabel> out;
  for_each_jsonl(path, [&](const Json& j) { out.push_back(j.get<EvalLabel>()); });
  return out;
}

// ---- service --------------------------------------------------------------

EvalService::EvalService(Options options, LabelStore& store)
    : options_(std::move(options)), store_(store) {}

std::chrono::steady_clock::time_point EvalService::now() const {
  return options_.clock ? options_.clock() : std::chrono::steady_clock::now();
}

void EvalService::load_plan(EvalPlan plan) {
  plan.strata.validate();
  std::lock_guard lock(mutex_);
  plan_ = std::move(plan);
  leases_.clear();
  task_cache_.clear();
  next_bin_ = 0;
}

bool EvalService::has_plan() const {
  std::lock_guard lock(mutex_);
  return plan_.has_value();
}

std::vector<std::string> EvalService::excerpt_for(const std::string& item_id) const {
  std::vector<std::string> out;
  if (options_.texts_dir.empty()) return out;
  std::ifstream in(options_.texts_dir / (item_id + ".txt"), std::ios::binary);
  std::string line;
  while (out.size() < options_.excerpt_paragraphs && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

LabelingTask EvalService::make_task(std::size_t index) {
  if (auto it = task_cache_.find(index); it != task_cache_.end()) return it->second;
  const PlanTask& t = plan_->tasks[index];
  LabelingTask task;
  task.key = t.key;
  task.work_title = t.work_title;
  task.author_names = t.author_names;
  task.bin = t.bin;
  task.title_score = t.title_score;
  if (!t.item_ids.empty()) {
    Rng rng(derive_seed(options_.seed, t.key.cluster_id + "\x1f" + t.key.work_id));
    task.item_id = t.item_ids[uniform_below(rng, t.item_ids.size())];
    task.excerpt = excerpt_for(task.item_id);
  }
  task_cache_.emplace(index, task);
  return task;
}

EvalService::NextResult EvalService::next_task(const std::string& evaluator_id) {
  std::set<CandidateKey> labeled;
  for (const auto& l : store_.snapshot()) labeled.insert(l.key);

  std::lock_guard lock(mutex_);
  if (!plan_) return {NextStatus::NoPlan, std::nullopt};
  const auto& tasks = plan_->tasks;

  const auto t_now = now();
  for (auto it = leases_.begin(); it != leases_.end();) {
    const bool done = labeled.contains(tasks[it->first].key);
    it = (done || it->second.expires <= t_now) ? leases_.erase(it) : std::next(it);
  }

  bool any_unlabeled = false;
  for (const auto& t : tasks) any_unlabeled |= !labeled.contains(t.key);
  if (!any_unlabeled) return {NextStatus::Complete, std::nullopt};

  for (const auto& [index, lease] : leases_) {
    if (lease.evaluator_id == evaluator_id) return {NextStatus::Task, make_task(index)};
  }

  const std::size_t n_bins = plan_->strata.bins.size();
  for (std::size_t k = 0; k < n_bins; ++k) {
    const std::size_t bin = (next_bin_ + k) % n_bins;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].bin != bin || labeled.contains(tasks[i].key) || leases_.contains(i)) continue;
      leases_[i] = {evaluator_id, t_now + options_.lease};
      next_bin_ = (bin + 1) % n_bins;
      return {NextStatus::Task, make_task(i)};
    }
  }
  return {NextStatus::AllLeased, std::nullopt};
}

EvalService::SubmitStatus EvalService::submit(const CandidateKey& key, std::string_view label,
                                              const std::string& evaluator_id) {
  std::lock_guard lock(mutex_);
  if (!plan_) return SubmitStatus::NoPlan;
  if (!plan_->find(key)) return SubmitStatus::UnknownCandidate;
  const auto parsed = parse_label(label);
  if (!parsed) return SubmitStatus::BadLabel;
  store_.append({key, *parsed, evaluator_id, utc_timestamp()});
  for (auto it = leases_.begin(); it != leases_.end(); ++it) {
    if (plan_->tasks[it->first].key == key) {
      leases_.erase(it);
      break;
    }
  }
  return SubmitStatus::Created;
}

ServiceStats EvalService::stats() const {
  const auto labels = store_.snapshot();
  std::lock_guard lock(mutex_);
  ServiceStats out;
  if (!plan_) return out;
  out.threshold = plan_->threshold;
  out.total = plan_->tasks.size();

  auto resolved = resolve_labels(labels);
  std::erase_if(resolved, [&](const auto& kv) { return plan_->find(kv.first) == nullptr; });

  for (const auto& b : plan_->strata.bins) out.bins.push_back({b.lower, b.upper, 0, 0});
  for (const auto& t : plan_->tasks) {
    auto& bin = out.bins[t.bin];
    ++bin.total;
    if (resolved.contains(t.key)) {
      ++bin.labeled;
      ++out.labeled;
    }
  }
  out.complete = out.total > 0 && out.labeled == out.total;

  if (!resolved.empty()) {
    PrCurveOptions opts;
    opts.thresholds = {plan_->threshold};
    opts.bootstrap_samples = 0;
    const auto curve = pr_curve(resolved, plan_->candidates(), opts);
    out.curve_available = true;
    out.precision = curve.precision[0];
    out.recall = curve.recall[0];
    out.retention = curve.retention[0];
  }
  return out;
}

// ---- HTTP -----------------------------------------------------------------

struct EvalHttpServer::Impl {
  EvalService& service;
  std::string cors_origin;
  httplib::Server server;
  std::thread thread;

  Impl(EvalService& s, std::string origin) : service(s), cors_origin(std::move(origin)) {}

  static void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static Json task_json(const LabelingTask& task) {
    Json j{{"cluster_id", task.key.cluster_id},
           {"work_id", task.key.work_id},
           {"work_title", task.work_title},
           {"author_names", task.author_names},
           {"item_id", task.item_id},
           {"excerpt", task.excerpt},
           {"bin", task.bin},
           {"title_score", round_to(task.title_score, 4)},
           {"status", task.labeled ? "labeled" : "unlabeled"}};
    return j;
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/api/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string evaluator = req.has_param("evaluator_id") ? req.get_param_value("evaluator_id") : "anonymous";
      const auto next = service.next_task(evaluator);
      switch (next.status) {
        case EvalService::NextStatus::Task: send_json(res, 200, task_json(*next.task)); break;
        case EvalService::NextStatus::Complete: res.status = 204; break;
        case EvalService::NextStatus::NoPlan: send_json(res, 409, {{"error", "no sampling plan loaded"}}); break;
        case EvalService::NextStatus::AllLeased:
          res.set_header("Retry-After", "30");
          send_json(res, 503, {{"error", "all remaining tasks are leased"}});
          break;
      }
    });

    server.Post("/api/labels", [this](const httplib::Request& req, httplib::Response& res) {
      Json body;
      try {
        body = Json::parse(req.body);
      } catch (const Json::exception&) {
        send_json(res, 400, {{"error", "body is not JSON"}});
        return;
      }
      if (!body.is_object()) {
        send_json(res, 400, {{"error", "body must be an object"}});
        return;
      }
      const Json& cand = body.contains("candidate") ? body["candidate"] : body;
      if (!cand.is_object() || !cand.contains("cluster_id") || !cand.contains("work_id") ||
          !cand["cluster_id"].is_string() || !cand["work_id"].is_string()) {
        send_json(res, 422, {{"error", "candidate needs cluster_id and work_id"}});
        return;
      }
      const std::string label = body.contains("label") && body["label"].is_string() ? body["label"].get<std::string>() : "";
      const std::string evaluator = body.contains("evaluator_id") && body["evaluator_id"].is_string()
                                        ? body["evaluator_id"].get<std::string>()
                                        : "";
      if (evaluator.empty()) {
        send_json(res, 422, {{"error", "evaluator_id is required"}});
        return;
      }
      const CandidateKey key{cand["cluster_id"].get<std::string>(), cand["work_id"].get<std::string>()};
      switch (service.submit(key, label, evaluator)) {
        case EvalService::SubmitStatus::Created: send_json(res, 201, {{"stored", true}}); break;
        case EvalService::SubmitStatus::UnknownCandidate: send_json(res, 404, {{"error", "unknown candidate"}}); break;
        case EvalService::SubmitStatus::BadLabel:
          send_json(res, 422, {{"error", "label must be yes, no or unknown"}});
          break;
        case EvalService::SubmitStatus::NoPlan: send_json(res, 409, {{"error", "no sampling plan loaded"}}); break;
      }
    });

    server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      const auto s = service.stats();
      Json bins = Json::array();
      for (const auto& b : s.bins) {
        bins.push_back({{"lower", b.lower}, {"upper", b.upper}, {"labeled", b.labeled}, {"total", b.total}});
      }
      Json curve = nullptr;
      if (s.curve_available) {
        curve = {{"threshold", s.threshold},
                 {"precision", optional_json(s.precision)},
                 {"recall", optional_json(s.recall)},
                 {"retention", optional_json(s.retention)}};
      }
      send_json(res, 200,
                {{"labeled", s.labeled},
                 {"total", s.total},
                 {"progress", s.total ? static_cast<double>(s.labeled) / static_cast<double>(s.total) : 0.0},
                 {"complete", s.complete},
                 {"bins", bins},
                 {"curve", curve}});
    });
  }
};

EvalHttpServer::EvalHttpServer(EvalService& service, std::string cors_origin)
    : impl_(std::make_unique<Impl>(service, std::move(cors_origin))) {
  impl_->routes();
}

EvalHttpServer::~EvalHttpServer() { stop(); }

int EvalHttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void EvalHttpServer::listen() { impl_->server.listen_after_bind(); }

void EvalHttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void EvalHttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace majinlink
