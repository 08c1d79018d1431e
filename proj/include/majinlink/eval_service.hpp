#pragma once

// Human-evaluation backend: sampled plan, task leasing, label store and a
// small HTTP/JSON front end.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "majinlink/evaluation.hpp"

namespace majinlink {

struct PlanTask {
  CandidateKey key;
  double title_score = 0;
  std::size_t bin = 0;
  std::string language;
  std::string work_title;
  std::vector<std::string> author_names;
  std::vector<std::string> item_ids;
};

/// The sampled candidates an evaluation session works through (plan.json).
struct EvalPlan {
  StratifiedPlan strata;
  double threshold = kDefaultScoreThreshold;
  std::uint64_t seed = 0;
  std::vector<PlanTask> tasks;
  std::vector<Shortfall> shortfalls;

  std::vector<Candidate> candidates() const;
  const PlanTask* find(const CandidateKey& key) const;

  static EvalPlan load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// Append-only JSON Lines label log. The latest line for a
/// (candidate, evaluator) pair wins when the log is replayed.
class LabelStore {
 public:
  /// In-memory only.
  LabelStore() = default;
  /// Replays `path` if it exists, then appends to it.
  explicit LabelStore(std::filesystem::path path);

  /// Returns true when the pair already had a label (overwrite).
  bool append(const EvalLabel& label);
  /// Current label per (candidate, evaluator), ordered by key then evaluator.
  std::vector<EvalLabel> snapshot() const;
  std::size_t size() const;

  static std::vector<EvalLabel> read_all(const std::filesystem::path& path);

 private:
  using Slot = std::pair<CandidateKey, std::string>;
  mutable std::mutex mutex_;
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
  std::map<Slot, EvalLabel> current_;
};

struct LabelingTask {
  CandidateKey key;
  std::string work_title;
  std::vector<std::string> author_names;
  std::string item_id;  // item the excerpt was drawn from
  std::vector<std::string> excerpt;
  std::size_t bin = 0;
  double title_score = 0;
  bool labeled = false;
};

struct BinProgress {
  double lower = 0;
  double upper = 0;
  std::size_t labeled = 0;
  std::size_t total = 0;
};

struct ServiceStats {
  std::size_t labeled = 0;  // tasks with at least one label
  std::size_t total = 0;
  bool complete = false;
  std::vector<BinProgress> bins;
  double threshold = kDefaultScoreThreshold;
  bool curve_available = false;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> retention;
};

class EvalService {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  struct Options {
    std::filesystem::path texts_dir;  // <item_id>.txt excerpts
    std::chrono::seconds lease{600};
    std::size_t excerpt_paragraphs = 100;
    std::uint64_t seed = 0;
    Clock clock;  // defaults to steady_clock::now
  };

  enum class NextStatus { Task, Complete, NoPlan, AllLeased };
  struct NextResult {
    NextStatus status = NextStatus::NoPlan;
    std::optional<LabelingTask> task;
  };

  enum class SubmitStatus { Created, UnknownCandidate, BadLabel, NoPlan };

  EvalService(Options options, LabelStore& store);

  void load_plan(EvalPlan plan);
  bool has_plan() const;

  /// An unlabeled, unleased task, rotating over bins. An evaluator holding a
  /// live lease gets the same task back.
  NextResult next_task(const std::string& evaluator_id);
  SubmitStatus submit(const CandidateKey& key, std::string_view label,
                      const std::string& evaluator_id);
  ServiceStats stats() const;

 private:
  struct Lease {
    std::string evaluator_id;
    std::chrono::steady_clock::time_point expires;
  };

  LabelingTask make_task(std::size_t index);
  std::vector<std::string> excerpt_for(const std::string& item_id) const;
  std::chrono::steady_clock::time_point now() const;

  Options options_;
  LabelStore& store_;
  mutable std::mutex mutex_;
  std::optional<EvalPlan> plan_;
  std::map<std::size_t, Lease> leases_;
  std::map<std::size_t, LabelingTask> task_cache_;
  std::size_t next_bin_ = 0;
};

/// HTTP routes:
///   GET  /api/tasks/next?evaluator_id=..  200 task | 204 done | 409 no plan | 503 all leased
///   POST /api/labels                      201 | 400 bad json | 404 unknown | 422 bad label
///   GET  /api/stats                       200
class EvalHttpServer {
 public:
  EvalHttpServer(EvalService& service, std::string cors_origin = "*");
  ~EvalHttpServer();
  EvalHttpServer(const EvalHttpServer&) = delete;
  EvalHttpServer& operator=(const EvalHttpServer&) = delete;

  /// Binds and returns the port; port 0 picks a free one.
  int bind(const std::string& host, int port);
  /// Serves until stop().
  void listen();
  /// Serves on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace majinlink
