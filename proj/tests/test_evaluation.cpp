#include <doctest.h>

#include <numeric>

#include "eval_fixtures.hpp"
#include "majinlink/evaluation.hpp"
#include "oracles.hpp"

using namespace majinlink;

namespace {

std::vector<Candidate> uniform_candidates(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    Candidate c;
    c.cluster_id = "c" + std::to_string(i);
    c.work_id = "w" + std::to_string(i % 97);
    c.language = "en";
    c.title_score = static_cast<double>(uniform_below(rng, 100001)) / 1000.0;
    out.push_back(c);
  }
  return out;
}

EvalLabel lab(std::string c, std::string w, Label l, std::string ev) {
  return {{std::move(c), std::move(w)}, l, std::move(ev), ""};
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("default plan counts") {
  const auto plan = StratifiedPlan::default_plan();
  std::vector<std::size_t> counts;
  for (const auto& b : plan.bins) counts.push_back(b.count);
  CHECK(counts == std::vector<std::size_t>{5, 15, 10, 15, 25, 30, 50, 50});
  CHECK(plan.total() == 200);
  CHECK_NOTHROW(plan.validate());
}

TEST_CASE("bin edges") {
  const auto plan = StratifiedPlan::default_plan();
  CHECK(plan.bin_of(0.0) == 0U);
  CHECK(plan.bin_of(20.0) == 0U);
  CHECK(plan.bin_of(20.0001) == 1U);
  CHECK(plan.bin_of(40.0) == 1U);
  CHECK(plan.bin_of(50.0) == 2U);
  CHECK(plan.bin_of(80.0) == 5U);
  CHECK(plan.bin_of(80.5) == 6U);
  CHECK(plan.bin_of(100.0) == 7U);
  CHECK_FALSE(plan.bin_of(-1.0));
  CHECK_FALSE(plan.bin_of(100.5));
}

TEST_CASE("invalid plans") {
  StratifiedPlan p{{{0, 50, 1}, {40, 100, 1}}};
  CHECK_THROWS_AS(p.validate(), Error);
  p = {{{0, 50, 0}}};
  CHECK_THROWS_AS(p.validate(), Error);
  p = {{{50, 40, 1}}};
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("stratified sample on an ample pool") {
  const auto cands = uniform_candidates(5000, 3);
  const auto plan = StratifiedPlan::default_plan();
  const auto s = stratified_sample(cands, plan, 11);
  CHECK(s.keys.size() == 200);
  CHECK(s.shortfalls.empty());
  std::vector<std::size_t> per_bin(plan.bins.size());
  std::map<CandidateKey, double> score;
  for (const auto& c : cands) score[c.key()] = c.title_score;
  std::set<CandidateKey> seen;
  for (const auto& k : s.keys) {
    ++per_bin[k.bin];
    CHECK(plan.bin_of(score.at(k.key)) == k.bin);
    CHECK(seen.insert(k.key).second);
  }
  for (std::size_t b = 0; b < plan.bins.size(); ++b) CHECK(per_bin[b] == plan.bins[b].count);

  const auto again = stratified_sample(cands, plan, 11);
  CHECK(again.keys.size() == s.keys.size());
  for (std::size_t i = 0; i < s.keys.size(); ++i) CHECK(again.keys[i].key == s.keys[i].key);
  const auto other = stratified_sample(cands, plan, 12);
  bool differs = false;
  for (std::size_t i = 0; i < s.keys.size(); ++i) differs |= !(other.keys[i].key == s.keys[i].key);
  CHECK(differs);
}

TEST_CASE("stratified sample reports shortfall") {
  std::vector<Candidate> cands;
  for (int i = 0; i < 3; ++i) cands.push_back({"c" + std::to_string(i), "w", "en", 10.0, {}});
  for (int i = 0; i < 60; ++i) cands.push_back({"d" + std::to_string(i), "w", "en", 95.0, {}});
  const auto s = stratified_sample(cands, StratifiedPlan::default_plan(), 0);
  CHECK(s.keys.size() == 53);
  REQUIRE(s.shortfalls.size() == 7);
  CHECK(s.shortfalls[0].bin == 0);
  CHECK(s.shortfalls[0].requested == 5);
  CHECK(s.shortfalls[0].available == 3);
  CHECK(s.shortfalls[1].available == 0);
  CHECK_THROWS_AS(stratified_sample(std::vector<Candidate>{}, StratifiedPlan::default_plan(), 0), Error);
}

TEST_CASE("labels parse") {
  CHECK(parse_label("YES") == Label::Yes);
  CHECK(parse_label("no") == Label::No);
  CHECK(parse_label("Unknown") == Label::Unknown);
  CHECK_FALSE(parse_label("maybe"));
  CHECK_FALSE(parse_label(""));
  CHECK(to_string(Label::Unknown) == "unknown");
}

TEST_CASE("resolve labels: latest per evaluator, then majority") {
  const std::vector<EvalLabel> ls{
      lab("c1", "w", Label::No, "a"),  lab("c1", "w", Label::Yes, "a"),  // a changed their mind
      lab("c1", "w", Label::Yes, "b"), lab("c1", "w", Label::No, "c"),
      lab("c2", "w", Label::Yes, "a"), lab("c2", "w", Label::No, "b"),  // tie
      lab("c3", "w", Label::Unknown, "a"),
      lab("c4", "w", Label::Yes, "a"), lab("c4", "w", Label::Unknown, "b"),
  };
  const auto r = resolve_labels(ls);
  REQUIRE(r.size() == 4);
  CHECK(r.at({"c1", "w"}) == Label::Yes);
  CHECK(r.at({"c2", "w"}) == Label::Unknown);
  CHECK(r.at({"c3", "w"}) == Label::Unknown);
  CHECK(r.at({"c4", "w"}) == Label::Yes);
}

TEST_CASE("pr curve equals the confusion oracle at every integer threshold") {
  const auto& items = fixture::hand_labeled_20();
  const auto set = fixture::make_labeled(items);
  PrCurveOptions opt;
  opt.bootstrap_samples = 0;
  const auto curve = pr_curve(set.labels, set.candidates, opt);
  REQUIRE(curve.thresholds.size() == 101);
  for (std::size_t t = 0; t <= 100; ++t) {
    const auto c = oracle::confusion(items, static_cast<double>(t));
    CHECK(curve.precision[t] == c.precision());
    CHECK(curve.recall[t] == c.recall());
    std::size_t kept = 0;
    for (const auto& [s, l] : items) kept += s >= static_cast<double>(t);
    CHECK(curve.retention[t] == static_cast<double>(kept) / 20.0);
    CHECK_FALSE(curve.precision_ci_low[t]);
  }
  // Spot values by hand: at 80, predicted = {80,88,91.3,95,99.1,100} (84.2 unknown), tp = 5.
  CHECK(*curve.precision[80] == doctest::Approx(5.0 / 6.0));
  CHECK(*curve.recall[80] == doctest::Approx(5.0 / 10.0));
  CHECK(curve.retention[80] == doctest::Approx(7.0 / 20.0));
}

TEST_CASE("identity resampler reproduces the point estimate") {
  const auto set = fixture::make_labeled(fixture::hand_labeled_20());
  PrCurveOptions opt;
  opt.bootstrap_samples = 5;
  opt.resampler = [](std::size_t n, Rng&) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  };
  const auto curve = pr_curve(set.labels, set.candidates, opt);
  for (std::size_t t = 0; t < curve.thresholds.size(); ++t) {
    CHECK(curve.precision_ci_low[t] == curve.precision[t]);
    CHECK(curve.precision_ci_high[t] == curve.precision[t]);
    CHECK(curve.recall_ci_low[t] == curve.recall[t]);
  }
}

TEST_CASE("bootstrap intervals bracket the point estimates") {
  const auto set = fixture::make_labeled(fixture::hand_labeled_20());
  PrCurveOptions opt;
  opt.bootstrap_samples = 500;
  opt.seed = 4;
  const auto curve = pr_curve(set.labels, set.candidates, opt);
  for (std::size_t t = 0; t < curve.thresholds.size(); ++t) {
    if (curve.precision[t]) {
      REQUIRE(curve.precision_ci_low[t]);
      CHECK(*curve.precision_ci_low[t] <= *curve.precision[t] + 1e-12);
      CHECK(*curve.precision_ci_high[t] >= *curve.precision[t] - 1e-12);
    }
    if (curve.recall[t]) {
      CHECK(*curve.recall_ci_low[t] <= *curve.recall[t] + 1e-12);
      CHECK(*curve.recall_ci_high[t] >= *curve.recall[t] - 1e-12);
    }
  }
  const auto again = pr_curve(set.labels, set.candidates, opt);
  CHECK(again.precision_ci_low == curve.precision_ci_low);
}

TEST_CASE("pr curve rejects bad input") {
  const auto set = fixture::make_labeled(fixture::hand_labeled_20());
  CHECK_THROWS_AS(pr_curve({}, set.candidates), Error);
  auto labels = set.labels;
  labels[{"nope", "w"}] = Label::Yes;
  CHECK_THROWS_AS(pr_curve(labels, set.candidates), Error);
}

TEST_CASE("ambiguous subset report") {
  const auto f = fixture::ambiguous_57();
  const auto r = ambiguous_subset_report(f.set.labels, f.set.candidates, 80.0, f.relabels);
  CHECK(r.unknown_total == 57);
  CHECK(r.items.size() == 24);
  CHECK(r.relabeled_yes == 22);
  CHECK(r.relabeled_no == 2);
  REQUIRE(r.secondary_precision);
  CHECK(*r.secondary_precision == doctest::Approx(0.917).epsilon(0.001));

  std::size_t conclusive = 0;
  for (const auto& [k, l] : f.set.labels) conclusive += l != Label::Unknown;
  CHECK(conclusive == 143);

  const auto bare = ambiguous_subset_report(f.set.labels, f.set.candidates);
  CHECK_FALSE(bare.secondary_precision);
  CHECK(bare.share == doctest::Approx(24.0 / 57.0));
}

TEST_CASE("score distribution stats") {
  std::vector<Candidate> cands;
  for (double s : {5.0, 1.0, 3.0, 2.0, 4.0}) cands.push_back({"c", "w", "en", s, {}});
  const auto q = score_distribution_stats(cands);
  CHECK(q.median == 3.0);
  CHECK(q.q1 == 2.0);
  CHECK(q.q3 == 4.0);
  CHECK_THROWS_AS(score_distribution_stats(std::vector<Candidate>{}), Error);

  Rng rng(5);
  std::vector<double> v;
  for (int i = 0; i < 37; ++i) v.push_back(static_cast<double>(uniform_below(rng, 1000)) / 10.0);
  const auto m = stats::median_iqr(v);
  CHECK(m.median == doctest::Approx(oracle::quantile(v, 0.5)));
  CHECK(m.q1 == doctest::Approx(oracle::quantile(v, 0.25)));
  CHECK(m.q3 == doctest::Approx(oracle::quantile(v, 0.75)));
}

}  // TEST_SUITE
