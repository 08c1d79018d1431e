#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "majinlink/catalogue.hpp"
#include "majinlink/dedup.hpp"
#include "majinlink/evaluation.hpp"
#include "majinlink/ingest.hpp"
#include "majinlink/linkage.hpp"
#include "majinlink/records.hpp"
#include "oracles.hpp"

using namespace majinlink;

namespace {

std::string fuzz_identifier(std::mt19937_64& rng) {
  static const std::string alphabet = "0123456789Xx-- BA9787";
  std::string s;
  const std::size_t len = rng() % 20;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  if (rng() % 4 == 0) s = fixture::random_isbn13(rng);
  if (rng() % 4 == 0) s = fixture::random_isbn10(rng);
  if (rng() % 8 == 0 && !s.empty()) s[rng() % s.size()] = '-';
  return s;
}

std::u32string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const std::u32string alphabet = U"abcde fgh";
  std::u32string s;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("identifier canonicalization is idempotent") {
  std::mt19937_64 rng(101);
  std::size_t valid = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto raw = fuzz_identifier(rng);
    const auto once = normalize_identifier(raw);
    if (!once) continue;
    ++valid;
    const auto twice = normalize_identifier(once->value);
    REQUIRE(twice);
    CHECK(*twice == *once);
    if (once->kind == IdKind::Isbn13) CHECK(is_valid_isbn13(once->value));
  }
  CHECK(valid > 1000);
}

TEST_CASE("ISBN-10 converts to a valid ISBN-13 of the same book") {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 1000; ++i) {
    const auto ten = fixture::random_isbn10(rng);
    REQUIRE(is_valid_isbn10(ten));
    const auto thirteen = isbn10_to_isbn13(ten);
    CHECK(is_valid_isbn13(thirteen));
    CHECK(thirteen.substr(3, 9) == ten.substr(0, 9));
    CHECK(thirteen.back() == oracle::isbn13_check("978" + ten.substr(0, 9)));
    CHECK(normalize_identifier(ten) == normalize_identifier(thirteen));
  }
}

TEST_CASE("fuzzy scores: bounds, symmetry, identity, partial >= ratio") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_text(rng, 25), b = random_text(rng, 25);
    const double r = fuzzy::ratio(a, b), p = fuzzy::partial_ratio(a, b);
    CHECK(r >= 0.0);
    CHECK(r <= 100.0);
    CHECK(r == fuzzy::ratio(b, a));
    CHECK(p == fuzzy::partial_ratio(b, a));
    CHECK(p >= r);
    CHECK(p <= 100.0);
    CHECK(fuzzy::ratio(a, a) == 100.0);
    if (b.find(a) != std::u32string::npos) CHECK(p == 100.0);
  }
}

TEST_CASE("text normalization is idempotent") {
  const std::vector<std::string> samples{"  The  Hobbit!! ", "ＡＢＣ ｄｅｆ", "L'\xC3\x89tranger -- Camus", "\xEF\xAC\x81nal",
                                         "", "...", "Ça va? Très bien.", "MiXeD\tCase\nlines"};
  for (const auto& s : samples) {
    const auto once = normalize_text(s);
    CHECK(normalize_text(once) == once);
    CHECK(once.find("  ") == std::string::npos);
  }
}

TEST_CASE("shingle Jaccard and MinHash estimates agree in range and symmetry") {
  std::mt19937_64 rng(104);
  const MinHasher h(64, 3);
  for (int i = 0; i < 50; ++i) {
    auto [a, b] = fixture::jaccard_pair(rng, static_cast<double>(rng() % 11) / 10.0, 200);
    const double j = jaccard(a, b);
    CHECK(j == jaccard(b, a));
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
    const auto sa = h.sign("a", a), sb = h.sign("b", b);
    CHECK(estimate_jaccard(sa, sb) == estimate_jaccard(sb, sa));
    CHECK(estimate_jaccard(sa, sa) == 1.0);
  }
}

TEST_CASE("candidate probability is monotone in similarity") {
  for (std::uint32_t b : {1U, 4U, 9U, 16U}) {
    for (std::uint32_t r : {1U, 5U, 13U}) {
      double prev = -1;
      for (int s = 0; s <= 100; ++s) {
        const double p = candidate_probability(s / 100.0, b, r);
        CHECK(p >= prev);
        prev = p;
      }
    }
  }
}

TEST_CASE("retention and recall never increase with the threshold") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<double, char>> items;
    const std::size_t n = 5 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      items.push_back({static_cast<double>(rng() % 1001) / 10.0, "ynu"[rng() % 3]});
    }
    items.push_back({90.0, 'y'});  // at least one positive
    std::vector<Candidate> cands;
    std::map<CandidateKey, Label> labels;
    for (std::size_t i = 0; i < items.size(); ++i) {
      Candidate c{"c" + std::to_string(i), "w", "en", items[i].first, {}};
      labels[c.key()] = items[i].second == 'y' ? Label::Yes : items[i].second == 'n' ? Label::No : Label::Unknown;
      cands.push_back(c);
    }
    PrCurveOptions opt;
    opt.bootstrap_samples = 0;
    const auto curve = pr_curve(labels, cands, opt);
    for (std::size_t t = 1; t < curve.thresholds.size(); ++t) {
      CHECK(curve.retention[t] <= curve.retention[t - 1]);
      REQUIRE(curve.recall[t]);
      CHECK(*curve.recall[t] <= *curve.recall[t - 1]);
    }

    // Dropping the Unknown labels changes nothing.
    auto conclusive = labels;
    std::erase_if(conclusive, [](const auto& kv) { return kv.second == Label::Unknown; });
    const auto without = pr_curve(conclusive, cands, opt);
    CHECK(without.retention == curve.retention);
    CHECK(without.precision == curve.precision);
    CHECK(without.recall == curve.recall);
  }
}

TEST_CASE("stratified sample keys stay in their bin and never repeat") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Candidate> cands;
    const std::size_t n = 20 + rng() % 400;
    for (std::size_t i = 0; i < n; ++i) {
      cands.push_back({"c" + std::to_string(i), "w", "en", static_cast<double>(rng() % 10001) / 100.0, {}});
    }
    const auto plan = StratifiedPlan::default_plan();
    const auto s = stratified_sample(cands, plan, rng());
    std::set<CandidateKey> seen;
    std::vector<std::size_t> per_bin(plan.bins.size());
    for (const auto& k : s.keys) {
      CHECK(seen.insert(k.key).second);
      ++per_bin[k.bin];
    }
    std::size_t missing = 0;
    for (const auto& sf : s.shortfalls) {
      CHECK(per_bin[sf.bin] == sf.available);
      missing += sf.requested - sf.available;
    }
    CHECK(s.keys.size() + missing == plan.total());
  }
}

TEST_CASE("decade histograms account for every year") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::optional<int>> years;
    const std::size_t n = rng() % 200;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 7 == 0) {
        years.push_back(std::nullopt);
      } else {
        years.push_back(static_cast<int>(rng() % 2100) - 100);
      }
    }
    const auto h = decade_histogram(years);
    std::size_t sum = h.undated;
    for (std::size_t i = 0; i < h.bins.size(); ++i) {
      sum += h.bins[i].count;
      CHECK(h.bins[i].decade % 10 == 0);
      if (i) CHECK(h.bins[i].decade > h.bins[i - 1].decade);
    }
    CHECK(sum == years.size());
  }
}

TEST_CASE("herfindahl lies between 1/N and 1") {
  std::mt19937_64 rng(108);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> raw(1 + rng() % 30);
    for (auto& v : raw) v = static_cast<double>(1 + rng() % 1000);
    const auto shares = renormalize(raw);
    const double h = herfindahl(shares, false);
    CHECK(h >= 1.0 / static_cast<double>(shares.size()) - 1e-12);
    CHECK(h <= 1.0 + 1e-12);
    CHECK(h == doctest::Approx(oracle::herfindahl(raw)));
    const double hn = herfindahl(shares, true);
    CHECK(hn >= -1e-12);
    CHECK(hn <= 1.0 + 1e-12);
  }
}

}  // TEST_SUITE
