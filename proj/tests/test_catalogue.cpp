#include <doctest.h>

#include "majinlink/catalogue.hpp"
#include "oracles.hpp"

using namespace majinlink;

namespace {

WorkRecord work(std::string id, std::optional<int> year) {
  WorkRecord w;
  w.work_id = std::move(id);
  w.title = "T " + w.work_id;
  w.first_publication_year = year;
  w.author_names = {"Someone"};
  return w;
}

Cluster cluster(std::string id, std::vector<std::string> items) {
  Cluster c;
  c.cluster_id = std::move(id);
  c.item_ids = std::move(items);
  return c;
}

Candidate cand(std::string c, std::string w, std::string lang = "en") {
  return {std::move(c), std::move(w), std::move(lang), 95.0, {}};
}

}  // namespace

TEST_SUITE("catalogue") {

TEST_CASE("clusters linked to one work merge") {
  auto w1 = work("w1", 1897);
  w1.genres = std::vector<std::string>{"horror"};
  w1.reviews_count = 12;
  const std::vector<WorkRecord> works{w1, work("w2", 2001), work("w3", std::nullopt)};
  const std::vector<Cluster> clusters{cluster("c1", {"i1", "i2"}), cluster("c2", {"i2", "i3"}),
                                      cluster("c3", {"i4"}), cluster("c4", {"i5"}), cluster("c5", {"i6"})};
  const std::vector<Candidate> acc{cand("c2", "w1"), cand("c1", "w1"), cand("c3", "w2"),
                                   cand("c4", "w3"), cand("c5", "w2", "fr")};
  const auto cat = emit_catalogue(acc, works, clusters, "en");
  REQUIRE(cat.entries.size() == 2);
  CHECK(cat.entries[0].work_id == "w1");
  CHECK(cat.entries[0].shadow_item_ids == std::vector<std::string>{"i1", "i2", "i3"});
  CHECK(cat.entries[0].first_publication_year == 1897);
  CHECK_FALSE(cat.entries[0].experimental);
  CHECK(cat.entries[1].shadow_item_ids == std::vector<std::string>{"i4"});
  CHECK(cat.coverage.entries == 2);
  CHECK(cat.coverage.with_genres == 0.5);
  CHECK(cat.coverage.with_reviews == 0.5);
  CHECK(cat.coverage.undated_skipped == 1);

  const auto fr = emit_catalogue(acc, works, clusters, "fr");
  REQUIRE(fr.entries.size() == 1);
  CHECK(fr.entries[0].experimental);
  CHECK(fr.entries[0].shadow_item_ids == std::vector<std::string>{"i6"});
}

TEST_CASE("unknown references are contract violations") {
  const std::vector<WorkRecord> works{work("w1", 1900)};
  const std::vector<Cluster> clusters{cluster("c1", {"i1"})};
  CHECK_THROWS_AS(emit_catalogue(std::vector<Candidate>{cand("c1", "nope")}, works, clusters, "en"), Error);
  CHECK_THROWS_AS(emit_catalogue(std::vector<Candidate>{cand("nope", "w1")}, works, clusters, "en"), Error);
  CHECK(emit_catalogue(std::vector<Candidate>{}, works, clusters, "en").entries.empty());
}

TEST_CASE("herfindahl") {
  const std::vector<double> even{0.25, 0.25, 0.25, 0.25};
  CHECK(herfindahl(even, false) == doctest::Approx(0.25));
  CHECK(herfindahl(even, true) == doctest::Approx(0.0));
  const std::vector<double> one{1.0};
  CHECK(herfindahl(one, false) == 1.0);
  CHECK(herfindahl(one, true) == 1.0);
  const std::vector<double> skew{0.7, 0.2, 0.1};
  CHECK(herfindahl(skew, false) == doctest::Approx(oracle::herfindahl(skew)));
  CHECK(herfindahl(skew, true) == doctest::Approx((0.54 - 1.0 / 3) / (1 - 1.0 / 3)));
  CHECK_THROWS_AS(herfindahl(std::vector<double>{}, false), Error);
  CHECK_THROWS_AS(herfindahl(std::vector<double>{0.5, -0.1}, false), Error);

  const std::vector<double> pct{50, 30, 10};
  const auto r = renormalize(pct);
  CHECK(r[0] == doctest::Approx(50.0 / 90));
  CHECK(herfindahl(r, false) == doctest::Approx(oracle::herfindahl(pct)));
  CHECK_THROWS_AS(renormalize(std::vector<double>{0, 0}), Error);
}

TEST_CASE("language shares") {
  const std::vector<std::string> langs{"en", "en", "fr", "de", "en", "fr"};
  const auto s = language_shares(langs);
  REQUIRE(s.size() == 3);
  CHECK(s[0].language == "en");
  CHECK(s[0].share == doctest::Approx(50.0));
  CHECK(s[1].language == "fr");
  CHECK(s[2].language == "de");
}

TEST_CASE("decade histogram") {
  const std::vector<std::optional<int>> years{1897, 1890, 1901, std::nullopt, 2023, -5, 1999};
  const auto h = decade_histogram(years);
  CHECK(h.undated == 1);
  REQUIRE(h.bins.size() == 5);
  CHECK(h.bins[0].decade == -10);
  CHECK(h.bins[1].decade == 1890);
  CHECK(h.bins[1].count == 2);
  CHECK(h.bins[4].decade == 2020);
  std::size_t sum = h.undated;
  for (const auto& b : h.bins) sum += b.count;
  CHECK(sum == years.size());
}

TEST_CASE("accelerating growth") {
  DecadeHistogram h{{{1980, 1}, {1990, 2}, {2000, 6}, {2010, 30}}, 0};
  CHECK(accelerating_growth(h));
  h = {{{1980, 1}, {1990, 2}, {2000, 4}, {2010, 8}}, 0};  // plain exponential
  CHECK_FALSE(accelerating_growth(h));
  h = {{{1980, 1}, {2000, 6}, {2010, 40}}, 0};  // gap
  CHECK_FALSE(accelerating_growth(h));
  h = {{{1990, 2}, {2000, 6}}, 0};
  CHECK_FALSE(accelerating_growth(h));
}

TEST_CASE("median and iqr") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const auto q = median_iqr(v);
  CHECK(q.median == doctest::Approx(50.5));
  CHECK(q.q1 == doctest::Approx(25.75));
  CHECK(q.q3 == doctest::Approx(75.25));
  CHECK_THROWS_AS(median_iqr(std::vector<double>{}), Error);
}

}  // TEST_SUITE
