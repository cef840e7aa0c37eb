#include <catch_amalgamated.hpp>

#include <thread>

#include "chromasent/error.hpp"
#include "chromasent/review_source.hpp"

using namespace chromasent;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<RemoteReview> page_of(int n, int first_id) {
  std::vector<RemoteReview> v;
  for (int i = 0; i < n; ++i) {
    v.push_back({std::to_string(first_id + i), 1 + i % 5, "review " + std::to_string(first_id + i),
                 1686821797 + i});
  }
  return v;
}

const Company kTang{15, "Tang", "Food", ""};

}  // namespace

TEST_CASE("mock source paginates") {
  MockReviewSource src;
  src.add_place("Tang", {page_of(5, 100), page_of(5, 200)});
  SimulatedClock clock;
  RateLimiter limiter(10.0, clock);
  const auto r = fetch_reviews(src, kTang, {}, limiter, {}, clock);
  REQUIRE(r.reviews.size() == 10);
  CHECK_FALSE(r.skipped);
  CHECK(r.retries == 0);
  CHECK(r.reviews[0].id == 100);
  CHECK(r.reviews[9].id == 204);
  CHECK(r.reviews[0].company_id == 15);
  CHECK(r.reviews[0].company_name == "Tang");
  CHECK(r.reviews[0].time == "2023-06-15T09:36:37");
  CHECK(src.calls() == 3);
}

TEST_CASE("max_pages truncates") {
  MockReviewSource src;
  src.add_place("Tang", {page_of(2, 1), page_of(2, 3), page_of(2, 5)});
  SimulatedClock clock;
  RateLimiter limiter(10.0, clock);
  FetchOptions opts;
  opts.max_pages = 2;
  CHECK(fetch_reviews(src, kTang, opts, limiter, {}, clock).reviews.size() == 4);
}

TEST_CASE("non-numeric remote ids get sequential ids") {
  MockReviewSource src;
  src.add_place("Tang", {{{"abc", 4, "x", 0}, {"def", 2, "y", 0}}});
  SimulatedClock clock;
  RateLimiter limiter(10.0, clock);
  FetchOptions opts;
  opts.id_base = 9000;
  const auto r = fetch_reviews(src, kTang, opts, limiter, {}, clock);
  REQUIRE(r.reviews.size() == 2);
  CHECK(r.reviews[0].id == 9000);
  CHECK(r.reviews[1].id == 9001);
  CHECK(r.reviews[0].time == "1970-01-01T00:00:00");
}

TEST_CASE("missing place yields a skip") {
  MockReviewSource src;
  SimulatedClock clock;
  RateLimiter limiter(10.0, clock);
  const auto r = fetch_reviews(src, kTang, {}, limiter, {}, clock);
  CHECK(r.reviews.empty());
  CHECK(r.skipped);
  CHECK_FALSE(r.skip_reason.empty());
}

TEST_CASE("two transient failures are retried with backoff") {
  MockReviewSource src;
  src.add_place("Tang", {page_of(5, 1), page_of(5, 6)});
  src.fail_next(2);
  SimulatedClock clock;
  RateLimiter limiter(1000.0, clock);
  const auto r = fetch_reviews(src, kTang, {}, limiter, {}, clock);
  CHECK(r.reviews.size() == 10);
  CHECK(r.retries == 2);
  CHECK(r.log.size() == 2);
  // Backoff of 1 s then 2 s before the second and third attempts.
  CHECK(clock.total_slept().count() >= 3.0);
}

TEST_CASE("exhausted retries raise a source error carrying the company id") {
  MockReviewSource src;
  src.add_place("Tang", {page_of(1, 1)});
  src.fail_always(true);
  SimulatedClock clock;
  RateLimiter limiter(1000.0, clock);
  try {
    fetch_reviews(src, kTang, {}, limiter, {}, clock);
    FAIL("expected SourceError");
  } catch (const SourceError& e) {
    CHECK(e.company_id() == 15);
  }
  CHECK(src.calls() == 5);
  CHECK_THAT(clock.total_slept().count(), WithinAbs(1 + 2 + 4 + 8, 0.01));
}

TEST_CASE("out-of-range rating is a payload error") {
  MockReviewSource src;
  src.add_place("Tang", {{{"1", 7, "x", 0}}});
  SimulatedClock clock;
  RateLimiter limiter(10.0, clock);
  CHECK_THROWS_AS(fetch_reviews(src, kTang, {}, limiter, {}, clock), PayloadError);
}

TEST_CASE("retry policy delays") {
  RetryPolicy p;
  CHECK(p.delay_before(1).count() == 0.0);
  CHECK(p.delay_before(2).count() == 1.0);
  CHECK(p.delay_before(3).count() == 2.0);
  CHECK(p.delay_before(5).count() == 8.0);
  CHECK(p.max_attempts == 5);
}

TEST_CASE("rate limiter spaces requests") {
  for (double rate : {0.5, 2.0, 10.0}) {
    for (int n : {1, 2, 7, 25}) {
      SimulatedClock clock;
      RateLimiter limiter(rate, clock);
      const auto start = clock.now();
      for (int i = 0; i < n; ++i) limiter.acquire();
      CHECK((clock.now() - start).count() >= (n - 1) / rate - 1e-9);
    }
  }
  SimulatedClock clock;
  CHECK_THROWS_AS(RateLimiter(0.0, clock), ConfigError);
  CHECK_THROWS_AS(RateLimiter(-1.0, clock), ConfigError);
}

TEST_CASE("rate limiter is shared across threads") {
  SimulatedClock clock;
  RateLimiter limiter(4.0, clock);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 10; ++i) limiter.acquire();
    });
  }
  for (auto& t : threads) t.join();
  CHECK(clock.now().count() >= 39 / 4.0 - 1e-9);
}

TEST_CASE("rate-limited fetch over several companies") {
  MockReviewSource src;
  for (const char* name : {"A", "B", "C"}) src.add_place(name, {page_of(2, 1), page_of(2, 3)});
  SimulatedClock clock;
  RateLimiter limiter(2.0, clock);
  int requests = 0;
  std::int64_t id = 1;
  for (const char* name : {"A", "B", "C"}) {
    fetch_reviews(src, Company{id++, name, "Food", ""}, {}, limiter, {}, clock);
    requests += 3;
  }
  CHECK(src.calls() == requests);
  CHECK(clock.now().count() >= (requests - 1) / 2.0);
}

TEST_CASE("places JSON parsing") {
  auto hit = parse_places_search(R"({"status":"OK","candidates":[{"place_id":"p1","name":"Tang"}]})");
  REQUIRE(hit);
  CHECK(hit->place_id == "p1");
  CHECK(hit->name == "Tang");
  CHECK_FALSE(parse_places_search(R"({"status":"ZERO_RESULTS","candidates":[]})"));
  CHECK_THROWS_AS(parse_places_search("not json"), PayloadError);
  CHECK_THROWS_AS(parse_places_search(R"({"status":"REQUEST_DENIED"})"), PayloadError);
  CHECK_THROWS_AS(parse_places_search(R"({"status":"OVER_QUERY_LIMIT"})"), TransientError);
  CHECK_THROWS_AS(parse_places_search(R"({"status":"OK","candidates":[{"name":"x"}]})"), PayloadError);

  const auto page = parse_place_reviews(
      R"({"status":"OK","result":{"reviews":[{"rating":5,"time":1686821797,"text":"great"}]},"next_page_token":"t2"})");
  REQUIRE(page.reviews.size() == 1);
  CHECK(page.reviews[0].rating == 5);
  CHECK(page.reviews[0].text == "great");
  CHECK(page.next_token == "t2");
  CHECK_THROWS_AS(parse_place_reviews(R"({"status":"OK","result":{"reviews":[{"rating":"5"}]}})"),
                  PayloadError);
  CHECK_THROWS_AS(parse_place_reviews(R"({"status":"OK"})"), PayloadError);
}

TEST_CASE("unix_to_iso") {
  CHECK(unix_to_iso(0) == "1970-01-01T00:00:00");
  CHECK(unix_to_iso(1686821797) == "2023-06-15T09:36:37");
}

#ifndef CHROMASENT_LIVE_SOURCE
TEST_CASE("live source is unavailable in the default build") {
  CHECK_THROWS_AS(make_live_source("key"), ConfigError);
}
#endif
