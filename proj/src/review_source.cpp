#include "chromasent/review_source.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <thread>

#include "json.hpp"

#include "chromasent/error.hpp"

namespace chromasent {

Seconds SteadyClock::now() {
  return std::chrono::duration_cast<Seconds>(std::chrono::steady_clock::now().time_since_epoch());
}

void SteadyClock::sleep_for(Seconds d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

Seconds SimulatedClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void SimulatedClock::sleep_for(Seconds d) {
  std::lock_guard lock(mu_);
  if (d.count() > 0) {
    now_ += d;
    slept_ += d;
  }
}

Seconds SimulatedClock::total_slept() {
  std::lock_guard lock(mu_);
  return slept_;
}

RateLimiter::RateLimiter(double requests_per_second, Clock& clock)
    : rate_(requests_per_second), clock_(clock) {
  if (!(requests_per_second > 0.0) || !std::isfinite(requests_per_second)) {
    throw ConfigError("rate limit must be a positive finite number");
  }
}

void RateLimiter::acquire() {
  std::lock_guard lock(mu_);
  Seconds now = clock_.now();
  if (next_slot_ && now < *next_slot_) {
    clock_.sleep_for(*next_slot_ - now);
    now = *next_slot_;
  }
  next_slot_ = now + Seconds(1.0 / rate_);
}

Seconds RetryPolicy::delay_before(int attempt) const {
  if (attempt <= 1) return Seconds(0.0);
  return base * std::pow(factor, attempt - 2);
}

std::string unix_to_iso(std::int64_t unix_time) {
  const std::time_t t = static_cast<std::time_t>(unix_time);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  return buf;
}

namespace {

template <typename F>
auto with_retry(F&& call, const Company& company, RateLimiter& limiter, const RetryPolicy& retry,
                Clock& clock, FetchResult& result, std::string_view what) {
  for (int attempt = 1;; ++attempt) {
    clock.sleep_for(retry.delay_before(attempt));
    limiter.acquire();
    try {
      return call();
    } catch (const TransientError& e) {
      if (attempt >= retry.max_attempts) {
        throw SourceError(company.id, std::string(what) + " failed after " +
                                          std::to_string(attempt) + " attempts: " + e.what());
      }
      ++result.retries;
      result.log.push_back(std::string(what) + " attempt " + std::to_string(attempt) +
                           " failed (" + e.what() + "); retrying");
    }
  }
}

}  // namespace

FetchResult fetch_reviews(ReviewSource& src, const Company& company, const FetchOptions& opts,
                          RateLimiter& limiter, const RetryPolicy& retry, Clock& clock) {
  FetchResult result;
  auto place = with_retry([&] { return src.search(company.name); }, company, limiter, retry, clock,
                          result, "search");
  if (!place) {
    result.skipped = true;
    result.skip_reason = "no place found for '" + company.name + "'";
    result.log.push_back(result.skip_reason);
    return result;
  }

  std::optional<std::string> token;
  for (int page = 0; page < opts.max_pages; ++page) {
    ReviewPage p = with_retry([&] { return src.reviews(*place, token); }, company, limiter, retry,
                              clock, result, "reviews page " + std::to_string(page + 1));
    for (auto& rr : p.reviews) {
      if (rr.rating < 1 || rr.rating > 5) {
        throw PayloadError("company " + std::to_string(company.id) + ": rating " +
                           std::to_string(rr.rating) + " outside 1-5");
      }
      Review r;
      std::int64_t numeric = 0;
      auto [ptr, ec] = std::from_chars(rr.review_id.data(), rr.review_id.data() + rr.review_id.size(), numeric);
      const bool is_numeric = ec == std::errc{} && ptr == rr.review_id.data() + rr.review_id.size() &&
                              !rr.review_id.empty();
      r.id = is_numeric ? numeric : opts.id_base + static_cast<std::int64_t>(result.reviews.size());
      r.company_id = company.id;
      r.company_name = company.name;
      r.category = company.category;
      r.score = rr.rating;
      r.text = std::move(rr.text);
      r.time = unix_to_iso(rr.unix_time);
      result.reviews.push_back(std::move(r));
    }
    if (!p.next_token) break;
    token = std::move(p.next_token);
  }
  return result;
}

void MockReviewSource::add_place(const std::string& company_name,
                                 std::vector<std::vector<RemoteReview>> pages) {
  places_[company_name] = std::move(pages);
}

void MockReviewSource::maybe_fail() {
  ++calls_;
  if (fail_always_) throw TransientError("mock: service unavailable");
  if (pending_failures_ > 0) {
    --pending_failures_;
    throw TransientError("mock: transient failure");
  }
}

std::optional<PlaceHandle> MockReviewSource::search(const std::string& company_name) {
  maybe_fail();
  if (!places_.count(company_name)) return std::nullopt;
  return PlaceHandle{"mock:" + company_name, company_name};
}

ReviewPage MockReviewSource::reviews(const PlaceHandle& place,
                                     const std::optional<std::string>& page_token) {
  maybe_fail();
  auto it = places_.find(place.name);
  if (it == places_.end()) throw PayloadError("mock: unknown place " + place.place_id);
  std::size_t index = 0;
  if (page_token) {
    auto [p, ec] = std::from_chars(page_token->data(), page_token->data() + page_token->size(), index);
    if (ec != std::errc{}) throw PayloadError("mock: bad page token " + *page_token);
  }
  ReviewPage page;
  if (index < it->second.size()) page.reviews = it->second[index];
  if (index + 1 < it->second.size()) page.next_token = std::to_string(index + 1);
  return page;
}

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw PayloadError("response is not a JSON object");
  return j;
}

void check_status(const json& j, bool allow_zero_results) {
  const auto it = j.find("status");
  if (it == j.end() || !it->is_string()) throw PayloadError("response has no status");
  const auto status = it->get<std::string>();
  if (status == "OK" || (allow_zero_results && status == "ZERO_RESULTS")) return;
  if (status == "OVER_QUERY_LIMIT" || status == "UNKNOWN_ERROR") {
    throw TransientError("remote status " + status);
  }
  throw PayloadError("remote status " + status);
}

}  // namespace

std::optional<PlaceHandle> parse_places_search(std::string_view text) {
  const json j = parse_json(text);
  check_status(j, true);
  const auto it = j.find("candidates");
  if (it == j.end()) return std::nullopt;
  if (!it->is_array()) throw PayloadError("candidates is not an array");
  if (it->empty()) return std::nullopt;
  const json& c = it->front();
  if (!c.is_object() || !c.contains("place_id") || !c["place_id"].is_string()) {
    throw PayloadError("candidate without place_id");
  }
  PlaceHandle h;
  h.place_id = c["place_id"].get<std::string>();
  if (c.contains("name") && c["name"].is_string()) h.name = c["name"].get<std::string>();
  return h;
}

ReviewPage parse_place_reviews(std::string_view text) {
  const json j = parse_json(text);
  check_status(j, false);
  ReviewPage page;
  const auto result = j.find("result");
  if (result == j.end() || !result->is_object()) throw PayloadError("missing result object");
  const auto reviews = result->find("reviews");
  if (reviews != result->end()) {
    if (!reviews->is_array()) throw PayloadError("reviews is not an array");
    for (const auto& r : *reviews) {
      if (!r.is_object() || !r.contains("rating") || !r["rating"].is_number_integer() ||
          !r.contains("time") || !r["time"].is_number_integer()) {
        throw PayloadError("review without integer rating/time");
      }
      RemoteReview rr;
      rr.rating = r["rating"].get<int>();
      rr.unix_time = r["time"].get<std::int64_t>();
      if (r.contains("text") && r["text"].is_string()) rr.text = r["text"].get<std::string>();
      if (r.contains("review_id") && r["review_id"].is_string()) {
        rr.review_id = r["review_id"].get<std::string>();
      }
      page.reviews.push_back(std::move(rr));
    }
  }
  if (j.contains("next_page_token") && j["next_page_token"].is_string()) {
    page.next_token = j["next_page_token"].get<std::string>();
  }
  return page;
}

}  // namespace chromasent
