#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chromasent/ingest.hpp"

namespace chromasent {

using Seconds = std::chrono::duration<double>;

/// Time source used by rate limiting and retry backoff.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Seconds now() = 0;
  virtual void sleep_for(Seconds d) = 0;
};

class SteadyClock final : public Clock {
 public:
  Seconds now() override;
  void sleep_for(Seconds d) override;
};

/// Clock whose sleeps only advance a counter. Thread-safe.
class SimulatedClock final : public Clock {
 public:
  Seconds now() override;
  void sleep_for(Seconds d) override;
  /// Sum of every sleep requested so far.
  Seconds total_slept();

 private:
  std::mutex mu_;
  Seconds now_{0.0};
  Seconds slept_{0.0};
};

/// Spaces acquisitions at least 1/rate apart. Shared between threads; acquisition is serialized.
class RateLimiter {
 public:
  RateLimiter(double requests_per_second, Clock& clock);

  void acquire();
  double rate() const noexcept { return rate_; }

 private:
  double rate_;
  Clock& clock_;
  std::mutex mu_;
  std::optional<Seconds> next_slot_;
};

struct RetryPolicy {
  Seconds base{1.0};
  double factor = 2.0;
  int max_attempts = 5;

  /// Delay before attempt `attempt` (1-based; the first attempt has no delay).
  Seconds delay_before(int attempt) const;
};

struct PlaceHandle {
  std::string place_id;
  std::string name;
};

/// One review as returned by a remote source.
struct RemoteReview {
  std::string review_id;
  int rating = 0;
  std::string text;
  /// Seconds since the Unix epoch.
  std::int64_t unix_time = 0;
};

struct ReviewPage {
  std::vector<RemoteReview> reviews;
  std::optional<std::string> next_token;
};

/// External review provider. Implementations throw TransientError for retryable
/// failures and PayloadError for responses that do not match the schema.
class ReviewSource {
 public:
  virtual ~ReviewSource() = default;
  virtual std::optional<PlaceHandle> search(const std::string& company_name) = 0;
  virtual ReviewPage reviews(const PlaceHandle& place, const std::optional<std::string>& page_token) = 0;
};

struct FetchOptions {
  int max_pages = 10;
  /// Review ids are assigned as id_base + running index when the remote id is not numeric.
  std::int64_t id_base = 0;
};

struct FetchResult {
  std::vector<Review> reviews;
  /// The company had no search hit.
  bool skipped = false;
  std::string skip_reason;
  int retries = 0;
  std::vector<std::string> log;
};

/// Paginated fetch for one company through the limiter, retrying transient failures.
/// Throws SourceError when retries are exhausted and PayloadError for malformed data.
FetchResult fetch_reviews(ReviewSource& src, const Company& company, const FetchOptions& opts,
                          RateLimiter& limiter, const RetryPolicy& retry, Clock& clock);

/// Unix seconds to "YYYY-MM-DDTHH:MM:SS" (UTC).
std::string unix_to_iso(std::int64_t unix_time);

/// In-memory source for tests and offline runs.
class MockReviewSource final : public ReviewSource {
 public:
  /// Registers a place with pre-paginated reviews.
  void add_place(const std::string& company_name, std::vector<std::vector<RemoteReview>> pages);
  /// The next `n` calls (search or reviews) throw TransientError.
  void fail_next(int n) { pending_failures_ = n; }
  /// Every call throws TransientError.
  void fail_always(bool v) { fail_always_ = v; }

  std::optional<PlaceHandle> search(const std::string& company_name) override;
  ReviewPage reviews(const PlaceHandle& place, const std::optional<std::string>& page_token) override;

  int calls() const noexcept { return calls_; }

 private:
  void maybe_fail();

  std::map<std::string, std::vector<std::vector<RemoteReview>>> places_;
  int pending_failures_ = 0;
  bool fail_always_ = false;
  int calls_ = 0;
};

/// Parses a Places "find place" JSON response. Empty candidates yield nullopt.
std::optional<PlaceHandle> parse_places_search(std::string_view json);
/// Parses a Places "details" JSON response carrying a `reviews` array.
ReviewPage parse_place_reviews(std::string_view json);

/// Environment variable holding the live API key.
inline constexpr const char* kMapsKeyEnv = "CHROMASENT_MAPS_KEY";

/// Live Places client. Only available when built with CHROMASENT_LIVE_SOURCE;
/// otherwise throws ConfigError.
std::unique_ptr<ReviewSource> make_live_source(const std::string& api_key);

}  // namespace chromasent
