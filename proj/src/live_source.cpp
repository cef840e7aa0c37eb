#include "chromasent/error.hpp"
#include "chromasent/review_source.hpp"

#ifdef CHROMASENT_LIVE_SOURCE

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace chromasent {

namespace {

class PlacesSource final : public ReviewSource {
 public:
  explicit PlacesSource(std::string key) : key_(std::move(key)), client_("https://maps.googleapis.com") {
    client_.set_connection_timeout(10);
    client_.set_read_timeout(30);
  }

  std::optional<PlaceHandle> search(const std::string& company_name) override {
    const httplib::Params params{{"input", company_name},
                                 {"inputtype", "textquery"},
                                 {"fields", "place_id,name"},
                                 {"key", key_}};
    return parse_places_search(get("/maps/api/place/findplacefromtext/json", params));
  }

  ReviewPage reviews(const PlaceHandle& place, const std::optional<std::string>& page_token) override {
    httplib::Params params{{"place_id", place.place_id}, {"fields", "reviews"}, {"key", key_}};
    if (page_token) params.emplace("pagetoken", *page_token);
    return parse_place_reviews(get("/maps/api/place/details/json", params));
  }

 private:
  std::string get(const std::string& path, const httplib::Params& params) {
    auto res = client_.Get(path, params, httplib::Headers{});
    if (!res) throw TransientError("HTTP request failed: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500) {
      throw TransientError("HTTP status " + std::to_string(res->status));
    }
    if (res->status != 200) throw PayloadError("HTTP status " + std::to_string(res->status));
    return res->body;
  }

  std::string key_;
  httplib::Client client_;
};

}  // namespace

std::unique_ptr<ReviewSource> make_live_source(const std::string& api_key) {
  if (api_key.empty()) throw ConfigError(std::string(kMapsKeyEnv) + " is not set");
  return std::make_unique<PlacesSource>(api_key);
}

}  // namespace chromasent

#else

namespace chromasent {

std::unique_ptr<ReviewSource> make_live_source(const std::string&) {
  throw ConfigError("live review source not compiled in (configure with -DCHROMASENT_LIVE_SOURCE=ON)");
}

}  // namespace chromasent

#endif
