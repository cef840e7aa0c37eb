#pragma once

#include <string>

#include "chromasent/associate.hpp"
#include "chromasent/error.hpp"
#include "chromasent/store.hpp"

// JSON forms of the domain types, found by nlohmann::json through ADL.
namespace chromasent {

void to_json(Json& j, const RgbPoint& p);
void from_json(const Json& j, RgbPoint& p);
void to_json(Json& j, const PaletteEntry& e);
void from_json(const Json& j, PaletteEntry& e);
void to_json(Json& j, const MappedEntry& e);
void from_json(const Json& j, MappedEntry& e);
void to_json(Json& j, const MappedPalette& p);
void from_json(const Json& j, MappedPalette& p);
void to_json(Json& j, const EmotionScores& s);
void from_json(const Json& j, EmotionScores& s);
void to_json(Json& j, const SentimentScores& s);
void from_json(const Json& j, SentimentScores& s);
void to_json(Json& j, const SentimentTally& t);
void from_json(const Json& j, SentimentTally& t);
void to_json(Json& j, const Company& c);
void from_json(const Json& j, Company& c);
void to_json(Json& j, const Review& r);
void from_json(const Json& j, Review& r);
void to_json(Json& j, const ScoredReview& r);
void from_json(const Json& j, ScoredReview& r);
void to_json(Json& j, const CompanyProfile& p);
void from_json(const Json& j, CompanyProfile& p);
void to_json(Json& j, const EmotionPalette& p);
void from_json(const Json& j, EmotionPalette& p);
void to_json(Json& j, const RatingSummary& s);
void from_json(const Json& j, RatingSummary& s);

/// Converts a stored payload, turning schema mismatches into StoreError.
template <typename T>
T decode_payload(const Json& j, const std::string& context) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw StoreError(context + ": unexpected payload shape: " + e.what());
  } catch (const InputError& e) {
    throw StoreError(context + ": " + e.what());
  }
}

}  // namespace chromasent
