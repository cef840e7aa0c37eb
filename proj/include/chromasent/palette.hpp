#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chromasent/color.hpp"
#include "chromasent/image.hpp"

namespace chromasent {

/// Real-valued RGB point (cluster centroid).
struct RgbPoint {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend constexpr bool operator==(const RgbPoint&, const RgbPoint&) = default;
};

inline double squared_distance(const RgbPoint& p, RgbColor c) noexcept {
  const double dr = p.r - c.r, dg = p.g - c.g, db = p.b - c.b;
  return dr * dr + dg * dg + db * db;
}

inline RgbPoint to_point(RgbColor c) noexcept { return {double(c.r), double(c.g), double(c.b)}; }

struct PaletteEntry {
  RgbPoint centroid;
  double weight = 0.0;
};

/// Dominant colors of one image: 1..k entries whose weights sum to 1.
struct Palette {
  std::vector<PaletteEntry> entries;
};

struct MappedEntry {
  int color_id = 0;
  double weight = 0.0;

  friend bool operator==(const MappedEntry&, const MappedEntry&) = default;
};

/// Palette expressed as color-model ids, unique ids, weight descending.
struct MappedPalette {
  std::vector<MappedEntry> entries;

  friend bool operator==(const MappedPalette&, const MappedPalette&) = default;
};

enum class SeedingMode {
  /// First centroid uniform over pixels, then each pick proportional to squared distance.
  DistanceWeighted,
  /// k distinct pixel colors chosen uniformly at random.
  Uniform,
};

struct SeedResult {
  std::vector<RgbPoint> centroids;
  int requested_k = 0;
  /// min(requested_k, number of distinct pixel colors).
  int effective_k = 0;
};

/// Chooses initial centroids; fully determined by (pixel multiset, k, seed, mode).
SeedResult kmeans_init(std::span<const RgbColor> pixels, int k, std::uint64_t seed,
                       SeedingMode mode = SeedingMode::DistanceWeighted);

struct KMeansOptions {
  int k = 5;
  std::uint64_t seed = 42;
  /// Stop once no centroid moves by this much (RGB units) and assignments are stable.
  double tol = 1e-3;
  int max_iter = 100;
  SeedingMode seeding = SeedingMode::DistanceWeighted;
  /// Independent runs; the lowest objective wins.
  int restarts = 1;
};

struct ClusterResult {
  Palette palette;
  /// Within-cluster sum of squared RGB distances of the returned palette.
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  int effective_k = 0;
  /// Objective after every assignment step of the winning run.
  std::vector<double> objective_trace;
};

/// Lloyd's algorithm in RGB. Throws EmptyImageError for an empty pixel list.
ClusterResult kmeans_cluster(std::span<const RgbColor> pixels, const KMeansOptions& opts = {});

inline ClusterResult kmeans_cluster(const PixelSet& set, const KMeansOptions& opts = {}) {
  return kmeans_cluster(std::span<const RgbColor>(set.pixels), opts);
}

/// Rounds centroids, maps them onto the model and merges duplicate ids.
MappedPalette map_palette(const Palette& palette, const ColorModel& model);

}  // namespace chromasent
