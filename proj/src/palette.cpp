#include "chromasent/palette.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include "chromasent/error.hpp"

namespace chromasent {

namespace {

struct Bin {
  RgbColor color;
  std::int64_t count = 0;
};

// Distinct colors with multiplicities, ascending by packed value. Working on the
// histogram makes every downstream step independent of pixel order.
std::vector<Bin> histogram(std::span<const RgbColor> pixels) {
  std::vector<std::uint32_t> packed;
  packed.reserve(pixels.size());
  for (auto c : pixels) packed.push_back(c.packed());
  std::sort(packed.begin(), packed.end());
  std::vector<Bin> bins;
  for (std::size_t i = 0; i < packed.size();) {
    std::size_t j = i;
    while (j < packed.size() && packed[j] == packed[i]) ++j;
    bins.push_back({RgbColor::unpack(packed[i]), static_cast<std::int64_t>(j - i)});
    i = j;
  }
  return bins;
}

// mt19937_64 output is fully specified; the standard distributions are not, so
// draws are derived from raw engine output to keep results portable.
double uniform01(std::mt19937_64& eng) { return double(eng() >> 11) * 0x1.0p-53; }

std::size_t pick_weighted(std::span<const double> weights, double total, std::mt19937_64& eng) {
  const double target = uniform01(eng) * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cum += weights[i];
    last_positive = i;
    if (target < cum) return i;
  }
  return last_positive;
}

SeedResult seed_from_bins(std::span<const Bin> bins, int k, SeedingMode mode,
                          std::mt19937_64& eng) {
  SeedResult out;
  out.requested_k = k;
  out.effective_k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), bins.size()));
  const auto n = bins.size();

  if (mode == SeedingMode::Uniform) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (int c = 0; c < out.effective_k; ++c) {
      const auto remaining = n - static_cast<std::size_t>(c);
      auto j = static_cast<std::size_t>(c) +
               std::min(remaining - 1, static_cast<std::size_t>(uniform01(eng) * double(remaining)));
      std::swap(idx[static_cast<std::size_t>(c)], idx[j]);
      out.centroids.push_back(to_point(bins[idx[static_cast<std::size_t>(c)]].color));
    }
    return out;
  }

  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = double(bins[i].count);
    total += weights[i];
  }
  std::size_t chosen = pick_weighted(weights, total, eng);
  out.centroids.push_back(to_point(bins[chosen].color));

  std::vector<double> nearest_d2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(out.centroids.size()) < out.effective_k) {
    total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest_d2[i] = std::min(nearest_d2[i], squared_distance(out.centroids.back(), bins[i].color));
      weights[i] = nearest_d2[i] * double(bins[i].count);
      total += weights[i];
    }
    if (total <= 0.0) break;
    chosen = pick_weighted(weights, total, eng);
    out.centroids.push_back(to_point(bins[chosen].color));
  }
  return out;
}

struct Assignment {
  std::vector<int> labels;
  std::vector<std::int64_t> counts;
  std::vector<std::array<std::int64_t, 3>> sums;
  double objective = 0.0;
};

Assignment assign(std::span<const Bin> bins, std::span<const RgbPoint> centroids) {
  Assignment a;
  const auto k = centroids.size();
  a.labels.resize(bins.size());
  a.counts.assign(k, 0);
  a.sums.assign(k, {0, 0, 0});
  for (std::size_t i = 0; i < bins.size(); ++i) {
    std::size_t best = 0;
    double best_d = squared_distance(centroids[0], bins[i].color);
    for (std::size_t c = 1; c < k; ++c) {
      const double d = squared_distance(centroids[c], bins[i].color);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    a.labels[i] = static_cast<int>(best);
    a.counts[best] += bins[i].count;
    a.sums[best][0] += bins[i].count * bins[i].color.r;
    a.sums[best][1] += bins[i].count * bins[i].color.g;
    a.sums[best][2] += bins[i].count * bins[i].color.b;
    a.objective += double(bins[i].count) * best_d;
  }
  return a;
}

struct RunResult {
  std::vector<RgbPoint> centroids;
  Assignment assignment;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

RunResult lloyd(std::span<const Bin> bins, std::vector<RgbPoint> centroids,
                const KMeansOptions& opts) {
  RunResult run;
  run.assignment = assign(bins, centroids);
  run.trace.push_back(run.assignment.objective);

  for (int it = 1; it <= opts.max_iter; ++it) {
    const Assignment& cur = run.assignment;
    std::vector<RgbPoint> next(centroids.size());
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (cur.counts[c] == 0) {
        empty.push_back(c);
        next[c] = centroids[c];
        continue;
      }
      const double n = double(cur.counts[c]);
      next[c] = {double(cur.sums[c][0]) / n, double(cur.sums[c][1]) / n,
                 double(cur.sums[c][2]) / n};
    }
    if (!empty.empty()) {
      // Re-seed each empty cluster at the pixel farthest from its own centroid.
      std::vector<double> d2(bins.size());
      for (std::size_t i = 0; i < bins.size(); ++i) {
        d2[i] = squared_distance(next[static_cast<std::size_t>(cur.labels[i])], bins[i].color);
      }
      for (auto c : empty) {
        const auto far = static_cast<std::size_t>(
            std::max_element(d2.begin(), d2.end()) - d2.begin());
        next[c] = to_point(bins[far].color);
        d2[far] = -1.0;
      }
    }

    double displacement = 0.0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double dr = next[c].r - centroids[c].r;
      const double dg = next[c].g - centroids[c].g;
      const double db = next[c].b - centroids[c].b;
      displacement = std::max(displacement, std::sqrt(dr * dr + dg * dg + db * db));
    }
    centroids = std::move(next);

    Assignment fresh = assign(bins, centroids);
    const bool stable = empty.empty() && fresh.labels == cur.labels;
    run.trace.push_back(fresh.objective);
    run.assignment = std::move(fresh);
    run.iterations = it;
    if (displacement < opts.tol && stable) {
      run.converged = true;
      break;
    }
  }
  run.centroids = std::move(centroids);
  return run;
}

// One Hartigan sweep set over a Lloyd fixed point: moves a bin to another cluster whenever that
// lowers the objective once both means are updated. Returns the new means if anything moved.
std::optional<std::vector<RgbPoint>> hartigan_moves(std::span<const Bin> bins, const Assignment& start,
                                                    std::size_t k, int max_sweeps) {
  std::vector<int> labels = start.labels;
  std::vector<std::int64_t> counts = start.counts;
  std::vector<std::array<std::int64_t, 3>> sums = start.sums;
  auto mean_d2 = [&](std::size_t c, const RgbColor& x) {
    const double n = double(counts[c]);
    const double dr = double(sums[c][0]) / n - x.r, dg = double(sums[c][1]) / n - x.g,
                 db = double(sums[c][2]) / n - x.b;
    return dr * dr + dg * dg + db * db;
  };
  bool moved_any = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const auto a = static_cast<std::size_t>(labels[i]);
      const double w = double(bins[i].count);
      if (counts[a] == bins[i].count) continue;
      const double na = double(counts[a]);
      const double remove_gain = w * na / (na - w) * mean_d2(a, bins[i].color);
      std::size_t best = a;
      double best_cost = remove_gain;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = double(counts[b]);
        const double add_cost = nb == 0.0 ? 0.0 : w * nb / (nb + w) * mean_d2(b, bins[i].color);
        if (add_cost < best_cost) {
          best_cost = add_cost;
          best = b;
        }
      }
      // Require a clear gain so rounding cannot cycle.
      if (best == a || best_cost >= remove_gain * (1.0 - 1e-12)) continue;
      const auto& x = bins[i].color;
      counts[a] -= bins[i].count;
      counts[best] += bins[i].count;
      const std::int64_t cx[3] = {x.r, x.g, x.b};
      for (int ch = 0; ch < 3; ++ch) {
        sums[a][ch] -= bins[i].count * cx[ch];
        sums[best][ch] += bins[i].count * cx[ch];
      }
      labels[i] = static_cast<int>(best);
      moved = moved_any = true;
    }
    if (!moved) break;
  }
  if (!moved_any) return std::nullopt;
  std::vector<RgbPoint> means(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    const double n = double(counts[c]);
    means[c] = {double(sums[c][0]) / n, double(sums[c][1]) / n, double(sums[c][2]) / n};
  }
  return means;
}

// Lloyd to convergence, then Hartigan transfers; repeats while the transfers improve the partition.
// Every Hartigan-stable partition is also a Lloyd fixed point.
RunResult refine(std::span<const Bin> bins, std::vector<RgbPoint> seeds, const KMeansOptions& opts) {
  RunResult run = lloyd(bins, std::move(seeds), opts);
  int budget = opts.max_iter - run.iterations;
  while (run.converged && budget > 0) {
    auto means = hartigan_moves(bins, run.assignment, run.centroids.size(), budget);
    if (!means) break;
    KMeansOptions rest = opts;
    rest.max_iter = budget;
    RunResult next = lloyd(bins, std::move(*means), rest);
    budget -= std::max(1, next.iterations);
    next.iterations += run.iterations;
    run.trace.insert(run.trace.end(), next.trace.begin(), next.trace.end());
    next.trace = std::move(run.trace);
    run = std::move(next);
  }
  return run;
}

}  // namespace

SeedResult kmeans_init(std::span<const RgbColor> pixels, int k, std::uint64_t seed,
                       SeedingMode mode) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (pixels.empty()) throw EmptyImageError("cannot seed k-means on an empty pixel set");
  const auto bins = histogram(pixels);
  std::mt19937_64 eng(seed);
  return seed_from_bins(bins, k, mode, eng);
}

ClusterResult kmeans_cluster(std::span<const RgbColor> pixels, const KMeansOptions& opts) {
  if (opts.k < 1) throw ConfigError("k must be at least 1");
  if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
  if (opts.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (opts.restarts < 1) throw ConfigError("restarts must be at least 1");
  if (pixels.empty()) throw EmptyImageError("cannot cluster an empty pixel set");

  const auto bins = histogram(pixels);
  std::mt19937_64 eng(opts.seed);

  std::optional<RunResult> best;
  int effective_k = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    SeedResult seeds = seed_from_bins(bins, opts.k, opts.seeding, eng);
    effective_k = seeds.effective_k;
    RunResult run = refine(bins, std::move(seeds.centroids), opts);
    if (!best || run.assignment.objective < best->assignment.objective) best = std::move(run);
  }

  ClusterResult out;
  out.objective = best->assignment.objective;
  out.iterations = best->iterations;
  out.converged = best->converged;
  out.effective_k = effective_k;
  out.objective_trace = std::move(best->trace);

  const double total = double(pixels.size());
  for (std::size_t c = 0; c < best->centroids.size(); ++c) {
    const auto count = best->assignment.counts[c];
    if (count == 0) continue;
    RgbPoint p = best->centroids[c];
    p.r = std::clamp(p.r, 0.0, 255.0);
    p.g = std::clamp(p.g, 0.0, 255.0);
    p.b = std::clamp(p.b, 0.0, 255.0);
    out.palette.entries.push_back({p, double(count) / total});
  }
  std::sort(out.palette.entries.begin(), out.palette.entries.end(),
            [](const PaletteEntry& x, const PaletteEntry& y) {
              if (x.weight != y.weight) return x.weight > y.weight;
              if (x.centroid.r != y.centroid.r) return x.centroid.r < y.centroid.r;
              if (x.centroid.g != y.centroid.g) return x.centroid.g < y.centroid.g;
              return x.centroid.b < y.centroid.b;
            });
  return out;
}

MappedPalette map_palette(const Palette& palette, const ColorModel& model) {
  std::map<int, double> merged;
  for (const auto& e : palette.entries) {
    auto channel = [](double v) { return std::clamp(std::lround(v), 0L, 255L); };
    const RgbColor c = RgbColor::from_ints(channel(e.centroid.r), channel(e.centroid.g),
                                           channel(e.centroid.b));
    merged[model.nearest(c)] += e.weight;
  }
  MappedPalette out;
  for (const auto& [id, w] : merged) out.entries.push_back({id, w});
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const MappedEntry& x, const MappedEntry& y) { return x.weight > y.weight; });
  return out;
}

}  // namespace chromasent
