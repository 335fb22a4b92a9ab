#include "treid/scoring.hpp"

#include <cmath>
#include <stdexcept>

#include "treid/rng.hpp"

namespace treid {

AppearanceModel pool(const Track& track) {
  if (track.frames.empty())
    throw std::invalid_argument("pool: track \"" + track.track_id + "\" has no frames");
  const std::size_t dim = track.frames.front().size();
  FeatureVector mean(dim, 0.0);
  for (const FeatureVector& frame : track.frames) {
    if (frame.size() != dim)
      throw std::invalid_argument("pool: track \"" + track.track_id +
                                  "\" has frames of inconsistent dimension");
    for (std::size_t j = 0; j < dim; ++j) mean[j] += frame[j];
  }
  const double inv_n = 1.0 / static_cast<double>(track.frames.size());
  for (double& v : mean) v *= inv_n;
  return AppearanceModel{std::move(mean), track.track_id};
}

namespace {

double euclidean(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double cosine_distance(const FeatureVector& a, const FeatureVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dot += a[j] * b[j];
    na += a[j] * a[j];
    nb += b[j] * b[j];
  }
  if (na == 0.0 && nb == 0.0) return 0.0;
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  // Rounding can push |c| a hair past 1; clamp so the distance stays >= 0.
  return 1.0 - std::min(1.0, std::max(-1.0, c));
}

double noise_factor(const ScoreNoise& noise, const std::string& track_a,
                    const std::string& track_b) {
  const std::uint64_t ha = fnv1a64(track_a);
  const std::uint64_t hb = fnv1a64(track_b);
  // Symmetric combination keeps score(a, b) == score(b, a).
  const std::uint64_t k = mix64(mix64(noise.seed ^ (ha + hb)) + (ha ^ hb));
  const double u = static_cast<double>(k >> 11) * 0x1.0p-53;
  return noise.factor_lo + (noise.factor_hi - noise.factor_lo) * u;
}

}  // namespace

double score(const Scorer& scorer, const AppearanceModel& a, const AppearanceModel& b) {
  if (a.feature.size() != b.feature.size())
    throw std::invalid_argument("score: dimension mismatch (" +
                                std::to_string(a.feature.size()) + " vs " +
                                std::to_string(b.feature.size()) + ")");
  double s = scorer.metric == Metric::kEuclidean
                 ? euclidean(a.feature, b.feature)
                 : cosine_distance(a.feature, b.feature);
  if (scorer.noise) s *= noise_factor(*scorer.noise, a.source_track, b.source_track);
  return s;
}

}  // namespace treid
