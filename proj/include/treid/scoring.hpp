#pragma once

#include <cstdint>
#include <optional>

#include "treid/model.hpp"

namespace treid {

enum class Metric { kEuclidean, kCosineDistance };

// Mean is the only pooling strategy built; the enum marks the extension
// point for other multi-shot reductions.
enum class Pooling { kMean };

// Deterministic multiplicative corruption of scores, keyed symmetrically by
// the two source tracks. Stands in for a weaker feature extractor in A/B
// comparison runs: same inputs, noisier distances.
struct ScoreNoise {
  std::uint64_t seed = 0;
  double factor_lo = 0.5;
  double factor_hi = 2.0;
};

struct Scorer {
  Metric metric = Metric::kEuclidean;
  Pooling pooling = Pooling::kMean;
  std::optional<ScoreNoise> noise;
};

// Mean feature vector over a track's frames.
AppearanceModel pool(const Track& track);

// Distance between two appearance models; smaller means more similar, and
// candidates are ranked ascending by it. Euclidean is the L2 norm of the
// difference; cosine distance is 1 - cos(angle), with zero-vector convention
// 0 when both are zero and 1 when exactly one is.
double score(const Scorer& scorer, const AppearanceModel& a, const AppearanceModel& b);

}  // namespace treid
