#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace treid {

// Seconds from stream start. Always finite and non-negative.
using Timestamp = double;

inline constexpr int kSchemaVersion = 1;

bool valid_timestamp(Timestamp t);

// One precomputed descriptor. Dimension is uniform across a dataset.
using FeatureVector = std::vector<double>;

// A time-stamped sequence of feature vectors for one detected appearance.
// identity_id carries ground truth and is absent for unlabeled distractors.
struct Track {
  std::string track_id;
  std::optional<std::string> identity_id;
  Timestamp t_start = 0.0;
  Timestamp t_end = 0.0;
  std::vector<FeatureVector> frames;  // non-empty, uniform dimension

  friend bool operator==(const Track&, const Track&) = default;
};

// Mean-pooled descriptor for a track.
struct AppearanceModel {
  FeatureVector feature;
  std::string source_track;

  friend bool operator==(const AppearanceModel&, const AppearanceModel&) = default;
};

// When a track is considered to enter the gallery: on completion (the
// multi-shot model needs all frames before scoring) or on first detection.
enum class ArrivalMode { kTrackEnd, kTrackStart };

Timestamp arrival_time(const Track& track, ArrivalMode mode);

// A track entering the gallery at `arrival`. Invariant: arrival >= t_start.
struct GalleryEvent {
  Timestamp arrival = 0.0;
  Track track;

  friend bool operator==(const GalleryEvent&, const GalleryEvent&) = default;
};

struct Probe {
  std::string probe_id;
  std::string identity_id;
  Track track;  // the fixed reference appearance; never part of the gallery

  friend bool operator==(const Probe&, const Probe&) = default;
};

using ProbeSet = std::vector<Probe>;

// Canonical replay order: (arrival, track_id), ties broken lexicographically.
void sort_events(std::vector<GalleryEvent>& events);
bool events_sorted(const std::vector<GalleryEvent>& events);

// A probe's best rank over time as a right-open step function. The value on
// [breakpoints[i].t, breakpoints[i+1].t) is breakpoints[i].rank; the last
// breakpoint extends to `horizon`. Before the first breakpoint no true match
// is present, so the value is absent (nullopt). Absent is an explicit state,
// never a sentinel rank.
struct RankTrace {
  struct Breakpoint {
    Timestamp t = 0.0;
    std::optional<int> rank;  // >= 1 when present

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  std::string probe_id;
  std::vector<Breakpoint> breakpoints;  // strictly increasing t
  Timestamp horizon = 0.0;

  // Value of the step function at time t (absent before the first breakpoint).
  std::optional<int> rank_at(Timestamp t) const;

  friend bool operator==(const RankTrace&, const RankTrace&) = default;
};

// Fraction of probes persisting in the top-r shortlist for at least d
// seconds, per rank level r and grid duration d.
struct RpcTable {
  std::vector<int> rank_levels;
  std::vector<double> duration_grid;          // seconds, ascending
  std::vector<std::vector<double>> values;    // [rank_level][duration]

  friend bool operator==(const RpcTable&, const RpcTable&) = default;
};

// Traditional cumulative match characteristic on the final gallery state.
// values[k-1] = fraction of probes whose best true match has final rank <= k.
struct CmcTable {
  int max_rank = 0;
  std::vector<double> values;

  friend bool operator==(const CmcTable&, const CmcTable&) = default;
};

// Gallery arrivals per second, binned. Bin b covers [b*w, (b+1)*w); an
// arrival exactly at the horizon is clamped into the last bin so the binned
// counts always add up to the event count.
struct FlowDensityProfile {
  double bin_width = 0.0;            // seconds, > 0
  std::vector<std::int64_t> counts;  // arrivals per bin

  double people_per_second(std::size_t bin) const;
  std::vector<double> rates() const;
  std::int64_t event_count() const;

  friend bool operator==(const FlowDensityProfile&, const FlowDensityProfile&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

// Report-only consistency scan: dimension mismatches, duplicate ids, tracks
// violating their own invariants, probes that never reappear, arrival order.
// Insensitive to permutations of equal-arrival events.
ValidationReport validate_dataset(const std::vector<GalleryEvent>& events,
                                  const ProbeSet& probes);

// Dimension of the first frame seen in events/probes; 0 when empty.
int dataset_dim(const std::vector<GalleryEvent>& events, const ProbeSet& probes);

}  // namespace treid
