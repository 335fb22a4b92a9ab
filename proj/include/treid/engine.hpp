#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treid/model.hpp"
#include "treid/scoring.hpp"

namespace treid {

struct EngineConfig {
  // Tracks leave all rank indexes at arrival + retention_window seconds;
  // absent means candidates are kept forever (the default behavior).
  std::optional<double> retention_window;
  // How arrivals were stamped when the events were built; recorded in run
  // manifests. The engine itself trusts GalleryEvent::arrival.
  ArrivalMode arrival_mode = ArrivalMode::kTrackEnd;
  // End of observation. Events after it are ignored; open persistence
  // intervals are censored here.
  Timestamp horizon = 0.0;
};

struct SimulateStats {
  std::size_t events_processed = 0;
  std::size_t timestamps_processed = 0;
  std::size_t pairs_scored = 0;
  std::size_t index_nodes = 0;  // keys present across all probe indexes at end
  std::size_t index_bytes = 0;  // node storage across all probe indexes
};

// Replays the gallery stream in time order, maintaining every probe's full
// ranking incrementally, and emits one best-rank trace per probe.
//
// At each arrival the new track is pooled once, scored once against every
// probe (scores are cached in the index keys; expiry reuses them), and
// inserted into every probe's rank index. A gallery track is a true match
// for a probe iff their identity ids are equal. After all events at a
// timestamp are applied, each probe's best rank (minimum rank over its
// present true matches, absent if none) is sampled, and a breakpoint is
// recorded exactly when the value changed.
//
// Preconditions: events sorted by (arrival, track_id), dimensions uniform,
// probe tracks absent from the stream. Violations throw std::invalid_argument.
std::vector<RankTrace> simulate(const std::vector<GalleryEvent>& events,
                                const ProbeSet& probes, const Scorer& scorer,
                                const EngineConfig& config,
                                SimulateStats* stats = nullptr);

struct FinalRanks {
  // (probe_id, best true-match rank) for probes with at least one true match
  // in the complete final gallery, in probe order.
  std::vector<std::pair<std::string, int>> best_rank;
  // Probes with no true match; excluded from CMC and reported to the caller.
  std::vector<std::string> excluded_probes;
};

// One-shot ranking of the complete final gallery (every event, no retention
// window); the basis for the traditional CMC curve.
FinalRanks final_best_ranks(const std::vector<GalleryEvent>& events,
                            const ProbeSet& probes, const Scorer& scorer);

}  // namespace treid
