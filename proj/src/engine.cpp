#include "treid/engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "treid/rank_index.hpp"

namespace treid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_preconditions(const std::vector<GalleryEvent>& events,
                         const ProbeSet& probes, const EngineConfig& config) {
  if (!events_sorted(events))
    throw std::invalid_argument("simulate: events not sorted by (arrival, track_id)");
  if (!valid_timestamp(config.horizon))
    throw std::invalid_argument("simulate: invalid horizon");
  if (config.retention_window && !(*config.retention_window > 0.0))
    throw std::invalid_argument("simulate: retention window must be > 0");
  const int dim = dataset_dim(events, probes);
  for (const Probe& p : probes)
    if (p.track.frames.empty() ||
        static_cast<int>(p.track.frames.front().size()) != dim)
      throw std::invalid_argument("simulate: probe \"" + p.probe_id +
                                  "\" dimension mismatch");
}

// Cached per-arrival state needed to undo an insertion when a retention
// window is active.
struct ActiveEntry {
  std::uint32_t ordinal = 0;
  Timestamp expiry = 0.0;
  std::vector<double> scores;  // one per probe
  std::vector<std::uint32_t> match_of;  // probe indexes this track truly matches
};

}  // namespace

std::vector<RankTrace> simulate(const std::vector<GalleryEvent>& events,
                                const ProbeSet& probes, const Scorer& scorer,
                                const EngineConfig& config, SimulateStats* stats) {
  check_preconditions(events, probes, config);

  const std::size_t n_probes = probes.size();
  const bool windowed = config.retention_window.has_value();

  std::vector<AppearanceModel> probe_models;
  probe_models.reserve(n_probes);
  for (const Probe& p : probes) probe_models.push_back(pool(p.track));

  std::vector<RankIndex> indexes;
  indexes.reserve(n_probes);
  for (std::size_t p = 0; p < n_probes; ++p) {
    indexes.emplace_back(mix64(0x72616E6B696478ULL + p));
    if (!windowed) indexes.back().reserve(events.size());
  }

  std::vector<std::vector<RankKey>> match_keys(n_probes);
  std::vector<std::optional<int>> last_value(n_probes);
  std::vector<RankTrace> traces(n_probes);
  for (std::size_t p = 0; p < n_probes; ++p) {
    traces[p].probe_id = probes[p].probe_id;
    traces[p].horizon = config.horizon;
  }

  std::vector<ActiveEntry> active;  // appended in arrival order; only windowed runs
  std::size_t expiry_head = 0;
  std::size_t i = 0;
  SimulateStats local{};

  while (true) {
    const double t_arrival =
        (i < events.size() && events[i].arrival <= config.horizon) ? events[i].arrival
                                                                   : kInf;
    const double t_expiry =
        (windowed && expiry_head < active.size()) ? active[expiry_head].expiry : kInf;
    const double t = std::min(t_arrival, t_expiry);
    if (t == kInf || t > config.horizon) break;

    // Apply every event at this timestamp before sampling any trace, so
    // transient orderings inside the batch are never observable.
    while (windowed && expiry_head < active.size() &&
           active[expiry_head].expiry == t) {
      const ActiveEntry& entry = active[expiry_head];
      for (std::size_t p = 0; p < n_probes; ++p)
        indexes[p].erase(RankKey{entry.scores[p], entry.ordinal});
      for (std::uint32_t p : entry.match_of) {
        auto& keys = match_keys[p];
        for (std::size_t k = 0; k < keys.size(); ++k) {
          if (keys[k].ordinal == entry.ordinal) {
            keys.erase(keys.begin() + static_cast<std::ptrdiff_t>(k));
            break;
          }
        }
      }
      // Entries are expired in arrival order, so the head just advances.
      active[expiry_head] = ActiveEntry{};  // release the score vector
      ++expiry_head;
    }

    while (i < events.size() && events[i].arrival == t) {
      const Track& track = events[i].track;
      const std::uint32_t ordinal = static_cast<std::uint32_t>(i);
      const AppearanceModel model = pool(track);

      ActiveEntry entry;
      if (windowed) {
        entry.ordinal = ordinal;
        entry.expiry = t + *config.retention_window;
        entry.scores.resize(n_probes);
      }
      for (std::size_t p = 0; p < n_probes; ++p) {
        const double s = score(scorer, probe_models[p], model);
        const RankKey key{s, ordinal};
        indexes[p].insert(key);
        if (track.identity_id && *track.identity_id == probes[p].identity_id) {
          match_keys[p].push_back(key);
          if (windowed) entry.match_of.push_back(static_cast<std::uint32_t>(p));
        }
        if (windowed) entry.scores[p] = s;
      }
      local.pairs_scored += n_probes;
      if (windowed) active.push_back(std::move(entry));
      ++local.events_processed;
      ++i;
    }

    for (std::size_t p = 0; p < n_probes; ++p) {
      std::optional<int> best;
      for (const RankKey& key : match_keys[p]) {
        const int r = indexes[p].rank_of(key);
        if (!best || r < *best) best = r;
      }
      if (best != last_value[p]) {
        traces[p].breakpoints.push_back({t, best});
        last_value[p] = best;
      }
    }
    ++local.timestamps_processed;
  }

  for (const RankIndex& idx : indexes) {
    local.index_nodes += idx.size();
    local.index_bytes += idx.allocated_bytes();
  }
  if (stats) *stats = local;
  return traces;
}

FinalRanks final_best_ranks(const std::vector<GalleryEvent>& events,
                            const ProbeSet& probes, const Scorer& scorer) {
  const std::size_t n_probes = probes.size();
  std::vector<AppearanceModel> probe_models;
  probe_models.reserve(n_probes);
  for (const Probe& p : probes) probe_models.push_back(pool(p.track));

  std::vector<RankIndex> indexes;
  indexes.reserve(n_probes);
  for (std::size_t p = 0; p < n_probes; ++p) {
    indexes.emplace_back(mix64(0x66696E616CULL + p));
    indexes.back().reserve(events.size());
  }
  std::vector<std::vector<RankKey>> match_keys(n_probes);

  for (std::size_t i = 0; i < events.size(); ++i) {
    const Track& track = events[i].track;
    const AppearanceModel model = pool(track);
    for (std::size_t p = 0; p < n_probes; ++p) {
      const RankKey key{score(scorer, probe_models[p], model),
                        static_cast<std::uint32_t>(i)};
      indexes[p].insert(key);
      if (track.identity_id && *track.identity_id == probes[p].identity_id)
        match_keys[p].push_back(key);
    }
  }

  FinalRanks out;
  for (std::size_t p = 0; p < n_probes; ++p) {
    if (match_keys[p].empty()) {
      out.excluded_probes.push_back(probes[p].probe_id);
      continue;
    }
    int best = std::numeric_limits<int>::max();
    for (const RankKey& key : match_keys[p])
      best = std::min(best, indexes[p].rank_of(key));
    out.best_rank.emplace_back(probes[p].probe_id, best);
  }
  return out;
}

}  // namespace treid
