#include "treid/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace treid {

bool valid_timestamp(Timestamp t) { return std::isfinite(t) && t >= 0.0; }

Timestamp arrival_time(const Track& track, ArrivalMode mode) {
  return mode == ArrivalMode::kTrackEnd ? track.t_end : track.t_start;
}

void sort_events(std::vector<GalleryEvent>& events) {
  std::sort(events.begin(), events.end(),
            [](const GalleryEvent& a, const GalleryEvent& b) {
              if (a.arrival != b.arrival) return a.arrival < b.arrival;
              return a.track.track_id < b.track.track_id;
            });
}

bool events_sorted(const std::vector<GalleryEvent>& events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    const GalleryEvent& p = events[i - 1];
    const GalleryEvent& c = events[i];
    if (p.arrival > c.arrival) return false;
    if (p.arrival == c.arrival && p.track.track_id > c.track.track_id) return false;
  }
  return true;
}

std::optional<int> RankTrace::rank_at(Timestamp t) const {
  std::optional<int> value;
  for (const Breakpoint& bp : breakpoints) {
    if (bp.t > t) break;
    value = bp.rank;
  }
  return value;
}

double FlowDensityProfile::people_per_second(std::size_t bin) const {
  return static_cast<double>(counts.at(bin)) / bin_width;
}

std::vector<double> FlowDensityProfile::rates() const {
  std::vector<double> r(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) r[b] = people_per_second(b);
  return r;
}

std::int64_t FlowDensityProfile::event_count() const {
  std::int64_t n = 0;
  for (std::int64_t c : counts) n += c;
  return n;
}

int dataset_dim(const std::vector<GalleryEvent>& events, const ProbeSet& probes) {
  for (const GalleryEvent& e : events)
    if (!e.track.frames.empty()) return static_cast<int>(e.track.frames.front().size());
  for (const Probe& p : probes)
    if (!p.track.frames.empty()) return static_cast<int>(p.track.frames.front().size());
  return 0;
}

namespace {

bool frames_finite(const Track& track) {
  for (const FeatureVector& f : track.frames)
    for (double v : f)
      if (!std::isfinite(v)) return false;
  return true;
}

// Returns 0 if frames are empty or disagree on dimension.
int uniform_track_dim(const Track& track) {
  if (track.frames.empty()) return 0;
  const std::size_t dim = track.frames.front().size();
  if (dim == 0) return 0;
  for (const FeatureVector& f : track.frames)
    if (f.size() != dim) return 0;
  return static_cast<int>(dim);
}

void check_track(const Track& track, const std::string& label,
                 std::vector<std::string>* errors) {
  if (track.frames.empty())
    errors->push_back(label + " \"" + track.track_id + "\" has no frames");
  else if (uniform_track_dim(track) == 0)
    errors->push_back(label + " \"" + track.track_id +
                      "\" has frames of inconsistent dimension");
  if (!frames_finite(track))
    errors->push_back(label + " \"" + track.track_id + "\" has non-finite features");
  if (!valid_timestamp(track.t_start) || !std::isfinite(track.t_end))
    errors->push_back(label + " \"" + track.track_id + "\" has invalid timestamps");
  else if (track.t_start > track.t_end)
    errors->push_back(label + " \"" + track.track_id + "\" has t_start > t_end");
}

}  // namespace

ValidationReport validate_dataset(const std::vector<GalleryEvent>& events,
                                  const ProbeSet& probes) {
  ValidationReport report;

  if (events.empty()) report.warnings.push_back("empty stream");

  // Duplicate ids, collected as sets so the result is order-insensitive.
  std::unordered_map<std::string, int> track_id_count;
  for (const GalleryEvent& e : events) ++track_id_count[e.track.track_id];
  std::set<std::string> dup_tracks;
  for (const auto& [id, n] : track_id_count)
    if (n > 1) dup_tracks.insert(id);
  for (const std::string& id : dup_tracks)
    report.errors.push_back("duplicate track_id \"" + id + "\"");

  std::unordered_map<std::string, int> probe_id_count;
  for (const Probe& p : probes) ++probe_id_count[p.probe_id];
  std::set<std::string> dup_probes;
  for (const auto& [id, n] : probe_id_count)
    if (n > 1) dup_probes.insert(id);
  for (const std::string& id : dup_probes)
    report.errors.push_back("duplicate probe_id \"" + id + "\"");

  // Probe tracks must stay out of the gallery stream.
  std::set<std::string> overlap;
  for (const Probe& p : probes)
    if (track_id_count.count(p.track.track_id) > 0) overlap.insert(p.track.track_id);
  for (const std::string& id : overlap)
    report.errors.push_back("probe track \"" + id + "\" also appears in the gallery");

  // Per-track invariants and dataset-wide dimension agreement.
  const int dim = dataset_dim(events, probes);
  for (const GalleryEvent& e : events) {
    check_track(e.track, "track", &report.errors);
    const int d = uniform_track_dim(e.track);
    if (d != 0 && d != dim)
      report.errors.push_back("track \"" + e.track.track_id + "\" has dimension " +
                              std::to_string(d) + ", expected " + std::to_string(dim));
    if (!std::isfinite(e.arrival) || e.arrival < 0.0)
      report.errors.push_back("track \"" + e.track.track_id + "\" has invalid arrival");
    else if (e.arrival < e.track.t_start)
      report.errors.push_back("track \"" + e.track.track_id +
                              "\" arrives before its own t_start");
  }
  for (const Probe& p : probes) {
    check_track(p.track, "probe track", &report.errors);
    const int d = uniform_track_dim(p.track);
    if (d != 0 && d != dim)
      report.errors.push_back("probe \"" + p.probe_id + "\" has dimension " +
                              std::to_string(d) + ", expected " + std::to_string(dim));
  }

  // Out-of-order arrivals are legal input (the loader sorts) but worth a flag.
  // Only the arrival sequence is examined, so permuting equal-arrival events
  // cannot change the outcome.
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].arrival < events[i - 1].arrival) {
      report.warnings.push_back("events not in arrival order");
      break;
    }
  }

  // A probe whose identity never shows up in the gallery can never match.
  std::unordered_set<std::string> gallery_identities;
  for (const GalleryEvent& e : events)
    if (e.track.identity_id) gallery_identities.insert(*e.track.identity_id);
  for (const Probe& p : probes)
    if (gallery_identities.count(p.identity_id) == 0)
      report.warnings.push_back("probe " + p.probe_id + " never reappears");

  std::sort(report.errors.begin(), report.errors.end());
  std::sort(report.warnings.begin(), report.warnings.end());
  return report;
}

}  // namespace treid
