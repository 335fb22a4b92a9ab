#pragma once

// Small builders and fixtures shared by the test binaries.

#include <unistd.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "treid/model.hpp"
#include "treid/rng.hpp"

namespace treid::test {

inline Track make_track(std::string id, std::optional<std::string> identity,
                        double t_start, double t_end,
                        std::vector<FeatureVector> frames) {
  Track t;
  t.track_id = std::move(id);
  t.identity_id = std::move(identity);
  t.t_start = t_start;
  t.t_end = t_end;
  t.frames = std::move(frames);
  return t;
}

// A single-frame track whose Euclidean distance from the origin probe is
// exactly `distance`; handy for hand-built rank scenarios.
inline Track track_at_distance(std::string id, std::optional<std::string> identity,
                               double t, double distance, int dim = 4) {
  FeatureVector frame(static_cast<std::size_t>(dim), 0.0);
  frame[0] = distance;
  return make_track(std::move(id), std::move(identity), t, t, {frame});
}

inline GalleryEvent event_for(Track track, ArrivalMode mode = ArrivalMode::kTrackEnd) {
  const Timestamp arrival = arrival_time(track, mode);
  return GalleryEvent{arrival, std::move(track)};
}

inline Probe origin_probe(std::string probe_id, std::string identity, int dim = 4) {
  Probe p;
  p.probe_id = probe_id;
  p.identity_id = identity;
  p.track = make_track(probe_id, identity, 0.0, 0.0,
                       {FeatureVector(static_cast<std::size_t>(dim), 0.0)});
  return p;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("treid_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace treid::test
