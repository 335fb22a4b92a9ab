#include "treid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "treid/rng.hpp"

namespace treid {

namespace {

constexpr std::uint64_t kStreamCenters = 1;
constexpr std::uint64_t kStreamProbes = 2;
constexpr std::uint64_t kStreamReappearances = 3;
constexpr std::uint64_t kStreamDistractors = 4;

std::string padded(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

void check_config(const SynthConfig& c) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("generate: infeasible config: " + what);
  };
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) fail("horizon must be > 0");
  if (c.dim < 1) fail("dim must be >= 1");
  if (c.n_identities < 1) fail("n_identities must be >= 1");
  if (c.n_probes < 0 || c.n_probes > c.n_identities)
    fail("need 0 <= n_probes <= n_identities");
  if (c.reappearances_per_probe < 0) fail("reappearances_per_probe must be >= 0");
  if (!(c.sigma_within > 0.0) || !(c.sigma_between > 0.0))
    fail("spreads must be > 0");
  if (c.frames_min < 1 || c.frames_max < c.frames_min) fail("bad frames range");
  if (!(c.arrival_rate >= 0.0) || !std::isfinite(c.arrival_rate))
    fail("arrival_rate must be >= 0");
  bool any_rate = c.rate_schedule.empty() && c.arrival_rate > 0.0;
  for (std::size_t i = 0; i < c.rate_schedule.size(); ++i) {
    const RateSegment& seg = c.rate_schedule[i];
    if (!(seg.rate >= 0.0) || !std::isfinite(seg.rate)) fail("negative segment rate");
    if (seg.rate > 0.0) any_rate = true;
    if (i == 0 && seg.start != 0.0) fail("rate schedule must start at t=0");
    if (i > 0 && !(seg.start > c.rate_schedule[i - 1].start))
      fail("rate schedule starts must increase");
    if (!(seg.start < c.horizon)) fail("rate segment starts beyond horizon");
  }
  if (any_rate && c.n_identities == c.n_probes)
    fail("distractors need at least one non-probe identity");
}

FeatureVector gaussian_vector(SplitMix64& rng, int dim, double sigma) {
  FeatureVector v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.normal(0.0, sigma);
  return v;
}

std::vector<FeatureVector> noisy_frames(SplitMix64& rng, const FeatureVector& center,
                                        int n_frames, double sigma) {
  std::vector<FeatureVector> frames(static_cast<std::size_t>(n_frames));
  for (auto& f : frames) {
    f = center;
    for (double& x : f) x += rng.normal(0.0, sigma);
  }
  return frames;
}

}  // namespace

SynthDataset generate(const SynthConfig& config) {
  check_config(config);

  const SplitMix64 root(config.seed);
  SplitMix64 centers_rng = root.fork(kStreamCenters);
  SplitMix64 probe_rng = root.fork(kStreamProbes);
  SplitMix64 reapp_rng = root.fork(kStreamReappearances);
  SplitMix64 distractor_rng = root.fork(kStreamDistractors);

  std::vector<FeatureVector> centers(static_cast<std::size_t>(config.n_identities));
  for (auto& c : centers)
    c = gaussian_vector(centers_rng, config.dim, config.sigma_between);
  auto identity_name = [](int i) { return padded("id", i, 4); };

  SynthDataset out;

  // Probes: identities 0..n_probes-1, one reference track each at t=0.
  for (int p = 0; p < config.n_probes; ++p) {
    const int n_frames =
        config.frames_min + static_cast<int>(probe_rng.next_below(
                                static_cast<std::uint64_t>(config.frames_max - config.frames_min + 1)));
    Probe probe;
    probe.probe_id = padded("p", p, 4);
    probe.identity_id = identity_name(p);
    probe.track.track_id = probe.probe_id;
    probe.track.identity_id = probe.identity_id;
    probe.track.t_start = 0.0;
    probe.track.t_end = 0.0;
    probe.track.frames =
        noisy_frames(probe_rng, centers[static_cast<std::size_t>(p)], n_frames,
                     config.sigma_within);
    out.probes.push_back(std::move(probe));
  }

  // Known reappearances: uniform completion times, per-reappearance drift of
  // the identity center (different clothes, same person).
  for (int p = 0; p < config.n_probes; ++p) {
    for (int k = 0; k < config.reappearances_per_probe; ++k) {
      const double t_end = reapp_rng.uniform(0.0, config.horizon);
      const double duration = reapp_rng.uniform(2.0, 8.0);
      FeatureVector center = centers[static_cast<std::size_t>(p)];
      for (double& x : center) x += reapp_rng.normal(0.0, config.sigma_within);
      const int n_frames =
          config.frames_min + static_cast<int>(reapp_rng.next_below(
                                  static_cast<std::uint64_t>(config.frames_max - config.frames_min + 1)));
      Track track;
      track.track_id = padded("a", p, 4) + padded("-", k, 2);
      track.identity_id = identity_name(p);
      track.t_end = t_end;
      track.t_start = std::max(0.0, t_end - duration);
      track.frames = noisy_frames(reapp_rng, center, n_frames, config.sigma_within);
      out.events.push_back(
          GalleryEvent{arrival_time(track, ArrivalMode::kTrackEnd), std::move(track)});
    }
  }

  // Distractors: Poisson completion times from the rate schedule, identities
  // drawn from the non-probe pool.
  std::vector<RateSegment> schedule = config.rate_schedule;
  if (schedule.empty()) schedule.push_back(RateSegment{0.0, config.arrival_rate});
  const int pool = config.n_identities - config.n_probes;
  int serial = 0;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const double seg_end =
        s + 1 < schedule.size() ? schedule[s + 1].start : config.horizon;
    const double rate = schedule[s].rate;
    if (rate <= 0.0) continue;
    double t = schedule[s].start;
    while (true) {
      t += distractor_rng.exponential(rate);
      if (t >= seg_end) break;
      const int identity =
          config.n_probes +
          static_cast<int>(distractor_rng.next_below(static_cast<std::uint64_t>(pool)));
      const double duration = distractor_rng.uniform(2.0, 8.0);
      const int n_frames =
          config.frames_min + static_cast<int>(distractor_rng.next_below(
                                  static_cast<std::uint64_t>(config.frames_max - config.frames_min + 1)));
      Track track;
      track.track_id = padded("g", serial++, 6);
      track.identity_id = identity_name(identity);
      track.t_end = t;
      track.t_start = std::max(0.0, t - duration);
      track.frames = noisy_frames(distractor_rng,
                                  centers[static_cast<std::size_t>(identity)], n_frames,
                                  config.sigma_within);
      out.events.push_back(
          GalleryEvent{arrival_time(track, ArrivalMode::kTrackEnd), std::move(track)});
    }
  }

  sort_events(out.events);
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One gallery candidate as the oracle keeps it: scores frozen at arrival.
struct OracleCandidate {
  std::uint32_t ordinal = 0;
  Timestamp expiry = kInf;
  bool present = true;
  std::vector<double> scores;          // per probe
  std::vector<std::uint8_t> is_match;  // per probe
};

}  // namespace

std::vector<RankTrace> oracle_simulate(const std::vector<GalleryEvent>& events,
                                       const ProbeSet& probes, const Scorer& scorer,
                                       const EngineConfig& config) {
  if (!events_sorted(events))
    throw std::invalid_argument("oracle_simulate: events not sorted");
  if (!valid_timestamp(config.horizon))
    throw std::invalid_argument("oracle_simulate: invalid horizon");
  if (config.retention_window && !(*config.retention_window > 0.0))
    throw std::invalid_argument("oracle_simulate: retention window must be > 0");

  const std::size_t n_probes = probes.size();
  std::vector<AppearanceModel> probe_models;
  for (const Probe& p : probes) probe_models.push_back(pool(p.track));

  std::vector<RankTrace> traces(n_probes);
  std::vector<std::optional<int>> last_value(n_probes);
  for (std::size_t p = 0; p < n_probes; ++p) {
    traces[p].probe_id = probes[p].probe_id;
    traces[p].horizon = config.horizon;
  }

  std::vector<OracleCandidate> candidates;  // arrival order; expired ones flagged
  std::size_t expiry_head = 0;
  std::size_t i = 0;

  while (true) {
    const double t_arrival =
        (i < events.size() && events[i].arrival <= config.horizon) ? events[i].arrival
                                                                   : kInf;
    const double t_expiry =
        expiry_head < candidates.size() ? candidates[expiry_head].expiry : kInf;
    const double t = std::min(t_arrival, t_expiry);
    if (t == kInf || t > config.horizon) break;

    while (expiry_head < candidates.size() && candidates[expiry_head].expiry == t) {
      candidates[expiry_head].present = false;
      ++expiry_head;
    }

    while (i < events.size() && events[i].arrival == t) {
      const Track& track = events[i].track;
      const AppearanceModel model = pool(track);
      OracleCandidate cand;
      cand.ordinal = static_cast<std::uint32_t>(i);
      if (config.retention_window) cand.expiry = t + *config.retention_window;
      cand.scores.resize(n_probes);
      cand.is_match.resize(n_probes);
      for (std::size_t p = 0; p < n_probes; ++p) {
        cand.scores[p] = score(scorer, probe_models[p], model);
        cand.is_match[p] = track.identity_id &&
                           *track.identity_id == probes[p].identity_id;
      }
      candidates.push_back(std::move(cand));
      ++i;
    }

    // Rank everything still present from scratch, one full sort per probe.
    for (std::size_t p = 0; p < n_probes; ++p) {
      std::vector<std::pair<double, std::uint32_t>> order;
      order.reserve(candidates.size() - expiry_head);
      for (const OracleCandidate& cand : candidates)
        if (cand.present) order.emplace_back(cand.scores[p], cand.ordinal);
      std::sort(order.begin(), order.end());

      std::optional<int> best;
      for (const OracleCandidate& cand : candidates) {
        if (!cand.present || !cand.is_match[p]) continue;
        const auto it = std::lower_bound(
            order.begin(), order.end(), std::make_pair(cand.scores[p], cand.ordinal));
        const int rank = static_cast<int>(it - order.begin()) + 1;
        if (!best || rank < *best) best = rank;
      }
      if (best != last_value[p]) {
        traces[p].breakpoints.push_back({t, best});
        last_value[p] = best;
      }
    }
  }
  return traces;
}

}  // namespace treid
