#pragma once

#include <cstdint>
#include <vector>

#include "treid/engine.hpp"
#include "treid/model.hpp"
#include "treid/scoring.hpp"

namespace treid {

// Piecewise-constant distractor arrival rate; segment i runs from `start` to
// the next segment's start (or the horizon).
struct RateSegment {
  Timestamp start = 0.0;
  double rate = 0.0;  // arrivals per second
};

// Workload shape. Defaults mirror a small indoor-camera day: a handful of
// known actors, a few reappearances each, and a steady trickle of strangers.
struct SynthConfig {
  std::uint64_t seed = 1;
  double horizon = 3600.0;         // seconds
  double arrival_rate = 0.05;      // distractor arrivals per second (Poisson)
  std::vector<RateSegment> rate_schedule;  // optional override of arrival_rate
  int dim = 16;
  int n_identities = 64;           // feature centers, spread sigma_between
  int n_probes = 7;
  int reappearances_per_probe = 3;
  double sigma_within = 0.05;      // per-frame noise and reappearance drift
  double sigma_between = 1.0;      // identity separation
  int frames_min = 2;              // frames per track, inclusive range
  int frames_max = 6;
};

struct SynthDataset {
  std::vector<GalleryEvent> events;  // sorted by (arrival, track_id)
  ProbeSet probes;
  // Ground truth is carried by the identity labels on tracks and probes.
};

// Deterministic pure function of the config: identity centers are Gaussian
// with spread sigma_between, every track's frames are its (possibly
// perturbed) center plus per-frame noise sigma_within, distractors arrive as
// a Poisson process, and probe reappearances land uniformly over the horizon
// with a per-reappearance center perturbation. Throws std::invalid_argument
// on infeasible configs.
SynthDataset generate(const SynthConfig& config);

// Reference implementation of the replay semantics: reuses pooled models and
// cached scores, but recomputes every probe's ranking from scratch with a
// full sort after each event batch. Same contract as simulate(); exists so
// the incremental engine has an independent path to be checked against.
std::vector<RankTrace> oracle_simulate(const std::vector<GalleryEvent>& events,
                                       const ProbeSet& probes, const Scorer& scorer,
                                       const EngineConfig& config);

}  // namespace treid
