#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "treid/model.hpp"

namespace treid {

// Longest unbroken stay in the top-r shortlist, per requested rank level.
// An interval still open at the horizon counts at its observed length and is
// flagged censored. ever_reached distinguishes "never made the shortlist"
// from a zero-length clip at the horizon.
struct PersistenceSummary {
  struct AtRank {
    int rank_level = 0;
    double max_contiguous_duration = 0.0;  // seconds; 0 if never reached
    bool censored = false;                 // the reported interval ran to horizon
    bool ever_reached = false;

    friend bool operator==(const AtRank&, const AtRank&) = default;
  };

  std::string probe_id;
  std::vector<AtRank> per_rank;  // same order as the requested rank levels

  const AtRank& at(int rank_level) const;

  friend bool operator==(const PersistenceSummary&, const PersistenceSummary&) = default;
};

PersistenceSummary persistence(const RankTrace& trace,
                               const std::vector<int>& rank_levels);

// RPC(r, d) = fraction of probes whose longest contiguous stay at rank <= r
// lasted at least d seconds; at d = 0 it counts the probes that ever reached
// rank <= r. The denominator is the number of probes.
RpcTable compute_rpc(const std::vector<PersistenceSummary>& summaries,
                     const std::vector<int>& rank_levels,
                     const std::vector<double>& duration_grid);

// final_ranks holds each included probe's best true-match rank in the final
// gallery (see engine::final_best_ranks).
CmcTable compute_cmc(const std::vector<int>& final_ranks, int max_rank);

FlowDensityProfile flow_density(const std::vector<GalleryEvent>& events,
                                double bin_width, Timestamp horizon);

// Cell-by-cell comparison of two RPC tables on identical grids.
struct DominanceReport {
  struct PerRank {
    int rank_level = 0;
    bool a_dominates = false;  // A >= B at every grid duration
    bool b_dominates = false;
    double max_abs_gap = 0.0;
    double gap_at_duration = 0.0;  // where the largest |A-B| occurs (first hit)
    double gap_signed = 0.0;       // A-B at that cell
  };
  std::vector<PerRank> per_rank;
  bool identical = false;
};

DominanceReport compare(const RpcTable& a, const RpcTable& b);

std::string render_dominance(const DominanceReport& report, std::string_view name_a,
                             std::string_view name_b);

// n log-spaced durations from lo to hi inclusive (lo > 0, hi > lo, n >= 2).
std::vector<double> log_duration_grid(double lo, double hi, int n);

}  // namespace treid
