#include "treid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace treid {

const PersistenceSummary::AtRank& PersistenceSummary::at(int rank_level) const {
  for (const AtRank& r : per_rank)
    if (r.rank_level == rank_level) return r;
  throw std::invalid_argument("PersistenceSummary: rank level " +
                              std::to_string(rank_level) + " not computed");
}

PersistenceSummary persistence(const RankTrace& trace,
                               const std::vector<int>& rank_levels) {
  PersistenceSummary summary;
  summary.probe_id = trace.probe_id;

  for (const int r : rank_levels) {
    PersistenceSummary::AtRank best{r, 0.0, false, false};
    double run_start = 0.0;
    bool in_run = false;

    auto close_run = [&](double end) {
      const double len = end - run_start;
      if (len > 0.0) {
        best.ever_reached = true;
        if (len > best.max_contiguous_duration) {
          best.max_contiguous_duration = len;
          best.censored = end == trace.horizon;
        }
      }
      in_run = false;
    };

    for (const RankTrace::Breakpoint& bp : trace.breakpoints) {
      if (bp.t >= trace.horizon) break;
      const bool qualifies = bp.rank.has_value() && *bp.rank <= r;
      if (qualifies && !in_run) {
        run_start = bp.t;
        in_run = true;
      } else if (!qualifies && in_run) {
        close_run(bp.t);
      }
    }
    if (in_run) close_run(trace.horizon);

    summary.per_rank.push_back(best);
  }
  return summary;
}

RpcTable compute_rpc(const std::vector<PersistenceSummary>& summaries,
                     const std::vector<int>& rank_levels,
                     const std::vector<double>& duration_grid) {
  if (summaries.empty())
    throw std::invalid_argument("compute_rpc: empty probe set");
  if (rank_levels.empty() || duration_grid.empty())
    throw std::invalid_argument("compute_rpc: empty grid");
  if (!std::is_sorted(duration_grid.begin(), duration_grid.end()))
    throw std::invalid_argument("compute_rpc: duration grid must be ascending");

  RpcTable table;
  table.rank_levels = rank_levels;
  table.duration_grid = duration_grid;
  table.values.assign(rank_levels.size(),
                      std::vector<double>(duration_grid.size(), 0.0));

  const double n = static_cast<double>(summaries.size());
  for (std::size_t ri = 0; ri < rank_levels.size(); ++ri) {
    for (std::size_t di = 0; di < duration_grid.size(); ++di) {
      const double d = duration_grid[di];
      int count = 0;
      for (const PersistenceSummary& s : summaries) {
        const auto& at = s.at(rank_levels[ri]);
        if (at.ever_reached && at.max_contiguous_duration >= d) ++count;
      }
      table.values[ri][di] = static_cast<double>(count) / n;
    }
  }
  return table;
}

CmcTable compute_cmc(const std::vector<int>& final_ranks, int max_rank) {
  if (max_rank < 1) throw std::invalid_argument("compute_cmc: max_rank must be >= 1");
  if (final_ranks.empty())
    throw std::invalid_argument("compute_cmc: no probes with true matches");
  for (int r : final_ranks)
    if (r < 1) throw std::invalid_argument("compute_cmc: ranks must be >= 1");

  CmcTable table;
  table.max_rank = max_rank;
  table.values.resize(static_cast<std::size_t>(max_rank));
  const double n = static_cast<double>(final_ranks.size());
  for (int k = 1; k <= max_rank; ++k) {
    int count = 0;
    for (int r : final_ranks)
      if (r <= k) ++count;
    table.values[static_cast<std::size_t>(k - 1)] = static_cast<double>(count) / n;
  }
  return table;
}

FlowDensityProfile flow_density(const std::vector<GalleryEvent>& events,
                                double bin_width, Timestamp horizon) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw std::invalid_argument("flow_density: bin_width must be > 0");
  if (!valid_timestamp(horizon))
    throw std::invalid_argument("flow_density: invalid horizon");

  std::size_t n_bins = static_cast<std::size_t>(std::ceil(horizon / bin_width));
  if (n_bins == 0 && !events.empty()) n_bins = 1;

  FlowDensityProfile profile;
  profile.bin_width = bin_width;
  profile.counts.assign(n_bins, 0);
  for (const GalleryEvent& e : events) {
    // Arrivals at (or past) the horizon land in the last bin so that the
    // binned counts always add up to the event count.
    const std::size_t bin =
        e.arrival >= horizon
            ? n_bins - 1
            : std::min(static_cast<std::size_t>(e.arrival / bin_width), n_bins - 1);
    ++profile.counts[bin];
  }
  return profile;
}

DominanceReport compare(const RpcTable& a, const RpcTable& b) {
  if (a.rank_levels != b.rank_levels || a.duration_grid != b.duration_grid)
    throw std::invalid_argument("compare: RPC tables have mismatched grids");

  DominanceReport report;
  report.identical = true;
  for (std::size_t ri = 0; ri < a.rank_levels.size(); ++ri) {
    DominanceReport::PerRank row;
    row.rank_level = a.rank_levels[ri];
    row.a_dominates = true;
    row.b_dominates = true;
    for (std::size_t di = 0; di < a.duration_grid.size(); ++di) {
      const double va = a.values[ri][di];
      const double vb = b.values[ri][di];
      if (va < vb) row.a_dominates = false;
      if (vb < va) row.b_dominates = false;
      if (va != vb) report.identical = false;
      const double gap = std::abs(va - vb);
      if (gap > row.max_abs_gap) {
        row.max_abs_gap = gap;
        row.gap_at_duration = a.duration_grid[di];
        row.gap_signed = va - vb;
      }
    }
    report.per_rank.push_back(row);
  }
  return report;
}

std::string render_dominance(const DominanceReport& report, std::string_view name_a,
                             std::string_view name_b) {
  std::ostringstream os;
  if (report.identical) {
    os << "no strict dominance; curves identical\n";
    return os.str();
  }
  for (const auto& row : report.per_rank) {
    os << "r=" << row.rank_level << ": ";
    if (row.a_dominates && row.b_dominates) {
      os << "curves identical";
    } else if (row.a_dominates) {
      os << name_a << " dominates " << name_b;
    } else if (row.b_dominates) {
      os << name_b << " dominates " << name_a;
    } else {
      os << "no dominance either way";
    }
    if (row.max_abs_gap > 0.0)
      os << " (max gap " << row.max_abs_gap << " at d=" << row.gap_at_duration
         << "s, " << name_a << "-" << name_b << " = " << row.gap_signed << ")";
    os << "\n";
  }
  return os.str();
}

std::vector<double> log_duration_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_duration_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int k = 0; k < n; ++k)
    grid[static_cast<std::size_t>(k)] =
        std::exp(log_lo + (log_hi - log_lo) * k / (n - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace treid
