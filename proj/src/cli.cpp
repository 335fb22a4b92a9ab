#include "treid/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treid/engine.hpp"
#include "treid/ingest.hpp"
#include "treid/metrics.hpp"
#include "treid/model.hpp"
#include "treid/scoring.hpp"
#include "treid/svg_plot.hpp"
#include "treid/synth.hpp"

namespace treid {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::map<std::string, ArrivalMode> kArrivalModes{
    {"end", ArrivalMode::kTrackEnd}, {"start", ArrivalMode::kTrackStart}};
const std::map<std::string, Metric> kMetrics{
    {"euclidean", Metric::kEuclidean}, {"cosine", Metric::kCosineDistance}};

std::optional<double> parse_retention(const std::string& text) {
  if (text == "inf" || text == "infinite") return std::nullopt;
  double seconds = 0.0;
  try {
    seconds = std::stod(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad --retention value \"" + text + "\"");
  }
  if (!(seconds > 0.0))
    throw std::invalid_argument("--retention must be positive or \"inf\"");
  return seconds;
}

std::vector<int> parse_ranks(const std::string& text) {
  std::vector<int> ranks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int r = std::stoi(item);
    if (r < 1) throw std::invalid_argument("--ranks entries must be >= 1");
    ranks.push_back(r);
  }
  if (ranks.empty()) throw std::invalid_argument("--ranks must not be empty");
  return ranks;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  if (grid.empty()) throw std::invalid_argument("--grid must not be empty");
  return grid;
}

// "lo:hi:n" with hi allowed to be the literal "horizon".
struct LogGridSpec {
  double lo = 1.0;
  std::optional<double> hi;  // nullopt = use the horizon
  int points = 60;
};

LogGridSpec parse_log_grid(const std::string& text) {
  std::stringstream ss(text);
  std::string lo, hi, n;
  if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') ||
      !std::getline(ss, n))
    throw std::invalid_argument("--grid-log expects lo:hi:n");
  LogGridSpec spec;
  spec.lo = std::stod(lo);
  if (hi != "horizon") spec.hi = std::stod(hi);
  spec.points = std::stoi(n);
  return spec;
}

std::pair<int, int> parse_frames_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--frames expects min:max");
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

std::vector<RateSegment> parse_rate_schedule(const std::string& text) {
  std::vector<RateSegment> schedule;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--rate-schedule expects t:rate,t:rate,...");
    schedule.push_back(RateSegment{std::stod(item.substr(0, colon)),
                                   std::stod(item.substr(colon + 1))});
  }
  return schedule;
}

std::pair<double, double> parse_noise_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--score-noise-range expects lo:hi");
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

ordered_json scorer_flags(const Scorer& scorer) {
  ordered_json j;
  j["metric"] = scorer.metric == Metric::kEuclidean ? "euclidean" : "cosine";
  if (scorer.noise) {
    j["score_noise_seed"] = scorer.noise->seed;
    j["score_noise_lo"] = scorer.noise->factor_lo;
    j["score_noise_hi"] = scorer.noise->factor_hi;
  }
  return j;
}

void write_run_manifest(const fs::path& out_dir, const std::string& subcommand,
                        const ordered_json& flags,
                        const std::vector<fs::path>& inputs,
                        const std::vector<std::string>& outputs) {
  ordered_json manifest;
  manifest["tool"] = "treid";
  manifest["version"] = kToolVersion;
  manifest["subcommand"] = subcommand;
  manifest["flags"] = flags;
  // Inputs are pinned by content digest; basenames keep the manifest
  // byte-stable when the same run is laid out under a different directory.
  ordered_json digests = ordered_json::array();
  for (const fs::path& p : inputs)
    digests.push_back({{"file", p.filename().string()}, {"digest", file_digest(p)}});
  manifest["inputs"] = std::move(digests);
  manifest["outputs"] = outputs;

  std::ofstream out(out_dir / "run-manifest.json", std::ios::binary);
  if (!out.is_open())
    throw IoError("cannot write " + (out_dir / "run-manifest.json").string());
  out << manifest.dump(2) << '\n';
}

// The manifest written next to a trace file records the horizon it was
// simulated with; rpc picks it up when --horizon is not given.
std::optional<double> sibling_manifest_horizon(const fs::path& traces_path) {
  const fs::path manifest_path = traces_path.parent_path() / "run-manifest.json";
  std::ifstream in(manifest_path);
  if (!in.is_open()) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.contains("flags") && j["flags"].contains("horizon"))
      return j["flags"]["horizon"].get<double>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

void print_report(const ValidationReport& report, std::ostream& out) {
  for (const std::string& e : report.errors) out << "error: " << e << "\n";
  for (const std::string& w : report.warnings) out << "warning: " << w << "\n";
}

struct DatasetArgs {
  std::string gallery;
  std::string probes;
  std::string arrival_mode = "end";

  void attach(CLI::App* cmd, bool need_probes = true) {
    cmd->add_option("--gallery", gallery, "gallery stream (*.gallery.jsonl)")
        ->required();
    if (need_probes)
      cmd->add_option("--probes", probes, "probe set (*.probes.jsonl)")->required();
    cmd->add_option("--arrival-mode", arrival_mode,
                    "when a track enters the gallery: end|start")
        ->check(CLI::IsMember({"end", "start"}));
  }

  ReadOptions read_options() const { return ReadOptions{kArrivalModes.at(arrival_mode)}; }
};

struct ScorerArgs {
  std::string metric = "euclidean";
  std::optional<std::uint64_t> noise_seed;
  std::string noise_range = "0.5:2";

  void attach(CLI::App* cmd) {
    cmd->add_option("--scorer", metric, "distance metric: euclidean|cosine")
        ->check(CLI::IsMember({"euclidean", "cosine"}));
    cmd->add_option("--score-noise-seed", noise_seed,
                    "corrupt scores with seeded multiplicative noise");
    cmd->add_option("--score-noise-range", noise_range,
                    "noise factor range lo:hi (default 0.5:2)");
  }

  Scorer scorer() const {
    Scorer s;
    s.metric = kMetrics.at(metric);
    if (noise_seed) {
      const auto [lo, hi] = parse_noise_range(noise_range);
      s.noise = ScoreNoise{*noise_seed, lo, hi};
    }
    return s;
  }
};

int cmd_validate(const DatasetArgs& dataset, const std::string& out_dir,
                 std::ostream& out) {
  const GalleryData gallery = read_gallery_stream(dataset.gallery, dataset.read_options());
  const ProbeSet probes = read_probes(dataset.probes, gallery.manifest.dim);
  const ValidationReport report = validate_dataset(gallery.events, probes);
  print_report(report, out);
  out << (report.ok() ? "ok" : "invalid") << ": " << gallery.events.size()
      << " gallery tracks, " << probes.size() << " probes\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    ordered_json flags;
    flags["arrival_mode"] = dataset.arrival_mode;
    write_run_manifest(out_dir, "validate", flags, {dataset.gallery, dataset.probes},
                       {});
  }
  return report.ok() ? 0 : 1;
}

int cmd_simulate(const DatasetArgs& dataset, const ScorerArgs& scorer_args,
                 const std::string& retention, std::optional<double> horizon,
                 const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const GalleryData gallery = read_gallery_stream(dataset.gallery, dataset.read_options());
  const ProbeSet probes = read_probes(dataset.probes, gallery.manifest.dim);

  const ValidationReport report = validate_dataset(gallery.events, probes);
  if (!report.ok()) {
    print_report(report, err);
    return 1;
  }

  EngineConfig config;
  config.retention_window = parse_retention(retention);
  config.arrival_mode = kArrivalModes.at(dataset.arrival_mode);
  config.horizon = horizon.value_or(gallery.manifest.horizon);

  const Scorer scorer = scorer_args.scorer();
  const std::vector<RankTrace> traces =
      simulate(gallery.events, probes, scorer, config);

  fs::create_directories(out_dir);
  const fs::path traces_path = fs::path(out_dir) / "traces.csv";
  write_rank_traces(traces_path, traces);

  ordered_json flags = scorer_flags(scorer);
  flags["arrival_mode"] = dataset.arrival_mode;
  flags["retention"] = retention;
  flags["horizon"] = config.horizon;
  write_run_manifest(out_dir, "simulate", flags, {dataset.gallery, dataset.probes},
                     {"traces.csv"});

  std::size_t breakpoints = 0;
  for (const RankTrace& t : traces) breakpoints += t.breakpoints.size();
  out << "simulated " << gallery.events.size() << " events for " << probes.size()
      << " probes (" << breakpoints << " breakpoints) -> " << traces_path.string()
      << "\n";
  return 0;
}

int cmd_rpc(const std::string& traces_path, std::optional<double> horizon,
            const std::string& ranks_text, const std::string& grid_text,
            const std::string& grid_log_text, bool plot, const std::string& out_dir,
            std::ostream& out) {
  std::optional<double> h = horizon;
  if (!h) h = sibling_manifest_horizon(traces_path);
  if (!h)
    throw std::invalid_argument(
        "horizon unknown: pass --horizon or keep run-manifest.json next to the traces");

  const std::vector<RankTrace> traces = read_rank_traces(traces_path, *h);
  const std::vector<int> rank_levels = parse_ranks(ranks_text);

  std::vector<double> grid;
  if (!grid_text.empty()) {
    grid = parse_grid(grid_text);
  } else {
    LogGridSpec spec = grid_log_text.empty() ? LogGridSpec{}
                                             : parse_log_grid(grid_log_text);
    grid = log_duration_grid(spec.lo, spec.hi.value_or(*h), spec.points);
  }

  std::vector<PersistenceSummary> summaries;
  summaries.reserve(traces.size());
  for (const RankTrace& t : traces) summaries.push_back(persistence(t, rank_levels));
  const RpcTable table = compute_rpc(summaries, rank_levels, grid);

  fs::create_directories(out_dir);
  write_rpc(fs::path(out_dir) / "rpc.csv", table);

  // Longest-stay summaries with their censoring flags.
  {
    std::ofstream pout(fs::path(out_dir) / "persistence.csv", std::ios::binary);
    if (!pout.is_open())
      throw IoError("cannot write " + (fs::path(out_dir) / "persistence.csv").string());
    pout << "probe_id,rank,duration_seconds,censored\n";
    for (const PersistenceSummary& s : summaries)
      for (const auto& r : s.per_rank)
        pout << s.probe_id << ',' << r.rank_level << ','
             << format_double(r.max_contiguous_duration) << ','
             << (r.censored ? "true" : "false") << '\n';
  }

  std::vector<std::string> outputs{"rpc.csv", "persistence.csv"};
  if (plot) {
    std::ofstream svg(fs::path(out_dir) / "rpc.svg", std::ios::binary);
    svg << rpc_svg(table);
    outputs.push_back("rpc.svg");
  }

  ordered_json flags;
  flags["horizon"] = *h;
  flags["ranks"] = rank_levels;
  flags["grid_points"] = grid.size();
  write_run_manifest(out_dir, "rpc", flags, {traces_path}, outputs);

  out << "rpc over " << traces.size() << " probes, " << rank_levels.size()
      << " rank levels, " << grid.size() << " durations -> "
      << (fs::path(out_dir) / "rpc.csv").string() << "\n";
  return 0;
}

int cmd_cmc(const DatasetArgs& dataset, const ScorerArgs& scorer_args,
            std::optional<int> max_rank, bool plot, const std::string& out_dir,
            std::ostream& out, std::ostream& err) {
  const GalleryData gallery = read_gallery_stream(dataset.gallery, dataset.read_options());
  const ProbeSet probes = read_probes(dataset.probes, gallery.manifest.dim);

  const FinalRanks final = final_best_ranks(gallery.events, probes, scorer_args.scorer());
  for (const std::string& id : final.excluded_probes)
    err << "warning: probe " << id << " has no true match; excluded from CMC\n";

  std::vector<int> ranks;
  ranks.reserve(final.best_rank.size());
  for (const auto& [id, r] : final.best_rank) ranks.push_back(r);

  const int k_max = max_rank.value_or(static_cast<int>(gallery.events.size()));
  const CmcTable table = compute_cmc(ranks, k_max);

  fs::create_directories(out_dir);
  write_cmc(fs::path(out_dir) / "cmc.csv", table);
  std::vector<std::string> outputs{"cmc.csv"};
  if (plot) {
    std::ofstream svg(fs::path(out_dir) / "cmc.svg", std::ios::binary);
    svg << cmc_svg(table);
    outputs.push_back("cmc.svg");
  }

  ordered_json flags = scorer_flags(scorer_args.scorer());
  flags["max_rank"] = k_max;
  flags["arrival_mode"] = dataset.arrival_mode;
  write_run_manifest(out_dir, "cmc", flags, {dataset.gallery, dataset.probes}, outputs);

  out << "cmc over " << ranks.size() << " probes (" << final.excluded_probes.size()
      << " excluded) -> " << (fs::path(out_dir) / "cmc.csv").string() << "\n";
  return 0;
}

int cmd_flow(const DatasetArgs& dataset, double bin_width,
             std::optional<double> horizon, bool plot, const std::string& out_dir,
             std::ostream& out) {
  const GalleryData gallery = read_gallery_stream(dataset.gallery, dataset.read_options());
  const double h = horizon.value_or(gallery.manifest.horizon);
  const FlowDensityProfile profile = flow_density(gallery.events, bin_width, h);

  fs::create_directories(out_dir);
  write_flow(fs::path(out_dir) / "flow.csv", profile);
  std::vector<std::string> outputs{"flow.csv"};
  if (plot) {
    std::ofstream svg(fs::path(out_dir) / "flow.svg", std::ios::binary);
    svg << flow_svg(profile);
    outputs.push_back("flow.svg");
  }

  ordered_json flags;
  flags["bin_width"] = bin_width;
  flags["horizon"] = h;
  flags["arrival_mode"] = dataset.arrival_mode;
  write_run_manifest(out_dir, "flow", flags, {dataset.gallery}, outputs);

  out << "flow density: " << profile.event_count() << " events in "
      << profile.counts.size() << " bins -> "
      << (fs::path(out_dir) / "flow.csv").string() << "\n";
  return 0;
}

int cmd_synth(const SynthConfig& config, const std::string& rate_schedule_text,
              const std::string& frames_text, const std::string& name,
              const std::string& out_dir, std::ostream& out) {
  SynthConfig cfg = config;
  if (!rate_schedule_text.empty())
    cfg.rate_schedule = parse_rate_schedule(rate_schedule_text);
  if (!frames_text.empty()) {
    const auto [lo, hi] = parse_frames_range(frames_text);
    cfg.frames_min = lo;
    cfg.frames_max = hi;
  }

  const SynthDataset dataset = generate(cfg);

  fs::create_directories(out_dir);
  const fs::path gallery_path = fs::path(out_dir) / (name + ".gallery.jsonl");
  const fs::path probes_path = fs::path(out_dir) / (name + ".probes.jsonl");
  write_gallery_stream(gallery_path, dataset.events, cfg.horizon);
  write_probes(probes_path, dataset.probes);

  ordered_json flags;
  flags["seed"] = cfg.seed;
  flags["horizon"] = cfg.horizon;
  flags["rate"] = cfg.arrival_rate;
  ordered_json schedule = ordered_json::array();
  for (const RateSegment& seg : cfg.rate_schedule)
    schedule.push_back({{"start", seg.start}, {"rate", seg.rate}});
  flags["rate_schedule"] = schedule;
  flags["dim"] = cfg.dim;
  flags["identities"] = cfg.n_identities;
  flags["probes"] = cfg.n_probes;
  flags["reappearances"] = cfg.reappearances_per_probe;
  flags["sigma_within"] = cfg.sigma_within;
  flags["sigma_between"] = cfg.sigma_between;
  flags["frames_min"] = cfg.frames_min;
  flags["frames_max"] = cfg.frames_max;
  write_run_manifest(out_dir, "synth", flags, {},
                     {gallery_path.filename().string(),
                      probes_path.filename().string()});

  out << "generated " << dataset.events.size() << " gallery tracks and "
      << dataset.probes.size() << " probes -> " << gallery_path.string() << "\n";
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& name_a, const std::string& name_b,
                const std::string& out_dir, std::ostream& out) {
  const RpcTable a = read_rpc(path_a);
  const RpcTable b = read_rpc(path_b);
  const DominanceReport report = compare(a, b);

  out << render_dominance(report, name_a, name_b);

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / "compare.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv.is_open()) throw IoError("cannot write " + csv_path.string());
  csv << "rank,duration_seconds,fraction_a,fraction_b,gap\n";
  for (std::size_t ri = 0; ri < a.rank_levels.size(); ++ri)
    for (std::size_t di = 0; di < a.duration_grid.size(); ++di)
      csv << a.rank_levels[ri] << ',' << format_double(a.duration_grid[di]) << ','
          << format_double(a.values[ri][di]) << ',' << format_double(b.values[ri][di])
          << ',' << format_double(a.values[ri][di] - b.values[ri][di]) << '\n';

  ordered_json flags;
  flags["name_a"] = name_a;
  flags["name_b"] = name_b;
  write_run_manifest(out_dir, "compare", flags, {path_a, path_b}, {"compare.csv"});
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"temporal person re-id evaluation: replay a growing gallery, "
               "track probe ranks over time, and reduce them to rank "
               "persistence curves, CMC, and flow density"};
  app.name("treid");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::function<int()> action;

  // validate
  {
    auto* cmd = app.add_subcommand("validate", "check a gallery/probe file pair");
    auto dataset = std::make_shared<DatasetArgs>();
    auto out_dir = std::make_shared<std::string>();
    dataset->attach(cmd);
    cmd->add_option("--out", *out_dir, "optional report directory");
    cmd->callback([&action, dataset, out_dir, &out]() {
      action = [dataset, out_dir, &out]() {
        return cmd_validate(*dataset, *out_dir, out);
      };
    });
  }

  // simulate
  {
    auto* cmd = app.add_subcommand("simulate", "replay the stream and write rank traces");
    auto dataset = std::make_shared<DatasetArgs>();
    auto scorer = std::make_shared<ScorerArgs>();
    auto retention = std::make_shared<std::string>("inf");
    auto horizon = std::make_shared<std::optional<double>>();
    auto out_dir = std::make_shared<std::string>();
    dataset->attach(cmd);
    scorer->attach(cmd);
    cmd->add_option("--retention", *retention, "retention window seconds or \"inf\"");
    cmd->add_option("--horizon", *horizon, "observation end (default: from gallery)");
    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->callback([&action, dataset, scorer, retention, horizon, out_dir, &out, &err]() {
      action = [dataset, scorer, retention, horizon, out_dir, &out, &err]() {
        return cmd_simulate(*dataset, *scorer, *retention, *horizon, *out_dir, out, err);
      };
    });
  }

  // rpc
  {
    auto* cmd = app.add_subcommand("rpc", "rank persistence curves from traces");
    auto traces = std::make_shared<std::string>();
    auto horizon = std::make_shared<std::optional<double>>();
    auto ranks = std::make_shared<std::string>("1,5,10,20");
    auto grid = std::make_shared<std::string>();
    auto grid_log = std::make_shared<std::string>();
    auto plot = std::make_shared<bool>(false);
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--traces", *traces, "trace CSV from simulate")->required();
    cmd->add_option("--horizon", *horizon, "observation end (default: sibling manifest)");
    cmd->add_option("--ranks", *ranks, "rank levels, e.g. 1,5,10,20");
    cmd->add_option("--grid", *grid, "explicit duration grid, e.g. 0,60,300");
    cmd->add_option("--grid-log", *grid_log, "log-spaced grid lo:hi:n (hi may be \"horizon\")");
    cmd->add_flag("--plot", *plot, "also write rpc.svg");
    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->callback([&action, traces, horizon, ranks, grid, grid_log, plot, out_dir, &out]() {
      action = [traces, horizon, ranks, grid, grid_log, plot, out_dir, &out]() {
        return cmd_rpc(*traces, *horizon, *ranks, *grid, *grid_log, *plot, *out_dir, out);
      };
    });
  }

  // cmc
  {
    auto* cmd = app.add_subcommand("cmc", "cumulative match characteristic on the final gallery");
    auto dataset = std::make_shared<DatasetArgs>();
    auto scorer = std::make_shared<ScorerArgs>();
    auto max_rank = std::make_shared<std::optional<int>>();
    auto plot = std::make_shared<bool>(false);
    auto out_dir = std::make_shared<std::string>();
    dataset->attach(cmd);
    scorer->attach(cmd);
    cmd->add_option("--max-rank", *max_rank, "largest rank k (default: gallery size)");
    cmd->add_flag("--plot", *plot, "also write cmc.svg");
    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->callback([&action, dataset, scorer, max_rank, plot, out_dir, &out, &err]() {
      action = [dataset, scorer, max_rank, plot, out_dir, &out, &err]() {
        return cmd_cmc(*dataset, *scorer, *max_rank, *plot, *out_dir, out, err);
      };
    });
  }

  // flow
  {
    auto* cmd = app.add_subcommand("flow", "video flow density of the gallery stream");
    auto dataset = std::make_shared<DatasetArgs>();
    auto bin_width = std::make_shared<double>(60.0);
    auto horizon = std::make_shared<std::optional<double>>();
    auto plot = std::make_shared<bool>(false);
    auto out_dir = std::make_shared<std::string>();
    dataset->attach(cmd, /*need_probes=*/false);
    cmd->add_option("--bin-width", *bin_width, "bin width in seconds");
    cmd->add_option("--horizon", *horizon, "observation end (default: from gallery)");
    cmd->add_flag("--plot", *plot, "also write flow.svg");
    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->callback([&action, dataset, bin_width, horizon, plot, out_dir, &out]() {
      action = [dataset, bin_width, horizon, plot, out_dir, &out]() {
        return cmd_flow(*dataset, *bin_width, *horizon, *plot, *out_dir, out);
      };
    });
  }

  // synth
  {
    auto* cmd = app.add_subcommand("synth", "generate a synthetic labeled workload");
    auto config = std::make_shared<SynthConfig>();
    auto schedule = std::make_shared<std::string>();
    auto frames = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>("synthetic");
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--seed", config->seed, "RNG seed");
    cmd->add_option("--horizon", config->horizon, "stream length in seconds");
    cmd->add_option("--rate", config->arrival_rate, "distractor arrivals per second");
    cmd->add_option("--rate-schedule", *schedule,
                    "piecewise rates t:rate,t:rate,... (overrides --rate)");
    cmd->add_option("--dim", config->dim, "feature dimension");
    cmd->add_option("--identities", config->n_identities, "total identities");
    cmd->add_option("--n-probes", config->n_probes, "probe identities");
    cmd->add_option("--reappearances", config->reappearances_per_probe,
                    "gallery reappearances per probe");
    cmd->add_option("--sigma-within", config->sigma_within, "within-identity spread");
    cmd->add_option("--sigma-between", config->sigma_between, "between-identity spread");
    cmd->add_option("--frames", *frames, "frames per track min:max");
    cmd->add_option("--name", *name, "output file prefix");
    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->callback([&action, config, schedule, frames, name, out_dir, &out]() {
      action = [config, schedule, frames, name, out_dir, &out]() {
        return cmd_synth(*config, *schedule, *frames, *name, *out_dir, out);
      };
    });
  }

  // compare
  {
    auto* cmd = app.add_subcommand("compare", "dominance report for two RPC tables");
    auto path_a = std::make_shared<std::string>();
    auto path_b = std::make_shared<std::string>();
    auto name_a = std::make_shared<std::string>("A");
    auto name_b = std::make_shared<std::string>("B");
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--a", *path_a, "first rpc.csv")->required();
    cmd->add_option("--b", *path_b, "second rpc.csv")->required();
    cmd->add_option("--name-a", *name_a, "label for the first table");
    cmd->add_option("--name-b", *name_b, "label for the second table");
    cmd->add_option("--out", *out_dir, "output directory")->required();
    cmd->callback([&action, path_a, path_b, name_a, name_b, out_dir, &out]() {
      action = [path_a, path_b, name_a, name_b, out_dir, &out]() {
        return cmd_compare(*path_a, *path_b, *name_a, *name_b, *out_dir, out);
      };
    });
  }

  std::vector<const char*> argv;
  argv.push_back("treid");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    return action ? action() : 0;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace treid
