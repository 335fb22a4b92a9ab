#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>

#include "support.hpp"
#include "treid/ingest.hpp"
#include "treid/metrics.hpp"
#include "treid/rng.hpp"
#include "treid/synth.hpp"

using namespace treid;
using namespace treid::test;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("an empty gallery file reads as an empty dataset") {
  TempDir dir;
  write_text(dir.file("empty.gallery.jsonl"), "");
  const GalleryData data = read_gallery_stream(dir.file("empty.gallery.jsonl"));
  CHECK(data.events.empty());
  CHECK(data.manifest.track_count == 0);
  CHECK(data.manifest.dim == 0);

  write_text(dir.file("header.gallery.jsonl"),
             R"({"schema_version":1,"dim":4,"horizon":100.0})"
             "\n");
  const GalleryData with_header =
      read_gallery_stream(dir.file("header.gallery.jsonl"));
  CHECK(with_header.events.empty());
  CHECK(with_header.manifest.dim == 4);
  CHECK(with_header.manifest.horizon == 100.0);
}

TEST_CASE("a single record round-trips through the reader") {
  TempDir dir;
  write_text(
      dir.file("one.gallery.jsonl"),
      R"({"track_id":"t1","identity_id":null,"t_start":100.0,"t_end":120.0,"features":[[1,2,3,4],[5,6,7,8],[9,10,11,12]]})"
      "\n");
  const GalleryData data = read_gallery_stream(dir.file("one.gallery.jsonl"));
  REQUIRE(data.events.size() == 1);
  CHECK(data.manifest.dim == 4);
  CHECK(data.manifest.track_count == 1);
  CHECK(data.events[0].arrival == 120.0);  // track-end arrival by default
  CHECK(data.events[0].track.frames.size() == 3);
  CHECK_FALSE(data.events[0].track.identity_id.has_value());

  const GalleryData by_start = read_gallery_stream(
      dir.file("one.gallery.jsonl"), ReadOptions{ArrivalMode::kTrackStart});
  CHECK(by_start.events[0].arrival == 100.0);
}

TEST_CASE("records are sorted by arrival regardless of file order") {
  TempDir dir;
  write_text(
      dir.file("two.gallery.jsonl"),
      R"({"track_id":"late","identity_id":null,"t_start":0,"t_end":50.0,"features":[[1]]})"
      "\n"
      R"({"track_id":"early","identity_id":null,"t_start":0,"t_end":10.0,"features":[[2]]})"
      "\n");
  const GalleryData data = read_gallery_stream(dir.file("two.gallery.jsonl"));
  REQUIRE(data.events.size() == 2);
  CHECK(data.events[0].track.track_id == "early");
  CHECK(data.events[1].track.track_id == "late");
  CHECK(events_sorted(data.events));
}

TEST_CASE("parse errors name the offending line") {
  TempDir dir;
  write_text(dir.file("bad.gallery.jsonl"),
             R"({"track_id":"ok","identity_id":null,"t_start":0,"t_end":1,"features":[[1]]})"
             "\n{not json\n");
  CHECK_THROWS_WITH_AS(read_gallery_stream(dir.file("bad.gallery.jsonl")),
                       doctest::Contains(":2"), ParseError);
}

TEST_CASE("schema violations are rejected") {
  TempDir dir;

  write_text(dir.file("dim.gallery.jsonl"),
             R"({"track_id":"a","identity_id":null,"t_start":0,"t_end":1,"features":[[1,2]]})"
             "\n"
             R"({"track_id":"b","identity_id":null,"t_start":0,"t_end":2,"features":[[1,2,3]]})"
             "\n");
  CHECK_THROWS_AS(read_gallery_stream(dir.file("dim.gallery.jsonl")), SchemaError);

  write_text(dir.file("version.gallery.jsonl"),
             R"({"schema_version":99,"dim":2})"
             "\n");
  CHECK_THROWS_AS(read_gallery_stream(dir.file("version.gallery.jsonl")),
                  SchemaError);

  write_text(dir.file("horizon.gallery.jsonl"),
             R"({"schema_version":1,"dim":1,"horizon":5.0})"
             "\n"
             R"({"track_id":"a","identity_id":null,"t_start":0,"t_end":50,"features":[[1]]})"
             "\n");
  CHECK_THROWS_AS(read_gallery_stream(dir.file("horizon.gallery.jsonl")),
                  SchemaError);

  write_text(dir.file("times.gallery.jsonl"),
             R"({"track_id":"a","identity_id":null,"t_start":9,"t_end":2,"features":[[1]]})"
             "\n");
  CHECK_THROWS_AS(read_gallery_stream(dir.file("times.gallery.jsonl")), SchemaError);

  CHECK_THROWS_AS(read_gallery_stream(dir.file("does-not-exist.jsonl")), IoError);
}

TEST_CASE("probe files enforce unique ids and matching dimension") {
  TempDir dir;
  write_text(
      dir.file("one.probes.jsonl"),
      R"({"probe_id":"P1","track_id":"P1","identity_id":"A","t_start":0,"t_end":0,"features":[[1,2],[3,4],[5,6],[7,8],[9,10]]})"
      "\n");
  const ProbeSet probes = read_probes(dir.file("one.probes.jsonl"), 2);
  REQUIRE(probes.size() == 1);
  CHECK(probes[0].track.frames.size() == 5);
  CHECK(probes[0].identity_id == "A");

  write_text(
      dir.file("dup.probes.jsonl"),
      R"({"probe_id":"P1","track_id":"t1","identity_id":"A","t_start":0,"t_end":0,"features":[[1]]})"
      "\n"
      R"({"probe_id":"P1","track_id":"t2","identity_id":"B","t_start":0,"t_end":0,"features":[[2]]})"
      "\n");
  CHECK_THROWS_WITH_AS(read_probes(dir.file("dup.probes.jsonl"), 1),
                       doctest::Contains("duplicate probe_id"), SchemaError);

  CHECK_THROWS_AS(read_probes(dir.file("one.probes.jsonl"), 3), SchemaError);
}

TEST_CASE("seven labeled probes read back as seven") {
  TempDir dir;
  std::string text;
  for (int p = 0; p < 7; ++p)
    text += R"({"probe_id":"P)" + std::to_string(p) + R"(","track_id":"P)" +
            std::to_string(p) + R"(","identity_id":"actor)" + std::to_string(p) +
            R"(","t_start":0,"t_end":0,"features":[[1,2]]})" + "\n";
  write_text(dir.file("seven.probes.jsonl"), text);
  const ProbeSet probes = read_probes(dir.file("seven.probes.jsonl"), 2);
  CHECK(probes.size() == 7);
}

TEST_CASE("gallery and probe writers round-trip a generated dataset") {
  SynthConfig cfg;
  cfg.seed = 606;
  cfg.horizon = 300.0;
  cfg.arrival_rate = 0.15;
  cfg.dim = 6;
  cfg.n_probes = 3;
  cfg.n_identities = 9;
  const SynthDataset ds = generate(cfg);

  TempDir dir;
  write_gallery_stream(dir.file("x.gallery.jsonl"), ds.events, cfg.horizon);
  write_probes(dir.file("x.probes.jsonl"), ds.probes);

  const GalleryData back = read_gallery_stream(dir.file("x.gallery.jsonl"));
  CHECK(back.events == ds.events);
  CHECK(back.manifest.horizon == cfg.horizon);
  CHECK(back.manifest.dim == cfg.dim);

  const ProbeSet probes = read_probes(dir.file("x.probes.jsonl"), cfg.dim);
  CHECK(probes == ds.probes);
}

TEST_CASE("trace CSV round-trips, including absent rows and empty traces") {
  std::vector<RankTrace> traces;
  traces.push_back(RankTrace{"p0", {{120.0, 1}, {360.5, 4}, {400.0, std::nullopt},
                                    {450.25, 2}},
                             600.0});
  traces.push_back(RankTrace{"p1", {}, 600.0});  // never matched
  traces.push_back(RankTrace{"p2", {{0.0, 3}}, 600.0});

  TempDir dir;
  write_rank_traces(dir.file("traces.csv"), traces);
  const std::vector<RankTrace> back = read_rank_traces(dir.file("traces.csv"), 600.0);
  CHECK(back == traces);

  const std::string text = read_text(dir.file("traces.csv"));
  CHECK(text.find("probe_id,t_seconds,rank\n") == 0);
  CHECK(text.find("p0,400,\n") != std::string::npos);  // absent = empty rank
  CHECK(text.find("p1,0,\n") != std::string::npos);    // placeholder row
}

TEST_CASE("rpc CSV round-trips exactly") {
  RpcTable table;
  table.rank_levels = {1, 5};
  table.duration_grid = {0.0, 60.0, 3600.0 / 7.0};
  table.values = {{1.0 / 7.0, 1.0 / 7.0, 0.0}, {5.0 / 7.0, 3.0 / 7.0, 1.0 / 3.0}};

  TempDir dir;
  write_rpc(dir.file("rpc.csv"), table);
  CHECK(read_rpc(dir.file("rpc.csv")) == table);
}

TEST_CASE("a one-level two-duration RPC writes two data rows") {
  RpcTable table;
  table.rank_levels = {10};
  table.duration_grid = {30.0, 60.0};
  table.values = {{0.75, 0.5}};
  TempDir dir;
  write_rpc(dir.file("rpc.csv"), table);
  CHECK(read_text(dir.file("rpc.csv")) ==
        "rank,duration_seconds,fraction\n10,30,0.75\n10,60,0.5\n");
}

TEST_CASE("cmc CSV format and round-trip") {
  CmcTable table;
  table.max_rank = 2;
  table.values = {0.5, 1.0};
  TempDir dir;
  write_cmc(dir.file("cmc.csv"), table);
  CHECK(read_text(dir.file("cmc.csv")) == "rank,fraction\n1,0.5\n2,1\n");
  CHECK(read_cmc(dir.file("cmc.csv")) == table);
}

TEST_CASE("flow CSV round-trips through the rate representation") {
  FlowDensityProfile profile;
  profile.bin_width = 7.0;
  profile.counts = {3, 0, 11, 2};
  TempDir dir;
  write_flow(dir.file("flow.csv"), profile);
  const std::string text = read_text(dir.file("flow.csv"));
  CHECK(text.find("bin_start_seconds,people_per_second\n") == 0);
  CHECK(read_flow(dir.file("flow.csv"), 7.0) == profile);
}

TEST_CASE("table round-trips hold for random contents") {
  SplitMix64 rng(71);
  for (int round = 0; round < 20; ++round) {
    RpcTable rpc;
    const int levels = 1 + static_cast<int>(rng.next_below(5));
    const int durations = 1 + static_cast<int>(rng.next_below(40));
    for (int r = 0; r < levels; ++r) rpc.rank_levels.push_back((r + 1) * 3);
    for (int d = 0; d < durations; ++d)
      rpc.duration_grid.push_back(rng.uniform(0.0, 1e5));
    std::sort(rpc.duration_grid.begin(), rpc.duration_grid.end());
    rpc.values.assign(levels, {});
    for (auto& row : rpc.values)
      for (int d = 0; d < durations; ++d) row.push_back(rng.next_double());

    TempDir dir;
    write_rpc(dir.file("rpc.csv"), rpc);
    CHECK(read_rpc(dir.file("rpc.csv")) == rpc);

    CmcTable cmc;
    cmc.max_rank = 1 + static_cast<int>(rng.next_below(30));
    for (int k = 0; k < cmc.max_rank; ++k) cmc.values.push_back(rng.next_double());
    write_cmc(dir.file("cmc.csv"), cmc);
    CHECK(read_cmc(dir.file("cmc.csv")) == cmc);
  }
}

TEST_CASE("format_double emits shortest exact decimal") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(36000.0) == "36000");
  CHECK(format_double(1.0 / 7.0) == "0.14285714285714285");
  // Round-trip exactness on awkward values.
  SplitMix64 rng(73);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(-1e6, 1e6);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("file digests are stable and content-sensitive") {
  TempDir dir;
  write_text(dir.file("a"), "hello");
  write_text(dir.file("b"), "hello");
  write_text(dir.file("c"), "world");
  CHECK(file_digest(dir.file("a")) == file_digest(dir.file("b")));
  CHECK(file_digest(dir.file("a")) != file_digest(dir.file("c")));
  CHECK(file_digest(dir.file("a")).size() == 16);
}
