#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "treid/cli.hpp"
#include "treid/ingest.hpp"

using namespace treid;
using namespace treid::test;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.is_open());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

// One tiny hand-written dataset used across the cases.
void write_singleton_dataset(const TempDir& dir) {
  std::vector<GalleryEvent> events{
      event_for(track_at_distance("m1", "idA", 120.0, 2.0))};
  write_gallery_stream(dir.file("tiny.gallery.jsonl"), events, 600.0);
  write_probes(dir.file("tiny.probes.jsonl"), {origin_probe("p0", "idA")});
}

}  // namespace

TEST_CASE("validate accepts a clean pair and rejects duplicates") {
  TempDir dir;
  write_singleton_dataset(dir);
  const CliResult ok = run({"validate", "--gallery",
                            dir.file("tiny.gallery.jsonl").string(), "--probes",
                            dir.file("tiny.probes.jsonl").string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("ok") != std::string::npos);

  std::vector<GalleryEvent> dup{
      event_for(track_at_distance("m1", "idA", 120.0, 2.0)),
      event_for(track_at_distance("m1", "idA", 130.0, 2.0))};
  write_gallery_stream(dir.file("dup.gallery.jsonl"), dup, 600.0);
  const CliResult bad = run({"validate", "--gallery",
                             dir.file("dup.gallery.jsonl").string(), "--probes",
                             dir.file("tiny.probes.jsonl").string()});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("duplicate track_id \"m1\"") != std::string::npos);
}

TEST_CASE("missing input files exit with the I/O code") {
  const CliResult r = run({"validate", "--gallery", "/nonexistent/x.jsonl",
                           "--probes", "/nonexistent/y.jsonl"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("simulate writes the singleton trace and is byte-deterministic") {
  TempDir dir;
  write_singleton_dataset(dir);
  const std::string gallery = dir.file("tiny.gallery.jsonl").string();
  const std::string probes = dir.file("tiny.probes.jsonl").string();

  const CliResult first = run({"simulate", "--gallery", gallery, "--probes", probes,
                               "--out", dir.file("run1").string()});
  REQUIRE(first.code == 0);
  const std::string traces = slurp(dir.file("run1/traces.csv"));
  CHECK(traces == "probe_id,t_seconds,rank\np0,120,1\n");

  const CliResult second = run({"simulate", "--gallery", gallery, "--probes", probes,
                                "--out", dir.file("run2").string()});
  REQUIRE(second.code == 0);
  CHECK(slurp(dir.file("run2/traces.csv")) == traces);
  CHECK(slurp(dir.file("run2/run-manifest.json")) ==
        slurp(dir.file("run1/run-manifest.json")));
}

TEST_CASE("the full pipeline runs off a synthesized workload") {
  TempDir dir;
  const CliResult synth =
      run({"synth", "--out", dir.file("data").string(), "--seed", "11", "--horizon",
           "900", "--rate", "0.12", "--n-probes", "4", "--identities", "16",
           "--reappearances", "2", "--dim", "8", "--sigma-within", "0.3"});
  REQUIRE(synth.code == 0);

  const std::string gallery = dir.file("data/synthetic.gallery.jsonl").string();
  const std::string probes = dir.file("data/synthetic.probes.jsonl").string();

  REQUIRE(run({"validate", "--gallery", gallery, "--probes", probes}).code == 0);

  const CliResult sim = run({"simulate", "--gallery", gallery, "--probes", probes,
                             "--out", dir.file("run").string()});
  REQUIRE(sim.code == 0);

  // Horizon comes from the run manifest next to the traces.
  const CliResult rpc =
      run({"rpc", "--traces", dir.file("run/traces.csv").string(), "--out",
           dir.file("run").string(), "--plot"});
  REQUIRE(rpc.code == 0);
  const RpcTable table = read_rpc(dir.file("run/rpc.csv"));
  CHECK(table.rank_levels == std::vector<int>{1, 5, 10, 20});
  CHECK(table.duration_grid.size() == 60);
  CHECK(table.duration_grid.back() == 900.0);
  CHECK(count_occurrences(slurp(dir.file("run/rpc.svg")), "<polyline") == 4);
  CHECK(std::filesystem::exists(dir.file("run/persistence.csv")));

  const CliResult cmc = run({"cmc", "--gallery", gallery, "--probes", probes,
                             "--out", dir.file("run").string(), "--plot"});
  REQUIRE(cmc.code == 0);
  const CmcTable cmc_table = read_cmc(dir.file("run/cmc.csv"));
  CHECK(cmc_table.values.back() == 1.0);

  const CliResult flow = run({"flow", "--gallery", gallery, "--bin-width", "60",
                              "--out", dir.file("run").string()});
  REQUIRE(flow.code == 0);
  CHECK(std::filesystem::exists(dir.file("run/flow.csv")));
}

TEST_CASE("compare reports identical curves and rejects mismatched grids") {
  TempDir dir;
  RpcTable a;
  a.rank_levels = {5};
  a.duration_grid = {0.0, 60.0};
  a.values = {{1.0, 0.5}};
  write_rpc(dir.file("a.csv"), a);

  const CliResult same = run({"compare", "--a", dir.file("a.csv").string(), "--b",
                              dir.file("a.csv").string(), "--out",
                              dir.file("cmp").string()});
  CHECK(same.code == 0);
  CHECK(same.out.find("no strict dominance; curves identical") != std::string::npos);
  CHECK(std::filesystem::exists(dir.file("cmp/compare.csv")));

  RpcTable b = a;
  b.duration_grid = {0.0, 120.0};
  write_rpc(dir.file("b.csv"), b);
  const CliResult mismatch = run({"compare", "--a", dir.file("a.csv").string(),
                                  "--b", dir.file("b.csv").string(), "--out",
                                  dir.file("cmp2").string()});
  CHECK(mismatch.code == 1);
}

TEST_CASE("rpc without a horizon or manifest fails cleanly") {
  TempDir dir;
  std::vector<RankTrace> traces{RankTrace{"p0", {{10.0, 1}}, 100.0}};
  write_rank_traces(dir.file("traces.csv"), traces);
  const CliResult r = run({"rpc", "--traces", dir.file("traces.csv").string(),
                           "--out", dir.file("out").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("horizon") != std::string::npos);

  const CliResult with_flag =
      run({"rpc", "--traces", dir.file("traces.csv").string(), "--out",
           dir.file("out").string(), "--horizon", "100", "--grid", "0,50,99"});
  CHECK(with_flag.code == 0);
}

TEST_CASE("simulate honors scorer and retention flags") {
  TempDir dir;
  write_singleton_dataset(dir);
  const std::string gallery = dir.file("tiny.gallery.jsonl").string();
  const std::string probes = dir.file("tiny.probes.jsonl").string();

  const CliResult cosine =
      run({"simulate", "--gallery", gallery, "--probes", probes, "--scorer",
           "cosine", "--retention", "100", "--out", dir.file("c").string()});
  REQUIRE(cosine.code == 0);
  // Match arrives at 120 and expires at 220 under the 100 s window.
  CHECK(slurp(dir.file("c/traces.csv")) ==
        "probe_id,t_seconds,rank\np0,120,1\np0,220,\n");

  const CliResult bad = run({"simulate", "--gallery", gallery, "--probes", probes,
                             "--retention", "-5", "--out", dir.file("d").string()});
  CHECK(bad.code == 1);
}

TEST_CASE("unknown flags are a usage error") {
  const CliResult r = run({"simulate", "--no-such-flag"});
  CHECK(r.code != 0);
}
